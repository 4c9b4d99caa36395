from importlib import import_module

from shadowban.helpers.exceptions import ShadowbanException


class PackageUtils:
    @staticmethod
    def load_package(name: str):
        try:
            return import_module(name)
        except ImportError:
            raise ShadowbanException(name + ' is not installed, install the "oracle" extra')
