import os


class ShadowbanSettings:
    """Process-wide knobs read from the environment.

    Values are resolved on every access so tests can patch the environment.
    """

    @property
    def sweep_workers(self) -> int:
        return max(1, int(os.environ.get('SHADOWBAN_SWEEP_WORKERS') or '1'))

    @property
    def oracle_max_edges(self) -> int:
        return int(os.environ.get('SHADOWBAN_ORACLE_MAX_EDGES') or '1000')

    @property
    def feasibility_slack(self) -> float:
        return 1e-9


settings = ShadowbanSettings()

__all__ = 'settings'
