from typing import Optional


class ShadowbanException(Exception):
    def __init__(self, content, exit_code: int = 1):
        super(ShadowbanException, self).__init__(content)
        self.content = content
        self.exit_code = exit_code


class InvalidArgumentException(ShadowbanException):
    def __init__(self, content='Invalid argument'):
        super(InvalidArgumentException, self).__init__(content)


class ValidationException(ShadowbanException):
    def __init__(self, content='Validation failed'):
        super(ValidationException, self).__init__(content)


class ParseException(ShadowbanException):
    def __init__(self, content, path: Optional[str] = None, line: Optional[int] = None):
        location = path or '<input>'
        if line is not None:
            location = f'{location}:{line}'
        super(ParseException, self).__init__(f'{location}: {content}')
        self.path = path
        self.line = line


class ConfigException(ShadowbanException):
    def __init__(self, content, key_path: Optional[str] = None):
        message = f'{key_path}: {content}' if key_path else content
        super(ConfigException, self).__init__(message)
        self.key_path = key_path


class OracleLimitException(ShadowbanException):
    def __init__(self, edge_count: int, max_edges: int):
        super(OracleLimitException, self).__init__(
            f'oracle accepts at most {max_edges} edges, got {edge_count}')
        self.edge_count = edge_count
        self.max_edges = max_edges


class StabilityException(ShadowbanException):
    def __init__(self, content='Euler step violates the stability bound'):
        super(StabilityException, self).__init__(content)


class SimulationAbortedException(ShadowbanException):
    def __init__(self, content, frame_index: int):
        super(SimulationAbortedException, self).__init__(f'{content} (frame {frame_index})', exit_code=2)
        self.frame_index = frame_index


class StorageException(ShadowbanException):
    def __init__(self, content, path: str):
        super(StorageException, self).__init__(f'{path}: {content}', exit_code=2)
        self.path = path
