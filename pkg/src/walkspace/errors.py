"""Exception types shared across the package."""


class WalkspaceError(Exception):
    """Base class for all errors raised by this package."""


class MeshFormatError(WalkspaceError):
    """Raised when an OBJ file cannot be parsed.

    Carries the 1-based line number of the offending directive when known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class EmptyMeshError(WalkspaceError):
    """Raised when an operation requires faces but the mesh has none."""


class NoFloorError(WalkspaceError):
    """Raised when no horizontal band qualifies as a floor."""


class ConfigError(WalkspaceError):
    """Raised for invalid or contradictory configuration values."""


class InvalidEndpointError(WalkspaceError):
    """Raised when a route endpoint lies outside the detected floor."""


class SceneSpecError(WalkspaceError):
    """Raised when a scene description violates its constraints.

    The message lists every violation, semicolon-separated.
    """


class MismatchError(WalkspaceError):
    """Raised when evaluation inputs describe different meshes."""
