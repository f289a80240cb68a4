"""Exception hierarchy shared by all warpgeo modules.

Exit-code contract for the CLI: 0 success, 1 check failure,
2 usage/configuration error, 3 numerical/domain error.
"""


class WarpgeoError(Exception):
    exit_code = 1


class ConfigError(WarpgeoError):
    """Invalid construction arguments (bad dimensions, orders, models)."""

    exit_code = 2


class UsageError(WarpgeoError):
    """Operands or call patterns that can never be valid (shape mismatch,
    unbound identifier, empty point list)."""

    exit_code = 2


class SceneError(ConfigError):
    """Malformed or inconsistent scene file."""


class ExprSyntaxError(SceneError):
    def __init__(self, message, offset, expected=()):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.expected = frozenset(expected)


class EvalDomainError(WarpgeoError):
    """A numeric operation left its domain (log of a non-positive value,
    warp factor <= 0, chart boundary)."""

    exit_code = 3

    def __init__(self, message, value=None, span=None):
        super().__init__(message)
        self.value = value
        self.span = span


class SingularJetError(EvalDomainError):
    """Division by a jet whose value coefficient is (numerically) zero."""


class DegenerateImmersionError(EvalDomainError):
    """Induced metric not invertible at the queried point."""

    def __init__(self, message, det=None):
        super().__init__(message, value=det)
        self.det = det
