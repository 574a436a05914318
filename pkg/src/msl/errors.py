class MatroidError(ValueError):
    """Invalid input: bad element sets, malformed decompositions, bad parameters."""


class ResourceLimitError(RuntimeError):
    """An exhaustive scan or a rejection sampler hit its configured cap."""


class UnsupportedModeError(RuntimeError):
    """Exact evaluation requested for an algorithm without a finite coin space."""
