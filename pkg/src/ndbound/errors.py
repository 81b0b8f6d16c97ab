"""Exception hierarchy for ndbound."""

from __future__ import annotations


class DiscoveryError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(DiscoveryError, ValueError):
    pass


class EmptyVector(ValidationError):
    def __init__(self) -> None:
        super().__init__("probability vector is empty")


class OutOfRange(ValidationError):
    """A value falls outside its admissible interval.

    ``index`` is the position in the offending vector, or ``None`` when the
    value is a scalar argument such as an evaluation point.
    """

    def __init__(self, index: int | None, value: float, allowed: str = "(0, 1]") -> None:
        self.index = index
        self.value = value
        where = f"index {index}" if index is not None else "argument"
        super().__init__(f"{where}: value {value!r} outside {allowed}")


class NonFinite(ValidationError):
    def __init__(self, index: int, value: float) -> None:
        self.index = index
        self.value = value
        super().__init__(f"index {index}: non-finite value {value!r}")


class BadPair(ValidationError):
    def __init__(self, j: int, k: int, n: int) -> None:
        self.j, self.k, self.n = j, k, n
        super().__init__(f"invalid neighbor pair ({j}, {k}) for n={n}")


class BlockOutOfRange(ValidationError):
    def __init__(self, n: int, u: int, shifted: bool) -> None:
        self.n, self.u, self.shifted = n, u, shifted
        kind = "shifted" if shifted else "unshifted"
        super().__init__(f"{kind} 2x2 block u={u} does not fit in a {n}x{n} matrix")


class NotSquare(ValidationError):
    def __init__(self, shape: tuple) -> None:
        self.shape = shape
        super().__init__(f"matrix of shape {shape} is not square")


class TooFewReps(ValidationError):
    def __init__(self, reps: int, minimum: int) -> None:
        self.reps, self.minimum = reps, minimum
        super().__init__(f"reps={reps} below the minimum of {minimum}")


class TooManyNeighbors(DiscoveryError):
    def __init__(self, n: int, cap: int) -> None:
        self.n, self.cap = n, cap
        super().__init__(f"{n} neighbors exceeds the exact-enumeration cap of {cap}")


class NoConvergence(DiscoveryError):
    """An iterative procedure exhausted its budget.

    ``partial`` holds whatever the procedure had produced when it stopped
    (a ConvergenceTrace for averaging, the running estimate for quadrature).
    """

    def __init__(self, message: str, partial=None) -> None:
        self.partial = partial
        super().__init__(message)


class SlotCapExceeded(DiscoveryError):
    def __init__(self, cap: int) -> None:
        self.cap = cap
        super().__init__(f"a replication exceeded the slot cap of {cap}")
