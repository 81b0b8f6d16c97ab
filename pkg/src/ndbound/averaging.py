"""Pairwise averaging and the sweep matrices that drive it to the mean.

One sweep averages disjoint neighbouring pairs twice: first ``(1,2), (3,4),
...`` (matrix ``Omega``), then ``(2,3), (4,5), ...`` (``OmegaTilde``). The
combined sweep ``W = OmegaTilde @ Omega`` is doubly stochastic, irreducible
and has a positive diagonal, so ``W**u`` tends to ``ones / n`` and repeated
sweeps send any vector to its mean. Pair numbering in the docstrings below is
1-based to match the usual matrix notation; the code is 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import MAX_EXACT_N, ProbabilityVector, as_pair, validate
from .errors import BlockOutOfRange, NoConvergence, NotSquare, ValidationError
from .expectation import expected_discovery_time

DS_TOL = 1e-15


@dataclass(frozen=True)
class SweepMatrix:
    entries: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.entries, dtype=float)
        if not is_doubly_stochastic(m, DS_TOL):
            raise ValidationError("matrix is not doubly stochastic")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __matmul__(self, other):
        if isinstance(other, SweepMatrix):
            return SweepMatrix(self.entries @ other.entries)
        return self.entries @ other


@dataclass(frozen=True)
class ConvergenceTrace:
    iterations: int
    final: tuple[float, ...]
    max_deviation: float
    mean: float
    deviations: tuple[float, ...] = field(default=(), repr=False)


def is_doubly_stochastic(m, tol: float = 1e-12) -> bool:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquare(m.shape)
    if not np.all(np.isfinite(m)) or np.any(m < -tol):
        return False
    return bool(
        np.all(np.abs(m.sum(axis=1) - 1.0) <= tol) and np.all(np.abs(m.sum(axis=0) - 1.0) <= tol)
    )


def pair_average(p, pair) -> ProbabilityVector:
    """Replace ``p_j`` and ``p_k`` by their arithmetic mean."""
    p = validate(p)
    pair = as_pair(pair).check(p.n)
    vals = list(p.values)
    avg = 0.5 * (vals[pair.j] + vals[pair.k])
    vals[pair.j] = vals[pair.k] = avg
    return ProbabilityVector(tuple(vals))


def build_omega(n: int, u: int, shifted: bool = False) -> SweepMatrix:
    """Identity with one ``0.5 * ones(2, 2)`` block.

    The block covers rows/columns ``(2u-1, 2u)`` (1-based), or ``(2u, 2u+1)``
    when ``shifted``.
    """
    if n < 2:
        raise ValidationError(f"n={n} must be at least 2")
    start = 2 * u - 1 if shifted else 2 * u - 2
    if u < 1 or start + 1 >= n:
        raise BlockOutOfRange(n, u, shifted)
    m = np.eye(n)
    m[start : start + 2, start : start + 2] = 0.5
    return SweepMatrix(m)


def _sweep_counts(n: int) -> tuple[int, int]:
    # odd n: both passes average (n-1)/2 pairs. even n: the first pass covers
    # every index in n/2 pairs and the shifted pass drops the last row/column.
    if n % 2:
        return (n - 1) // 2, (n - 1) // 2
    return n // 2, n // 2 - 1


def build_sweep(n: int) -> tuple[SweepMatrix, SweepMatrix, SweepMatrix]:
    """Return ``(Omega, OmegaTilde, W)`` with ``W = OmegaTilde @ Omega``."""
    if n < 2:
        raise ValidationError(f"n={n} must be at least 2")
    plain, shifted = _sweep_counts(n)
    omega = np.eye(n)
    for u in range(1, plain + 1):
        omega = build_omega(n, u).entries @ omega
    omega_t = np.eye(n)
    for u in range(1, shifted + 1):
        omega_t = build_omega(n, u, shifted=True).entries @ omega_t
    return SweepMatrix(omega), SweepMatrix(omega_t), SweepMatrix(omega_t @ omega)


def iterate_average(p, tol: float = 1e-10, max_iters: int = 100_000) -> ConvergenceTrace:
    """Apply the sweep ``W`` until every entry is within ``tol`` of the mean.

    Works for any real vector. The limit is known in advance (the input mean,
    which ``W`` preserves), so convergence is measured against it directly.
    Raises :class:`NoConvergence` carrying the trace so far if ``max_iters``
    sweeps are not enough.
    """
    if tol <= 0:
        raise ValidationError(f"tol={tol!r} must be positive")
    x = np.array(list(p), dtype=float)
    if x.ndim != 1 or x.size < 1:
        raise ValidationError("iterate_average needs a non-empty vector")
    if not np.all(np.isfinite(x)):
        raise ValidationError("iterate_average needs finite entries")
    mean = float(np.mean(x))
    dev = float(np.max(np.abs(x - mean)))
    deviations = [dev]
    if x.size == 1:
        return ConvergenceTrace(0, tuple(x.tolist()), 0.0, mean, (0.0,))
    w = build_sweep(x.size)[2].entries
    it = 0
    while dev > tol:
        if it >= max_iters:
            trace = ConvergenceTrace(it, tuple(x.tolist()), dev, mean, tuple(deviations))
            raise NoConvergence(f"deviation {dev:.3g} > {tol:.3g} after {it} sweeps", partial=trace)
        x = w @ x
        it += 1
        dev = float(np.max(np.abs(x - mean)))
        deviations.append(dev)
    return ConvergenceTrace(it, tuple(x.tolist()), dev, mean, tuple(deviations))


def averaged_expected_time(p, pair, max_exact_n: int = MAX_EXACT_N) -> tuple[float, float]:
    """Expected discovery time before and after averaging one pair."""
    p = validate(p)
    before = expected_discovery_time(p, max_exact_n).value
    after = expected_discovery_time(pair_average(p, pair), max_exact_n).value
    return before, after
