"""Harmonic-number lower bound on the expected discovery time."""

from __future__ import annotations

from dataclasses import dataclass

from .core import MAX_EXACT_N, validate
from .expectation import expected_discovery_time


@dataclass(frozen=True)
class BoundReport:
    harmonic: float
    mean_probability: float
    bound: float
    exact: float | None = None
    gap: float | None = None

    def to_json(self) -> dict:
        return {
            "harmonic": self.harmonic,
            "mean_probability": self.mean_probability,
            "bound": self.bound,
            "exact": self.exact,
            "gap": self.gap,
        }


def harmonic_number(n: int) -> float:
    """Sum of ``1/k`` for ``k = 1..n``, smallest terms first."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"harmonic_number needs a positive integer, got {n!r}")
    total = 0.0
    for k in range(int(n), 0, -1):
        total += 1.0 / k
    return total


def lower_bound(p, with_exact: bool = True, max_exact_n: int = MAX_EXACT_N) -> BoundReport:
    """``H_n / mean(p)``, a floor on the expected time to discover all neighbors.

    The exact value and the gap ``exact - bound`` are filled in when
    ``with_exact`` is set and ``n`` is within the enumeration cap. The gap is
    reported as computed, never clamped.
    """
    p = validate(p)
    h = harmonic_number(p.n)
    mean = p.mean()
    bound = h / mean
    if not with_exact or p.n > max_exact_n:
        return BoundReport(h, mean, bound)
    exact = expected_discovery_time(p, max_exact_n).value
    return BoundReport(h, mean, bound, exact, exact - bound)
