"""Expected time for a node to discover all of its neighbors.

Three independent routes to the same kind of number:

* :func:`expected_discovery_time` evaluates the inclusion-exclusion series
  ``sum over non-empty S of (-1)**(|S|+1) / sum(p[S])``, exact when neighbor
  ``j`` is found after an exponential waiting time of rate ``p[j]``.
* :func:`expected_time_quadrature` integrates the survival function of the
  maximum of those exponentials.
* :func:`slotted_expected_time` is the analogous series for per-slot
  Bernoulli trials, ``1 / (1 - prod(1 - p[S]))`` in place of ``1 / sum(p[S])``.
  It is a different model and is tagged as such.
"""

from __future__ import annotations

import enum
import heapq
import math
from dataclasses import dataclass

import numpy as np

from .core import MAX_EXACT_N, validate
from .errors import NoConvergence, TooManyNeighbors, ValidationError
from .subsets import alternating_subset_sum, reciprocal


class Method(enum.Enum):
    INCLUSION_EXCLUSION = "inclusion-exclusion"
    QUADRATURE = "quadrature"
    SLOTTED_INCLUSION_EXCLUSION = "slotted-inclusion-exclusion"


@dataclass(frozen=True)
class ExpectationReport:
    value: float
    n: int
    method: Method
    terms_evaluated: int

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "n": self.n,
            "method": self.method.value,
            "terms_evaluated": self.terms_evaluated,
        }


def check_cap(n: int, max_exact_n: int = MAX_EXACT_N) -> None:
    if n > max_exact_n:
        raise TooManyNeighbors(n, max_exact_n)


def expected_discovery_time(p, max_exact_n: int = MAX_EXACT_N) -> ExpectationReport:
    """Exact expected discovery time by inclusion-exclusion over all subsets.

    >>> expected_discovery_time([0.2, 0.5]).value  # 1/0.2 + 1/0.5 - 1/0.7
    5.571428571428571
    """
    p = validate(p)
    check_cap(p.n, max_exact_n)
    total, count = alternating_subset_sum(p.values, reciprocal)
    return ExpectationReport(-total, p.n, Method.INCLUSION_EXCLUSION, count)


def _one_minus_miss(s: np.ndarray) -> np.ndarray:
    # s = sum of log1p(-p); 1 - prod(1 - p) = -expm1(s)
    return -1.0 / np.expm1(s)


def slotted_expected_time(p, max_exact_n: int = MAX_EXACT_N) -> ExpectationReport:
    """Expected slot index of the last discovery under per-slot Bernoulli trials."""
    p = validate(p)
    check_cap(p.n, max_exact_n)
    with np.errstate(divide="ignore"):
        log_miss = np.log1p(-p.as_array())  # -inf where p == 1
    total, count = alternating_subset_sum(log_miss, _one_minus_miss)
    return ExpectationReport(-total, p.n, Method.SLOTTED_INCLUSION_EXCLUSION, count)


def survival(p: np.ndarray, t: np.ndarray) -> np.ndarray:
    """P(max of independent Exp(p_j) > t) = 1 - prod(1 - exp(-p_j t))."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):  # log(0) at t == 0 is -inf, as intended
        log_cdf = np.log(-np.expm1(-np.multiply.outer(t, p)))
    return -np.expm1(log_cdf.sum(axis=-1))


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(15)


def _panel(p: np.ndarray, a: float, b: float) -> float:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return half * float(np.dot(_GL_WEIGHTS, survival(p, mid + half * _GL_NODES)))


def expected_time_quadrature(
    p,
    rel_tol: float = 1e-9,
    max_panels: int = 20000,
) -> ExpectationReport:
    """Expected discovery time as the integral of the survival function.

    The upper limit ``T`` is chosen so the neglected tail, at most
    ``n * exp(-p_min * T) / p_min``, is a small fraction of ``rel_tol`` times
    the floor ``1 / max(p)``. ``[0, T]`` is refined adaptively: the panel with
    the largest disagreement between a 15-point Gauss-Legendre rule and the
    same rule on its two halves is split until the summed disagreement meets
    the budget.
    """
    p = validate(p)
    if not 0.0 < rel_tol <= 1e-3:
        raise ValidationError(f"rel_tol={rel_tol!r} must lie in (0, 1e-3]")
    arr = p.as_array()
    n = p.n
    p_min = float(arr.min())
    floor = 1.0 / float(arr.max())
    tail_budget = 0.1 * rel_tol * floor
    T = max(math.log(n / (p_min * tail_budget)) / p_min, 1.0 / p_min)
    err_budget = 0.25 * rel_tol * floor

    evals = 0

    def refine(a: float, b: float):
        nonlocal evals
        m = 0.5 * (a + b)
        left, right = _panel(arr, a, m), _panel(arr, m, b)
        evals += 30
        return left, right

    # start from panels on a coarse grid so the initial decay is resolved
    edges = np.linspace(0.0, T, 17)
    heap = []
    for a, b in zip(edges[:-1], edges[1:]):
        coarse = _panel(arr, a, b)
        evals += 15
        left, right = refine(a, b)
        fine = left + right
        heapq.heappush(heap, (-abs(fine - coarse), a, b, fine))

    while True:
        total_err = math.fsum(-e for e, *_ in heap)
        if total_err <= err_budget:
            break
        if len(heap) >= max_panels:
            estimate = math.fsum(v for *_, v in heap)
            raise NoConvergence(
                f"quadrature error {total_err:.3g} above budget after {len(heap)} panels",
                partial=estimate,
            )
        _, a, b, fine = heapq.heappop(heap)
        m = 0.5 * (a + b)
        for lo, hi in ((a, m), (m, b)):
            coarse = _panel(arr, lo, hi)
            evals += 15
            l, r = refine(lo, hi)
            heapq.heappush(heap, (-abs(l + r - coarse), lo, hi, l + r))

    value = math.fsum(v for *_, v in heap)
    return ExpectationReport(value, n, Method.QUADRATURE, evals)
