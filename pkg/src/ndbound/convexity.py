"""Numerical checks of the convexity argument behind pairwise averaging.

For a pair ``(j, k)`` the inclusion-exclusion series splits into

* ``f_term(p, (j, k), p_j)``: terms containing ``p_j`` but not ``p_k``,
* ``f_term(p, (k, j), p_k)``: terms containing ``p_k`` but not ``p_j``,
* ``c_term``: terms containing both,
* ``i_term``: terms containing neither.

``f_term`` depends only on the remaining neighbors, so it is the same
function for ``(j, k)`` and ``(k, j)``; convexity of that one function in
``x`` is what makes averaging ``p_j`` and ``p_k`` lower the total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import MAX_EXACT_N, NeighborPair, as_pair, validate
from .errors import OutOfRange, ValidationError
from .expectation import check_cap, expected_discovery_time
from .subsets import alternating_subset_sum, reciprocal


@dataclass(frozen=True)
class DecompositionReport:
    f_j: float
    f_k: float
    c_term: float
    i_term: float
    total: float
    residual: float


def _remainder(p, pair, max_exact_n: int) -> tuple[np.ndarray, NeighborPair]:
    p = validate(p)
    pair = as_pair(pair).check(p.n)
    check_cap(p.n, max_exact_n)
    arr = p.as_array()
    return arr[pair.others(p.n)], pair


def _check_x(x: float) -> float:
    x = float(x)
    if not 0.0 < x <= 1.0:
        raise OutOfRange(None, x)
    return x


def _cube_term(s: np.ndarray) -> np.ndarray:
    return 2.0 / (s * s * s)


def f_term(p, pair, x: float, max_exact_n: int = MAX_EXACT_N) -> float:
    """All series terms holding ``p_j`` but not ``p_k``, with ``p_j`` set to ``x``."""
    rest, _ = _remainder(p, pair, max_exact_n)
    value, _ = alternating_subset_sum(rest, reciprocal, offset=_check_x(x), include_empty=True)
    return value


def f_second_derivative(p, pair, x: float, max_exact_n: int = MAX_EXACT_N) -> float:
    rest, _ = _remainder(p, pair, max_exact_n)
    value, _ = alternating_subset_sum(rest, _cube_term, offset=_check_x(x), include_empty=True)
    return value


def z_value(p, pair, t, max_exact_n: int = MAX_EXACT_N):
    """``prod over the remaining neighbors r of (1 - exp(-p_r t))``.

    This equals ``1 - V`` where ``V`` is the inclusion-exclusion probability
    of a union of independent events with probabilities ``exp(-p_r t)``, so
    it lies in ``[0, 1]``. ``t`` may be a scalar or an array.
    """
    rest, _ = _remainder(p, pair, max_exact_n)
    t_arr = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(t_arr)) or np.any(t_arr < 0):
        bad = t_arr[~(np.isfinite(t_arr) & (t_arr >= 0))].flat[0]
        raise OutOfRange(None, float(bad), "[0, inf)")
    out = np.prod(-np.expm1(-np.multiply.outer(t_arr, rest)), axis=-1)
    return float(out) if out.ndim == 0 else out


def verify_decomposition(p, pair, max_exact_n: int = MAX_EXACT_N) -> DecompositionReport:
    """Split the series four ways and report how well the parts reassemble."""
    p = validate(p)
    if p.n < 2:
        raise ValidationError("decomposition needs at least two neighbors")
    rest, pair = _remainder(p, pair, max_exact_n)
    pj, pk = p[pair.j], p[pair.k]
    f_j, _ = alternating_subset_sum(rest, reciprocal, offset=pj, include_empty=True)
    f_k, _ = alternating_subset_sum(rest, reciprocal, offset=pk, include_empty=True)
    both, _ = alternating_subset_sum(rest, reciprocal, offset=pj + pk, include_empty=True)
    c_term = -both
    if len(rest):
        neither, _ = alternating_subset_sum(rest, reciprocal)
        i_term = -neither
    else:
        i_term = 0.0
    total = math.fsum((f_j, f_k, c_term, i_term))
    exact = expected_discovery_time(p, max_exact_n).value
    return DecompositionReport(f_j, f_k, c_term, i_term, total, abs(total - exact))
