"""Signed sums over all subsets of a weight vector.

Subset sums are generated in reflected Gray-code order: the table for the
first ``k+1`` weights is the table for the first ``k`` followed by its mirror
image with weight ``k`` added, so each new subset sum costs one addition on
top of its Gray-code neighbour. Position ``i`` of the table holds a subset
whose size has the parity of ``i``.

The ``2**n`` sums are split into a low table (vectorised) and a high table
(walked one entry at a time), which bounds memory at ``2**LOW_BITS`` floats
per step. The resulting terms are accumulated with :func:`math.fsum`, which
rounds the exact sum of the computed terms once; the alternating series
cancels heavily when probabilities are small.
"""

from __future__ import annotations

import math
from itertools import chain
from typing import Callable

import numpy as np

LOW_BITS = 16


def gray_subset_sums(weights, offset: float = 0.0) -> np.ndarray:
    """All ``2**len(weights)`` values ``offset + sum(S)`` in Gray-code order."""
    sums = np.array([offset], dtype=float)
    for w in weights:
        sums = np.concatenate((sums, sums[::-1] + w))
    return sums


def _parity_signs(size: int) -> np.ndarray:
    signs = np.ones(size)
    signs[1::2] = -1.0
    return signs


def alternating_subset_sum(
    weights,
    term: Callable[[np.ndarray], np.ndarray],
    offset: float = 0.0,
    include_empty: bool = False,
) -> tuple[float, int]:
    """Return ``sum over S of (-1)**|S| * term(offset + sum(weights[S]))``.

    The empty subset contributes only when ``include_empty`` is set. Weights
    are sorted first so that the result does not depend on their order.
    Returns the sum and the number of terms evaluated.
    """
    w = np.sort(np.asarray(weights, dtype=float))
    m = min(len(w), LOW_BITS)
    low = gray_subset_sums(w[:m])
    high = gray_subset_sums(w[m:], offset)
    low_signs = _parity_signs(len(low))

    def chunks():
        for h, base in enumerate(high):
            s = base + low
            signs = low_signs if h % 2 == 0 else -low_signs
            if h == 0 and not include_empty:
                s, signs = s[1:], signs[1:]
            yield (signs * term(s)).tolist()

    total = math.fsum(chain.from_iterable(chunks()))
    count = len(low) * len(high) - (0 if include_empty else 1)
    return total, count


def reciprocal(s: np.ndarray) -> np.ndarray:
    return 1.0 / s
