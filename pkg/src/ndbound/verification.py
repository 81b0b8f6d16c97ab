"""Randomised sweeps that check each inequality the bound relies on.

Every sweep returns a :class:`CheckResult`; ``worst`` is the most negative
slack seen (a check passes when no slack drops below zero).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .averaging import build_sweep, is_doubly_stochastic, iterate_average
from .bounds import lower_bound
from .convexity import f_second_derivative, f_term, verify_decomposition, z_value


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    violations: int = 0
    worst: float = float("inf")

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def record(self, slack: float) -> None:
        self.checked += 1
        self.worst = min(self.worst, float(slack))
        if not slack >= 0:
            self.violations += 1

    def to_json(self) -> dict:
        return {
            "check": self.name,
            "checked": self.checked,
            "violations": self.violations,
            "worst_slack": self.worst,
            "passed": self.passed,
        }


def random_instance(rng: np.random.Generator, n_min: int, n_max: int, low: float = 0.01):
    n = int(rng.integers(n_min, n_max + 1))
    p = rng.uniform(low, 1.0, size=n)
    j, k = rng.choice(n, size=2, replace=False) if n >= 2 else (0, 0)
    return p.tolist(), (int(j), int(k))


def check_convexity(rng, instances: int, max_n: int = 8, x_step: float = 0.01, tol: float = 1e-12) -> CheckResult:
    res = CheckResult("convexity")
    xs = np.arange(1, int(round(1 / x_step)) + 1) * x_step
    for _ in range(instances):
        p, pair = random_instance(rng, 2, max_n)
        for x in xs:
            res.record(f_second_derivative(p, pair, min(x, 1.0)) + tol)
    return res


def check_finite_difference(rng, instances: int, max_n: int = 8, h: float = 1e-4, rel: float = 1e-4) -> CheckResult:
    res = CheckResult("finite-difference")
    for _ in range(instances):
        p, pair = random_instance(rng, 2, max_n)
        x = float(rng.uniform(0.05, 1.0 - h))
        fd = (f_term(p, pair, x + h) - 2 * f_term(p, pair, x) + f_term(p, pair, x - h)) / h**2
        d2 = f_second_derivative(p, pair, x)
        res.record(rel * abs(d2) - abs(fd - d2))
    return res


def check_jensen(rng, instances: int, max_n: int = 8, tol: float = 1e-12) -> CheckResult:
    res = CheckResult("jensen")
    for _ in range(instances):
        p, pair = random_instance(rng, 2, max_n)
        pj, pk = p[pair[0]], p[pair[1]]
        mid = 2 * f_term(p, pair, 0.5 * (pj + pk))
        res.record(f_term(p, pair, pj) + f_term(p, pair, pk) + tol - mid)
    return res


def check_z(rng, instances: int, max_n: int = 8, t_max: float = 50.0, t_step: float = 0.1, tol: float = 1e-15) -> CheckResult:
    res = CheckResult("z-nonnegative")
    ts = np.arange(int(round(t_max / t_step)) + 1) * t_step
    for _ in range(instances):
        p, pair = random_instance(rng, 2, max_n)
        for z in z_value(p, pair, ts):
            res.record(z + tol)
    return res


def check_decomposition(rng, instances: int, max_n: int = 10, rel: float = 1e-12) -> CheckResult:
    res = CheckResult("decomposition")
    for _ in range(instances):
        p, pair = random_instance(rng, 2, max_n)
        rep = verify_decomposition(p, pair)
        res.record(rel * abs(rep.total) - rep.residual)
    return res


def check_bound(rng, instances: int, max_n: int = 12, tol: float = 1e-12) -> CheckResult:
    res = CheckResult("lower-bound")
    for _ in range(instances):
        p, _ = random_instance(rng, 1, max_n)
        rep = lower_bound(p)
        res.record(rep.gap + tol)
    return res


def check_sweeps(n_max: int = 25, powers=(1, 2, 5, 10, 50), tol: float = 1e-12,
                 limit_power: int = 2000, limit_tol: float = 1e-8) -> CheckResult:
    """Closure of the sweep powers plus distance of ``W**limit_power`` from ``ones / n``.

    The second eigenvalue of ``W`` is about ``cos(pi / n) ** 2``, so the power
    needed for ``limit_tol`` grows like ``n**2`` (roughly 1000 at ``n = 25``).
    """
    res = CheckResult("doubly-stochastic")
    for n in range(2, n_max + 1):
        w = build_sweep(n)[2].entries
        for u in powers:
            res.record(0.0 if is_doubly_stochastic(np.linalg.matrix_power(w, u), tol) else -1.0)
        dist = np.max(np.abs(np.linalg.matrix_power(w, limit_power) - 1.0 / n))
        res.record(limit_tol - dist)
    return res


def check_convergence(rng, n_max: int = 25, tol: float = 1e-10) -> CheckResult:
    res = CheckResult("convergence")
    for n in range(2, n_max + 1):
        trace = iterate_average(rng.uniform(0.01, 1.0, size=n), tol)
        res.record(tol - trace.max_deviation)
    return res


def run_all(seed: int = 42, instances: int = 200, max_n: int = 8, x_step: float = 0.01,
            t_max: float = 50.0, t_step: float = 0.1, limit_power: int = 2000) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    return [
        check_bound(rng, instances),
        check_convexity(rng, instances, max_n, x_step),
        check_finite_difference(rng, instances, max_n),
        check_jensen(rng, instances, max_n),
        check_z(rng, instances, max_n, t_max, t_step),
        check_decomposition(rng, instances),
        check_sweeps(limit_power=limit_power),
        check_convergence(rng),
    ]
