"""
Closed-form fidelity bounds for t-error-correcting stabilizer codes.

All functions report the infidelity ``epsilon`` first; ``1 - epsilon`` is
derived last so that tiny values such as 1.27e-8 survive intact.  The bound
is vacuous once epsilon exceeds 1, which the clamped field records.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, floor
from typing import Sequence

import mpmath

__all__ = [
    "BoundReport",
    "SweepPoint",
    "binomial_tail",
    "binomial_bound",
    "product_bound",
    "iid_product_bound",
    "asymptotic_bound",
    "sweep_asymptotic",
    "bounded_distance_bound",
]

_DPS = 40
MASS_TOL = 1e-10


@dataclass(frozen=True)
class BoundReport:
    n: int
    t_used: int
    p: float
    epsilon: float
    label: str = "binomial"

    @property
    def fidelity_lb(self) -> float:
        return 1.0 - self.epsilon

    @property
    def fidelity_lb_clamped(self) -> float:
        return max(0.0, 1.0 - self.epsilon)

    @property
    def vacuous(self) -> bool:
        return self.epsilon >= 1.0

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "n": self.n,
            "t": self.t_used,
            "p": self.p,
            "epsilon": self.epsilon,
            "fidelity_lb": self.fidelity_lb,
            "fidelity_lb_clamped": self.fidelity_lb_clamped,
            "vacuous": self.vacuous,
        }


@dataclass(frozen=True)
class SweepPoint:
    n: int
    t: int
    epsilon: float
    asymptotic: float
    chain: float  # p * (2 p^alpha)^n
    feasible: bool

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "t": self.t,
            "epsilon": self.epsilon,
            "asymptotic": self.asymptotic,
            "chain": self.chain,
            "feasible": self.feasible,
        }


def _check(n: int, t: int, p: float) -> None:
    if n < 1:
        raise ValueError(f"code length must be >= 1, got {n}")
    if not 0 <= t <= n:
        raise ValueError(f"radius t={t} outside [0, {n}]")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")


def binomial_tail(n: int, t: int, p: float) -> mpmath.mpf:
    """sum_{i=t+1}^{n} C(n, i) p^i with exact binomials, in extended precision."""
    with mpmath.workdps(_DPS):
        pm = mpmath.mpf(p)
        term = pm ** (t + 1)
        total = mpmath.mpf(0)
        for i in range(t + 1, n + 1):
            total += comb(n, i) * term
            term *= pm
        return +total


def binomial_bound(n: int, t: int, p: float) -> BoundReport:
    """``1 - sum_{i>t} C(n,i) p^i`` lower-bounds the syndrome-averaged fidelity."""
    _check(n, t, p)
    return BoundReport(n=n, t_used=t, p=float(p), epsilon=float(binomial_tail(n, t, p)))


def bounded_distance_bound(n: int, t_prime: int, p: float) -> BoundReport:
    """Same tail starting at ``t' + 1`` for decoders that only trust leaders of weight <= t'."""
    _check(n, t_prime, p)
    return BoundReport(n=n, t_used=t_prime, p=float(p), epsilon=float(binomial_tail(n, t_prime, p)), label="bounded-distance")


def product_bound(ell_lists: Sequence[tuple[float, float]], t: int) -> float:
    """Exact product form: sum over supports of size > t of prod_i ell_i(a_i).

    ``ell_lists[i] = (identity mass, error mass)`` for position i.  Computed by
    a DP over positions that tracks the number of error positions, with every
    count above t pooled into one overflow bucket.
    """
    pairs = [(float(a), float(b)) for a, b in ell_lists]
    n = len(pairs)
    if n < 1:
        raise ValueError("need at least one position")
    if not 0 <= t <= n:
        raise ValueError(f"radius t={t} outside [0, {n}]")
    for i, (a, b) in enumerate(pairs):
        if a < -MASS_TOL or b < -MASS_TOL:
            raise ValueError(f"position {i}: negative mass ({a}, {b})")
        if abs(a + b - 1.0) > MASS_TOL:
            raise ValueError(f"position {i}: masses sum to {a + b}, not 1")
    dist = [1.0] + [0.0] * t
    over = 0.0
    for a, b in pairs:
        over = over * (a + b) + dist[t] * b
        for j in range(t, 0, -1):
            dist[j] = dist[j] * a + dist[j - 1] * b
        dist[0] *= a
    return over


def iid_product_bound(n: int, t: int, p: float) -> float:
    return product_bound([(1.0 - p, p)] * n, t)


def asymptotic_bound(n: int, t: int, p: float) -> float:
    """p^(t+1) 2^n, evaluated in the log domain."""
    _check(n, t, p)
    if p == 0:
        return 0.0
    with mpmath.workdps(_DPS):
        return float(mpmath.exp((t + 1) * mpmath.log(mpmath.mpf(p)) + n * mpmath.log(2)))


def sweep_asymptotic(alpha: float, p: float, n_list: Sequence[int]) -> list[SweepPoint]:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha={alpha} outside (0, 1)")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    with mpmath.workdps(_DPS):
        ratio = 2 * mpmath.mpf(p) ** mpmath.mpf(alpha)
        feasible = bool(ratio < 1)
        points = []
        for n in n_list:
            t = floor(alpha * n)
            chain = float(mpmath.mpf(p) * ratio**n)
            points.append(
                SweepPoint(
                    n=n,
                    t=t,
                    epsilon=binomial_bound(n, t, p).epsilon,
                    asymptotic=asymptotic_bound(n, t, p),
                    chain=chain,
                    feasible=feasible,
                )
            )
    return points
