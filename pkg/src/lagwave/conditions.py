"""Admissibility thresholds for the discrete car-following updates.

Two scale-free thresholds govern the choice of step sizes.  Both are
suprema over the density range of the diagram and are compared against
the ratio ``dn/dt``:

* the collision-free threshold, ``sup phi(k) / (1 - k/K)``, which
  guarantees spacings never drop below jam spacing, and
* the CFL threshold, ``sup |eta_prime(k)| * k**2``, the classical
  stability bound for the explicit update.

The suprema are computed on a dense grid and then polished with a
bounded scalar minimiser around the best grid point.  The first one is
singular at ``k = K``; its boundary value is taken as the L'Hopital
limit ``-eta_prime(K) * K**2``, which is exact for diagrams that reach
zero speed at jam density.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from .fundamental import FundamentalDiagram

__all__ = [
    "StepSizeReport",
    "collision_free_threshold",
    "cfl_threshold",
    "check_concave",
    "validate_step_sizes",
]


def _refine_max(f, lo: float, hi: float, n: int) -> float:
    """Grid maximum of ``f`` over [lo, hi], polished near the best point."""
    ks = np.linspace(lo, hi, n)
    vals = f(ks)
    i = int(np.argmax(vals))
    best = float(vals[i])
    a = ks[max(i - 1, 0)]
    b = ks[min(i + 1, n - 1)]
    if b > a:
        res = minimize_scalar(
            lambda k: -float(f(np.asarray(k, dtype=float))),
            bounds=(a, b),
            method="bounded",
            options={"xatol": 1e-13 * (hi - lo)},
        )
        best = max(best, -float(res.fun))
    return best


@lru_cache(maxsize=128)
def collision_free_threshold(fd: FundamentalDiagram, grid: int = 100_000) -> float:
    """Supremum of ``phi(k) / (1 - k/K)`` over densities below jam."""
    K = fd.K

    def f(k):
        return fd.phi(k) / (1.0 - k / K)

    # Stop one grid cell short of K where the expression is 0/0.
    interior = _refine_max(f, 0.0, K * (1.0 - 1.0 / grid), grid)
    boundary = -fd.eta_prime(K) * K * K
    return max(interior, float(boundary))


@lru_cache(maxsize=128)
def cfl_threshold(fd: FundamentalDiagram, grid: int = 100_000) -> float:
    """Supremum of ``|eta_prime(k)| * k**2`` over the full density range."""

    def g(k):
        return np.abs(fd.eta_prime(k)) * k * k

    return _refine_max(g, 0.0, fd.K, grid)


@lru_cache(maxsize=128)
def check_concave(fd: FundamentalDiagram, grid: int = 10_000) -> bool:
    """True when the flow ``phi`` is concave on the open density range.

    Concavity of ``phi`` is equivalent to ``k*eta_second + 2*eta_prime
    <= 0``; the check allows 1e-9 of slack and skips a few grid cells
    around each kink, where the one-sided second derivative is not
    meaningful.
    """
    K = fd.K
    ks = np.linspace(0.0, K, grid + 2)[1:-1]
    mask = np.ones(ks.shape, dtype=bool)
    cell = K / (grid + 1)
    for kink in fd.kinks():
        mask &= np.abs(ks - kink) > 10.0 * cell
    ks = ks[mask]
    expr = ks * fd.eta_second(ks) + 2.0 * fd.eta_prime(ks)
    return bool(np.all(expr <= 1e-9))


@dataclass(frozen=True)
class StepSizeReport:
    """Outcome of validating a (dn, dt) pair against a diagram."""

    dn: float
    dt: float
    collision_free_threshold: float
    cfl_threshold: float
    collision_free_ok: bool
    cfl_ok: bool
    concave: bool


def validate_step_sizes(fd: FundamentalDiagram, dn: float, dt: float) -> StepSizeReport:
    """Compare the rate ``dn/dt`` against both thresholds.

    A condition passes when ``dn/dt`` is at or above its threshold,
    with 1e-12 of relative slack so that exactly-critical pairs are
    accepted.
    """
    if dn <= 0.0 or dt <= 0.0:
        raise ValueError("step sizes must be positive")
    rate = dn / dt
    cf = collision_free_threshold(fd)
    cfl = cfl_threshold(fd)
    slack = 1.0 - 1e-12
    return StepSizeReport(
        dn=dn,
        dt=dt,
        collision_free_threshold=cf,
        cfl_threshold=cfl,
        collision_free_ok=bool(rate >= cf * slack),
        cfl_ok=bool(rate >= cfl * slack),
        concave=check_concave(fd),
    )
