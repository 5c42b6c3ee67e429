"""Car-following time stepping in Lagrangian coordinates.

State is a platoon of M+1 vehicles indexed m = 0..M, where m = 0 is the
lead vehicle.  Vehicle m occupies position Y_m and the (normalized)
spacing to its leader is (Y_{m-1} - Y_m) / dn, with dn the vehicle-index
increment, so a platoon at density k has normalized spacing 1/k
regardless of dn.

The reference update is symplectic: speeds are advanced first from the
current spacings, positions then move with the *new* speeds.  Rival
spacing stencils and a fully explicit stepper are provided for the
failure-mode experiments; second-order behaviour (speed relaxation,
anticipation) enters through a model object.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .fundamental import FundamentalDiagram

__all__ = [
    "Scheme",
    "NonstandardLWR",
    "PhillipsRelax",
    "JWZ",
    "Corrected1",
    "Corrected2",
    "Model",
    "Platoon",
    "Scenario",
    "Trajectory",
    "init_lead_vehicle_problem",
    "spacing_estimate",
    "step_nonstandard",
    "step_explicit_explicit",
    "step_second_order",
    "step_corrected_1",
    "step_corrected_2",
    "acceleration",
    "simulate",
]


class Scheme(Enum):
    """Spacing stencil / time stepping variants."""

    ANISOTROPIC_SYMPLECTIC = "anisotropic"
    FORWARD_SPACING = "forward"
    ARITHMETIC_CENTRAL = "arithmetic"
    HARMONIC_CENTRAL = "harmonic"
    EXPLICIT_EXPLICIT = "explicit-explicit"


@dataclass(frozen=True)
class NonstandardLWR:
    """Equilibrium speed adoption; relaxation happens within one step."""


@dataclass(frozen=True)
class PhillipsRelax:
    """Speed relaxation toward equilibrium over time scale T."""

    T: float = 5.0

    def __post_init__(self):
        if self.T <= 0.0:
            raise ValueError("relaxation time T must be positive")


@dataclass(frozen=True)
class JWZ:
    """Relaxation plus an anticipation term c0 * dv / gap."""

    T: float = 5.0
    c0: float = 2.0

    def __post_init__(self):
        if self.T <= 0.0:
            raise ValueError("relaxation time T must be positive")


@dataclass(frozen=True)
class Corrected1:
    """Clamp the inner model's speed into [0, theta(spacing)]."""

    inner: "Model"

    def __post_init__(self):
        if isinstance(self.inner, (Corrected1, Corrected2)):
            raise ValueError("corrections do not nest")


@dataclass(frozen=True)
class Corrected2:
    """Clamp the inner model's speed into [0, (gap - S*dn)/dt]."""

    inner: "Model"

    def __post_init__(self):
        if isinstance(self.inner, (Corrected1, Corrected2)):
            raise ValueError("corrections do not nest")


Model = NonstandardLWR | PhillipsRelax | JWZ | Corrected1 | Corrected2


@dataclass(eq=False)
class Platoon:
    """Positions and speeds of M+1 vehicles at one time level."""

    positions: np.ndarray
    speeds: np.ndarray
    dn: float

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=float)
        self.speeds = np.asarray(self.speeds, dtype=float)
        if self.positions.shape != self.speeds.shape or self.positions.ndim != 1:
            raise ValueError("positions and speeds must be 1-d arrays of equal length")
        if self.dn <= 0.0:
            raise ValueError("dn must be positive")

    @property
    def followers(self) -> int:
        return len(self.positions) - 1

    def spacings(self) -> np.ndarray:
        """Normalized spacings, one per follower."""
        return (self.positions[:-1] - self.positions[1:]) / self.dn


@dataclass(frozen=True)
class Scenario:
    """Lead-vehicle problem: followers start in equilibrium at density k1,
    the leader travels at v2 = lead_speed for all time.

    ``initial_speed`` overrides the followers' starting speed (used for
    platoons released from rest); when None they start at eta(k1).
    """

    fd: FundamentalDiagram
    k1: float
    lead_speed: float
    m: int
    dn: float
    dt: float
    duration: float
    initial_speed: float | None = None

    def __post_init__(self):
        if not 0.0 < self.k1 <= self.fd.K:
            raise ValueError(f"k1 must lie in (0, K={self.fd.K!r}]")
        if self.lead_speed < 0.0:
            raise ValueError("lead_speed must be nonnegative")
        if self.m < 0:
            raise ValueError("m must be nonnegative")
        if self.dn <= 0.0 or self.dt <= 0.0:
            raise ValueError("dn and dt must be positive")
        if self.duration < 0.0:
            raise ValueError("duration must be nonnegative")

    @property
    def steps(self) -> int:
        """Number of time steps covering the duration."""
        return max(int(math.ceil(self.duration / self.dt - 1e-9)), 0)


@dataclass(eq=False)
class Trajectory:
    """Simulation record on the full (time, vehicle) grid.

    ``positions`` and ``speeds`` have shape (J+1, M+1) with J the step
    count; ``accelerations`` holds the per-step speed differences and so
    has shape (J, M+1).
    """

    times: np.ndarray
    positions: np.ndarray
    speeds: np.ndarray
    accelerations: np.ndarray
    scenario: Scenario | None = None
    model: Model | None = None
    scheme: Scheme | None = None
    dn: float = 1.0

    def spacings(self) -> np.ndarray:
        """Normalized spacings, shape (J+1, M)."""
        return (self.positions[:, :-1] - self.positions[:, 1:]) / self.dn

    def vehicle_numbers(self) -> np.ndarray:
        """Cumulative vehicle number N = m * dn for each slot."""
        return np.arange(self.positions.shape[1]) * self.dn


def init_lead_vehicle_problem(scenario: Scenario) -> Platoon:
    """Initial platoon: uniform spacing dn/k1, leader at the origin."""
    s1 = scenario.dn / scenario.k1
    positions = -np.arange(scenario.m + 1) * s1
    v0 = scenario.initial_speed
    if v0 is None:
        v0 = scenario.fd.eta(scenario.k1)
    speeds = np.full(scenario.m + 1, float(v0))
    speeds[0] = scenario.lead_speed
    return Platoon(positions, speeds, scenario.dn)


def _clamped_theta(platoon: Platoon, fd: FundamentalDiagram) -> tuple[np.ndarray, np.ndarray]:
    """Physical gaps and equilibrium speeds at jam-clamped spacings."""
    gaps = platoon.positions[:-1] - platoon.positions[1:]
    s = np.maximum(gaps / platoon.dn, fd.S)
    return gaps, fd.theta(s)


def _follower_speeds(platoon: Platoon, model: Model, fd: FundamentalDiagram, dt: float) -> np.ndarray:
    """New follower speeds U^{j+1}_m for the anisotropic symplectic step."""
    gaps, th = _clamped_theta(platoon, fd)
    u = platoon.speeds[1:]
    if isinstance(model, NonstandardLWR):
        return th
    if isinstance(model, PhillipsRelax):
        # Interpolation form: exactly th when T == dt.
        r = 1.0 - dt / model.T
        return th + r * (u - th)
    if isinstance(model, JWZ):
        r = 1.0 - dt / model.T
        dv = platoon.speeds[:-1] - platoon.speeds[1:]
        safe = np.where(np.abs(gaps) > 1e-12, gaps, 1.0)
        antic = np.where(np.abs(gaps) > 1e-12, dv / safe, 0.0)
        return th + r * (u - th) + dt * model.c0 * antic
    if isinstance(model, Corrected1):
        raw = _follower_speeds(platoon, model.inner, fd, dt)
        return np.maximum(0.0, np.minimum(raw, th))
    if isinstance(model, Corrected2):
        raw = _follower_speeds(platoon, model.inner, fd, dt)
        ceiling = (gaps - fd.S * platoon.dn) / dt
        return np.maximum(0.0, np.minimum(raw, ceiling))
    raise TypeError(f"unknown model {model!r}")


def _advance(platoon: Platoon, follower_speeds: np.ndarray, dt: float, lead_speed: float) -> Platoon:
    new_speeds = np.empty_like(platoon.speeds)
    new_speeds[0] = lead_speed
    new_speeds[1:] = follower_speeds
    new_positions = platoon.positions + dt * new_speeds
    return Platoon(new_positions, new_speeds, platoon.dn)


def step_nonstandard(platoon: Platoon, fd: FundamentalDiagram, dt: float, lead_speed: float) -> Platoon:
    """One anisotropic symplectic step of the equilibrium model."""
    return _advance(platoon, _follower_speeds(platoon, NonstandardLWR(), fd, dt), dt, lead_speed)


def step_second_order(platoon: Platoon, model: Model, fd: FundamentalDiagram, dt: float, lead_speed: float) -> Platoon:
    """One anisotropic symplectic step of a second-order model."""
    return _advance(platoon, _follower_speeds(platoon, model, fd, dt), dt, lead_speed)


def step_corrected_1(platoon: Platoon, model: Model, fd: FundamentalDiagram, dt: float, lead_speed: float) -> Platoon:
    """Step ``model`` with its speed clamped into [0, theta(spacing)]."""
    return step_second_order(platoon, Corrected1(model), fd, dt, lead_speed)


def step_corrected_2(platoon: Platoon, model: Model, fd: FundamentalDiagram, dt: float, lead_speed: float) -> Platoon:
    """Step ``model`` with its speed clamped so spacing stays above jam."""
    return step_second_order(platoon, Corrected2(model), fd, dt, lead_speed)


def spacing_estimate(platoon: Platoon, m: int, scheme: Scheme) -> float:
    """Normalized spacing estimate the given stencil uses for follower m.

    The backward (anisotropic) spacing is the one to the vehicle ahead.
    Forward and central stencils look at the follower behind as well;
    the last vehicle has none, so they fall back to the backward value
    there.
    """
    if not 1 <= m <= platoon.followers:
        raise IndexError(f"follower index {m} out of range")
    s = platoon.spacings()
    own = s[m - 1]
    if scheme in (Scheme.ANISOTROPIC_SYMPLECTIC, Scheme.EXPLICIT_EXPLICIT) or m == platoon.followers:
        return float(own)
    behind = s[m]
    if scheme is Scheme.FORWARD_SPACING:
        return float(behind)
    if scheme is Scheme.ARITHMETIC_CENTRAL:
        return float(0.5 * (own + behind))
    if scheme is Scheme.HARMONIC_CENTRAL:
        return float(2.0 * own * behind / (own + behind))
    raise ValueError(f"unknown scheme {scheme!r}")


def _step_stencil(platoon: Platoon, fd: FundamentalDiagram, dt: float, lead_speed: float, scheme: Scheme) -> Platoon:
    s = platoon.spacings()
    if scheme is Scheme.FORWARD_SPACING:
        est = np.concatenate((s[1:], s[-1:]))
    elif scheme is Scheme.ARITHMETIC_CENTRAL:
        est = np.concatenate((0.5 * (s[:-1] + s[1:]), s[-1:]))
    elif scheme is Scheme.HARMONIC_CENTRAL:
        est = np.concatenate((2.0 * s[:-1] * s[1:] / (s[:-1] + s[1:]), s[-1:]))
    else:
        raise ValueError(f"not a stencil scheme: {scheme!r}")
    th = fd.theta(np.maximum(est, fd.S))
    return _advance(platoon, th, dt, lead_speed)


def step_explicit_explicit(platoon: Platoon, fd: FundamentalDiagram, dt: float, lead_speed: float) -> Platoon:
    """Explicit speed update and explicit position update.

    Speeds come from the current spacings as usual, but positions move
    with the *old* speeds, so a vehicle keeps travelling at the speed
    justified by its previous spacing.
    """
    _, th = _clamped_theta(platoon, fd)
    new_speeds = np.empty_like(platoon.speeds)
    new_speeds[0] = lead_speed
    new_speeds[1:] = th
    new_positions = platoon.positions + dt * platoon.speeds
    return Platoon(new_positions, new_speeds, platoon.dn)


def acceleration(speeds: np.ndarray, dt: float) -> np.ndarray:
    """Per-step accelerations (U^{j+1} - U^j) / dt for a speed record."""
    speeds = np.asarray(speeds, dtype=float)
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    return np.diff(speeds, axis=0) / dt


def simulate(
    scenario: Scenario,
    model: Model | None = None,
    scheme: Scheme = Scheme.ANISOTROPIC_SYMPLECTIC,
    lead_speeds: np.ndarray | None = None,
) -> Trajectory:
    """Run the lead-vehicle problem and record the full trajectory.

    ``lead_speeds`` optionally prescribes the leader speed per step
    (entry j is the leader speed over step j -> j+1); by default the
    leader holds ``scenario.lead_speed``.  Stencil and explicit-explicit
    schemes support only the equilibrium model.
    """
    if model is None:
        model = NonstandardLWR()
    if scheme is not Scheme.ANISOTROPIC_SYMPLECTIC and not isinstance(model, NonstandardLWR):
        raise ValueError(f"scheme {scheme.value!r} supports only the equilibrium model")

    J = scenario.steps
    if lead_speeds is None:
        lead = np.full(J, scenario.lead_speed)
    else:
        lead = np.asarray(lead_speeds, dtype=float)
        if lead.shape != (J,):
            raise ValueError(f"lead_speeds must have shape ({J},)")

    fd = scenario.fd
    dt = scenario.dt
    platoon = init_lead_vehicle_problem(scenario)

    positions = np.empty((J + 1, scenario.m + 1))
    speeds = np.empty((J + 1, scenario.m + 1))
    positions[0] = platoon.positions
    speeds[0] = platoon.speeds

    for j in range(J):
        if scheme is Scheme.ANISOTROPIC_SYMPLECTIC:
            platoon = _advance(platoon, _follower_speeds(platoon, model, fd, dt), dt, lead[j])
        elif scheme is Scheme.EXPLICIT_EXPLICIT:
            platoon = step_explicit_explicit(platoon, fd, dt, lead[j])
        else:
            platoon = _step_stencil(platoon, fd, dt, lead[j], scheme)
        positions[j + 1] = platoon.positions
        speeds[j + 1] = platoon.speeds

    times = np.arange(J + 1) * dt
    return Trajectory(
        times=times,
        positions=positions,
        speeds=speeds,
        accelerations=acceleration(speeds, dt),
        scenario=scenario,
        model=model,
        scheme=scheme,
        dn=scenario.dn,
    )
