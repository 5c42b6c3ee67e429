"""Post-hoc diagnostics and measurements on simulated trajectories.

Everything here works on a finished Trajectory; nothing feeds back into
the stepping.  Spacing-based quantities use normalized spacings
(position gap divided by dn), so jam spacing is the reference value S
for every discretization.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import (
    Corrected1,
    Corrected2,
    JWZ,
    Model,
    PhillipsRelax,
    Scenario,
    Trajectory,
    simulate,
)
from .fundamental import FundamentalDiagram

__all__ = [
    "MeasurementError",
    "ExperimentInvalid",
    "DiagnosticsReport",
    "WaveMeasurement",
    "StringStabilityResult",
    "diagnose",
    "measure_front_speed",
    "measure_startup_wave",
    "string_stability_experiment",
    "eulerian_dispersion_roots",
    "diffusion_coefficient",
]

COLLISION_TOL = 1e-9
NEGATIVE_SPEED_TOL = 1e-12


class MeasurementError(RuntimeError):
    """A wave measurement could not be made (too few crossings)."""


class ExperimentInvalid(RuntimeError):
    """An experiment violated its own preconditions while running."""


@dataclass(eq=False)
class DiagnosticsReport:
    """Collision and speed-sign audit of a trajectory.

    Events are (time index, vehicle index) pairs.  A collision is a
    normalized spacing below S - 1e-9; a negative speed is anything
    below -1e-12.
    """

    collision_events: list[tuple[int, int]]
    negative_speed_events: list[tuple[int, int]]
    min_spacing: float
    max_abs_acceleration: float

    @property
    def collision_count(self) -> int:
        return len(self.collision_events)

    @property
    def negative_speed_count(self) -> int:
        return len(self.negative_speed_events)

    @property
    def clean(self) -> bool:
        return not self.collision_events and not self.negative_speed_events


def diagnose(trajectory: Trajectory, fd: FundamentalDiagram | None = None) -> DiagnosticsReport:
    """Scan a trajectory for spacing violations and negative speeds."""
    if fd is None:
        if trajectory.scenario is None:
            raise ValueError("no diagram given and trajectory has no scenario")
        fd = trajectory.scenario.fd

    s = trajectory.spacings()
    collisions = [
        (int(j), int(m) + 1) for j, m in zip(*np.nonzero(s < fd.S - COLLISION_TOL))
    ]
    negatives = [
        (int(j), int(m)) for j, m in zip(*np.nonzero(trajectory.speeds < -NEGATIVE_SPEED_TOL))
    ]
    min_spacing = float(np.min(s)) if s.size else float("inf")
    max_acc = float(np.max(np.abs(trajectory.accelerations))) if trajectory.accelerations.size else 0.0
    return DiagnosticsReport(
        collision_events=collisions,
        negative_speed_events=negatives,
        min_spacing=min_spacing,
        max_abs_acceleration=max_acc,
    )


@dataclass(eq=False)
class WaveMeasurement:
    """A wave front fitted through per-vehicle crossing points."""

    speed: float
    r_squared: float
    crossing_times: np.ndarray
    crossing_positions: np.ndarray


def _fit_line(t: np.ndarray, x: np.ndarray) -> tuple[float, float]:
    """Least-squares slope and r^2 of x against t, centred for stability."""
    tm = t - t.mean()
    xm = x - x.mean()
    denom = float(np.dot(tm, tm))
    if denom == 0.0:
        raise MeasurementError("crossing times are all identical")
    slope = float(np.dot(tm, xm)) / denom
    ss_tot = float(np.dot(xm, xm))
    resid = xm - slope * tm
    ss_res = float(np.dot(resid, resid))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return slope, min(max(r2, 0.0), 1.0)


def _crossings(trajectory: Trajectory, level: float, rising: bool) -> tuple[np.ndarray, np.ndarray]:
    """Interpolated (t, x) where each follower's speed first crosses ``level``.

    A vehicle only contributes if it starts strictly on the far side,
    so vehicles already past the front at t = 0 are excluded.
    """
    times = trajectory.times
    ts, xs = [], []
    for m in range(1, trajectory.speeds.shape[1]):
        v = trajectory.speeds[:, m]
        past = v >= level if rising else v <= level
        if past[0]:
            continue
        hits = np.nonzero(past)[0]
        if hits.size == 0:
            continue
        j = int(hits[0])
        if v[j] == level:
            ts.append(float(times[j]))
            xs.append(float(trajectory.positions[j, m]))
        else:
            frac = (level - v[j - 1]) / (v[j] - v[j - 1])
            ts.append(float(times[j - 1] + frac * (times[j] - times[j - 1])))
            xs.append(float(
                trajectory.positions[j - 1, m]
                + frac * (trajectory.positions[j, m] - trajectory.positions[j - 1, m])
            ))
    return np.asarray(ts), np.asarray(xs)


def measure_front_speed(trajectory: Trajectory, v1: float, v2: float) -> WaveMeasurement:
    """Fit the speed of the front separating speed states v1 and v2.

    The crossing of the midpoint speed (v1+v2)/2 is located for every
    follower that starts on the v1 side; a line through the crossing
    points gives the front speed.  Needs at least three crossings.
    """
    if v1 == v2:
        raise ValueError("v1 and v2 must differ")
    level = 0.5 * (v1 + v2)
    ts, xs = _crossings(trajectory, level, rising=v2 > v1)
    if ts.size < 3:
        raise MeasurementError(f"only {ts.size} crossings, need at least 3")
    slope, r2 = _fit_line(ts, xs)
    return WaveMeasurement(speed=slope, r_squared=r2, crossing_times=ts, crossing_positions=xs)


def measure_startup_wave(trajectory: Trajectory, speed_threshold: float | None = None) -> WaveMeasurement:
    """Fit the wave at which vehicles released from rest start moving.

    Crossing of a small speed threshold (0.001 of the free-flow speed
    by default) is recorded per vehicle.  Vehicles that were already
    moving at the start are excluded; fewer than three starters is a
    measurement error, so a uniformly moving platoon is rejected.
    """
    if speed_threshold is None:
        if trajectory.scenario is None:
            raise ValueError("no threshold given and trajectory has no scenario")
        speed_threshold = 1e-3 * trajectory.scenario.fd.V
    ts, xs = _crossings(trajectory, speed_threshold, rising=True)
    if ts.size < 3:
        raise MeasurementError(f"only {ts.size} vehicles started from rest")
    slope, r2 = _fit_line(ts, xs)
    return WaveMeasurement(speed=slope, r_squared=r2, crossing_times=ts, crossing_positions=xs)


@dataclass(eq=False)
class StringStabilityResult:
    """Outcome of a sinusoidal lead-perturbation experiment."""

    omega: float
    amplitudes: np.ndarray
    amplification_ratio: float
    predicted_ratio: float


def _relaxation_time(model: Model, dt: float) -> float:
    if isinstance(model, (PhillipsRelax, JWZ)):
        return model.T
    if isinstance(model, (Corrected1, Corrected2)):
        return _relaxation_time(model.inner, dt)
    return dt


def string_stability_experiment(
    fd: FundamentalDiagram,
    model: Model,
    s0: float,
    amplitude: float,
    omega: float,
    m: int = 10,
    dn: float = 1.0,
    dt: float = 0.35,
    duration: float = 1200.0,
) -> StringStabilityResult:
    """Drive a platoon in equilibrium at spacing s0 with a sinusoidal
    lead speed and measure how the oscillation grows along the platoon.

    The first 20% of the record is discarded as transient.  Per-vehicle
    amplitude is half the peak-to-trough speed range over the remaining
    window; the reported ratio is the geometric mean of successive
    follower-to-follower ratios, normalized per unit vehicle number.
    The prediction is exp(T * omega^2 / theta'(s0)) with T the model's
    relaxation time (dt for the equilibrium model).
    """
    if m < 2:
        raise ValueError("need at least two followers to form a ratio")
    if amplitude < 0.0:
        raise ValueError("amplitude must be nonnegative")
    veq = fd.theta(s0)
    scenario = Scenario(
        fd=fd, k1=1.0 / s0, lead_speed=veq, m=m, dn=dn, dt=dt, duration=duration
    )
    J = scenario.steps
    lead = veq + amplitude * np.sin(omega * (np.arange(J) + 1) * dt)
    if np.any(lead < 0.0):
        raise ValueError("perturbation drives the lead speed negative")
    traj = simulate(scenario, model=model, lead_speeds=lead)

    report = diagnose(traj, fd)
    if report.collision_events:
        raise ExperimentInvalid(
            f"platoon collided {report.collision_count} times; amplitude too large"
        )

    predicted = float(np.exp(_relaxation_time(model, dt) * omega**2 / fd.theta_prime(s0)))
    cut = int(0.2 * (J + 1))
    window = traj.speeds[cut:, :]
    amps = 0.5 * (window.max(axis=0) - window.min(axis=0))

    if amplitude == 0.0:
        return StringStabilityResult(
            omega=omega, amplitudes=amps, amplification_ratio=1.0, predicted_ratio=predicted
        )
    if np.any(amps[1:] <= 0.0):
        raise ExperimentInvalid("a follower shows no oscillation; window too short")
    ratios = amps[2:] / amps[1:-1]
    geo = float(np.exp(np.mean(np.log(ratios))))
    return StringStabilityResult(
        omega=omega,
        amplitudes=amps,
        amplification_ratio=geo ** (1.0 / dn),
        predicted_ratio=predicted,
    )


def eulerian_dispersion_roots(
    fd: FundamentalDiagram, k0: float, T: float, wavenumber: float
) -> tuple[complex, complex]:
    """Complex frequencies of a plane-wave perturbation about state k0.

    A mode proportional to exp(i*(wavenumber*x - omega*t)) satisfies a
    quadratic in omega; a root with positive imaginary part grows in
    time.  For the relaxation model posed in Eulerian coordinates such
    a root (or a neutral one) exists at every admissible state, no
    matter the parameters.
    """
    if T <= 0.0:
        raise ValueError("T must be positive")
    v0 = fd.eta(k0)
    ep = fd.eta_prime(k0)
    w = wavenumber
    b = complex(2.0 * w * v0, 1.0 / T)
    c = complex((w * v0) ** 2, (v0 - k0 * ep) * w / T)
    disc = b * b - 4.0 * c
    root = np.sqrt(complex(disc))
    return ((-b + root) / 2.0, (-b - root) / 2.0)


def diffusion_coefficient(fd: FundamentalDiagram, k: float, T: float) -> float:
    """Effective diffusion of the relaxed model, -T * (k * eta'(k))^2.

    Never positive: the Eulerian relaxation approximation behaves like
    a backward heat equation, which is ill posed.
    """
    if T <= 0.0:
        raise ValueError("T must be positive")
    return -T * (k * fd.eta_prime(k)) ** 2
