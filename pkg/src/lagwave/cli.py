"""Command line front end: config parsing, runs, sweeps, reports.

Configs are INI text with [fd], [scenario] and [run] sections (plus an
optional [stability] section).  A config may name a bundled template
via ``template`` in [run]; its own keys then override the template's.
All files written are deterministic: same spec, same bytes.
"""
from __future__ import annotations

import argparse
import configparser
import math
import os
import sys
from dataclasses import dataclass, replace

import numpy as np

from .analysis import (
    MeasurementError,
    diagnose,
    measure_front_speed,
    measure_startup_wave,
    string_stability_experiment,
)
from .conditions import cfl_threshold, collision_free_threshold, validate_step_sizes
from .engine import (
    Corrected1,
    Corrected2,
    JWZ,
    Model,
    NonstandardLWR,
    PhillipsRelax,
    Scenario,
    Scheme,
    Trajectory,
    simulate,
)
from .fundamental import FundamentalDiagram, GreenshieldsFD, KernerFD, TriangularFD
from .templates import TEMPLATES, template_text

__all__ = ["ConfigError", "StabilitySpec", "RunSpec", "load_spec", "serialize", "run", "main"]


class ConfigError(ValueError):
    """A configuration problem, naming the offending key."""


@dataclass(frozen=True)
class StabilitySpec:
    amplitude: float
    omega: float


@dataclass(frozen=True)
class RunSpec:
    """Everything needed to execute one experiment.

    ``vehicles`` and ``dt_ratio`` record how the scenario was specified
    when given in relative form; sweeps need both to rebuild the
    scenario at other dn values.
    """

    scenario: Scenario
    model: Model
    scheme: Scheme
    display_vehicles: int = 5
    stability: StabilitySpec | None = None
    sweep: tuple[float, ...] | None = None
    output_dir: str = "."
    vehicles: int | None = None
    dt_ratio: float | None = None


_FD_KEYS = {
    "greenshields": {"type", "v", "k"},
    "triangular": {"type", "v", "w", "k"},
    "kerner": {
        "type", "unit_length", "relax_time", "k",
        "c1", "c2", "c3", "c4", "clamp_nonnegative",
    },
}
_SCENARIO_KEYS = {
    "k1", "lead_speed", "m", "vehicles", "dn", "dt", "dt_ratio",
    "duration", "initial_speed",
}
_RUN_KEYS = {
    "template", "model", "t", "c0", "corrected", "scheme",
    "display_vehicles", "out", "sweep",
}
_STABILITY_KEYS = {"amplitude", "omega"}

_REQUIRED = (
    "fd.type", "scenario.k1", "scenario.lead_speed", "scenario.dn",
    "scenario.duration", "scenario.dt or scenario.dt_ratio",
)


def _to_float(section: str, key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"key {section}.{key} is not a number: {raw!r}") from None


def _to_int(section: str, key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"key {section}.{key} is not an integer: {raw!r}") from None


def _to_bool(section: str, key: str, raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"key {section}.{key} is not a boolean: {raw!r}")


def _parse_sections(text: str) -> dict[str, dict[str, str]]:
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    return {name: dict(cp[name]) for name in cp.sections()}


def _build_fd(sec: dict[str, str]) -> FundamentalDiagram:
    kind = sec.get("type")
    if kind is None:
        raise ConfigError("missing required key fd.type")
    if kind not in _FD_KEYS:
        raise ConfigError(f"unknown fd.type {kind!r}; expected one of {sorted(_FD_KEYS)}")
    for key in sec:
        if key not in _FD_KEYS[kind]:
            raise ConfigError(f"unknown key fd.{key} for type {kind!r}")
    if kind == "greenshields":
        kwargs = {}
        if "v" in sec:
            kwargs["V"] = _to_float("fd", "v", sec["v"])
        if "k" in sec:
            kwargs["K"] = _to_float("fd", "k", sec["k"])
        return GreenshieldsFD(**kwargs)
    if kind == "triangular":
        kwargs = {}
        if "v" in sec:
            kwargs["V"] = _to_float("fd", "v", sec["v"])
        if "w" in sec:
            kwargs["W"] = _to_float("fd", "w", sec["w"])
        if "k" in sec:
            kwargs["K"] = _to_float("fd", "k", sec["k"])
        return TriangularFD(**kwargs)
    kwargs = {}
    for key, attr in (
        ("unit_length", "unit_length"), ("relax_time", "relax_time"), ("k", "K"),
        ("c1", "c1"), ("c2", "c2"), ("c3", "c3"), ("c4", "c4"),
    ):
        if key in sec:
            kwargs[attr] = _to_float("fd", key, sec[key])
    if "clamp_nonnegative" in sec:
        kwargs["clamp_nonnegative"] = _to_bool("fd", "clamp_nonnegative", sec["clamp_nonnegative"])
    return KernerFD(**kwargs)


def _build_model(sec: dict[str, str]) -> Model:
    name = sec.get("model", "nonstandard")
    if name == "nonstandard":
        base: Model = NonstandardLWR()
        if "t" in sec or "c0" in sec:
            raise ConfigError("keys run.t and run.c0 require model phillips or jwz")
    elif name == "phillips":
        if "c0" in sec:
            raise ConfigError("key run.c0 requires model jwz")
        base = PhillipsRelax(T=_to_float("run", "t", sec.get("t", "5.0")))
    elif name == "jwz":
        base = JWZ(
            T=_to_float("run", "t", sec.get("t", "5.0")),
            c0=_to_float("run", "c0", sec.get("c0", "2.0")),
        )
    else:
        raise ConfigError(f"unknown run.model {name!r}; expected nonstandard, phillips or jwz")
    corrected = sec.get("corrected", "none")
    if corrected == "none":
        return base
    if corrected == "1":
        return Corrected1(base)
    if corrected == "2":
        return Corrected2(base)
    raise ConfigError(f"unknown run.corrected {corrected!r}; expected none, 1 or 2")


def load_spec(text: str) -> RunSpec:
    """Parse configuration text into a validated RunSpec."""
    sections = _parse_sections(text)

    run_sec = sections.get("run", {})
    template = run_sec.get("template")
    if template is not None:
        if template not in TEMPLATES:
            raise ConfigError(
                f"unknown run.template {template!r}; bundled: {', '.join(sorted(TEMPLATES))}"
            )
        merged = {sec: dict(keys) for sec, keys in TEMPLATES[template].items()}
        for sec, keys in sections.items():
            merged.setdefault(sec, {}).update(keys)
        merged["run"].pop("template", None)
        sections = merged
        run_sec = sections.get("run", {})

    known_sections = {"fd", "scenario", "run", "stability"}
    for sec in sections:
        if sec not in known_sections:
            raise ConfigError(f"unknown section [{sec}]")

    fd_sec = sections.get("fd", {})
    sc_sec = sections.get("scenario", {})
    if not fd_sec and not sc_sec:
        raise ConfigError("empty config; required keys: " + ", ".join(_REQUIRED))

    for key in sc_sec:
        if key not in _SCENARIO_KEYS:
            raise ConfigError(f"unknown key scenario.{key}")
    for key in run_sec:
        if key not in _RUN_KEYS:
            raise ConfigError(f"unknown key run.{key}")
    st_sec = sections.get("stability")
    if st_sec is not None:
        for key in st_sec:
            if key not in _STABILITY_KEYS:
                raise ConfigError(f"unknown key stability.{key}")

    fd = _build_fd(fd_sec)

    missing = [k for k in ("k1", "lead_speed", "dn", "duration") if k not in sc_sec]
    if missing:
        raise ConfigError("missing required keys: " + ", ".join(f"scenario.{k}" for k in missing))
    dn = _to_float("scenario", "dn", sc_sec["dn"])
    if dn <= 0.0:
        raise ConfigError("key scenario.dn must be positive")

    if "dt" in sc_sec and "dt_ratio" in sc_sec:
        raise ConfigError("give exactly one of scenario.dt and scenario.dt_ratio")
    if "dt" in sc_sec:
        dt = _to_float("scenario", "dt", sc_sec["dt"])
        dt_ratio = None
    elif "dt_ratio" in sc_sec:
        dt_ratio = _to_float("scenario", "dt_ratio", sc_sec["dt_ratio"])
        dt = dt_ratio * dn
    else:
        raise ConfigError("missing required key: scenario.dt or scenario.dt_ratio")

    if "m" in sc_sec and "vehicles" in sc_sec:
        raise ConfigError("give at most one of scenario.m and scenario.vehicles")
    if "vehicles" in sc_sec:
        vehicles = _to_int("scenario", "vehicles", sc_sec["vehicles"])
        m = round(vehicles / dn)
    elif "m" in sc_sec:
        vehicles = None
        m = _to_int("scenario", "m", sc_sec["m"])
    else:
        vehicles = None
        m = 50

    initial_speed = None
    if "initial_speed" in sc_sec:
        initial_speed = _to_float("scenario", "initial_speed", sc_sec["initial_speed"])

    try:
        scenario = Scenario(
            fd=fd,
            k1=_to_float("scenario", "k1", sc_sec["k1"]),
            lead_speed=_to_float("scenario", "lead_speed", sc_sec["lead_speed"]),
            m=m,
            dn=dn,
            dt=dt,
            duration=_to_float("scenario", "duration", sc_sec["duration"]),
            initial_speed=initial_speed,
        )
    except ValueError as exc:
        raise ConfigError(f"invalid scenario: {exc}") from None

    model = _build_model(run_sec)

    scheme_name = run_sec.get("scheme", "anisotropic")
    try:
        scheme = Scheme(scheme_name)
    except ValueError:
        raise ConfigError(
            f"unknown run.scheme {scheme_name!r}; expected one of "
            + ", ".join(s.value for s in Scheme)
        ) from None
    if scheme is not Scheme.ANISOTROPIC_SYMPLECTIC and not isinstance(model, NonstandardLWR):
        raise ConfigError(f"run.scheme {scheme_name!r} supports only model nonstandard")

    display = _to_int("run", "display_vehicles", run_sec.get("display_vehicles", "5"))
    if display < 1:
        raise ConfigError("key run.display_vehicles must be at least 1")

    sweep = None
    if "sweep" in run_sec:
        parts = [p for p in run_sec["sweep"].split(",") if p.strip()]
        sweep = tuple(_to_float("run", "sweep", p) for p in parts)
        _check_sweep(sweep)

    stability = None
    if st_sec is not None:
        for key in _STABILITY_KEYS:
            if key not in st_sec:
                raise ConfigError(f"missing required key stability.{key}")
        stability = StabilitySpec(
            amplitude=_to_float("stability", "amplitude", st_sec["amplitude"]),
            omega=_to_float("stability", "omega", st_sec["omega"]),
        )

    return RunSpec(
        scenario=scenario,
        model=model,
        scheme=scheme,
        display_vehicles=display,
        stability=stability,
        sweep=sweep,
        output_dir=run_sec.get("out", "."),
        vehicles=vehicles,
        dt_ratio=dt_ratio,
    )


def _check_sweep(values: tuple[float, ...]) -> None:
    if any(v <= 0.0 for v in values):
        raise ConfigError("sweep dn values must be positive")
    if len(set(values)) != len(values):
        raise ConfigError("sweep dn values must be distinct")


def serialize(spec: RunSpec) -> str:
    """Render a RunSpec as configuration text; inverse of load_spec."""
    fd = spec.scenario.fd
    lines = ["[fd]"]
    if isinstance(fd, GreenshieldsFD):
        lines += ["type = greenshields", f"v = {fd.V!r}", f"k = {fd.K!r}"]
    elif isinstance(fd, TriangularFD):
        lines += ["type = triangular", f"v = {fd.V!r}", f"w = {fd.W!r}", f"k = {fd.K!r}"]
    elif isinstance(fd, KernerFD):
        lines += [
            "type = kerner",
            f"unit_length = {fd.unit_length!r}",
            f"relax_time = {fd.relax_time!r}",
            f"k = {fd.K!r}",
            f"c1 = {fd.c1!r}",
            f"c2 = {fd.c2!r}",
            f"c3 = {fd.c3!r}",
            f"c4 = {fd.c4!r}",
            f"clamp_nonnegative = {'true' if fd.clamp_nonnegative else 'false'}",
        ]
    else:
        raise ConfigError(f"cannot serialize diagram {fd!r}")

    sc = spec.scenario
    lines += ["", "[scenario]", f"k1 = {sc.k1!r}", f"lead_speed = {sc.lead_speed!r}"]
    if spec.vehicles is not None:
        lines.append(f"vehicles = {spec.vehicles}")
    else:
        lines.append(f"m = {sc.m}")
    lines.append(f"dn = {sc.dn!r}")
    if spec.dt_ratio is not None:
        lines.append(f"dt_ratio = {spec.dt_ratio!r}")
    else:
        lines.append(f"dt = {sc.dt!r}")
    lines.append(f"duration = {sc.duration!r}")
    if sc.initial_speed is not None:
        lines.append(f"initial_speed = {sc.initial_speed!r}")

    model = spec.model
    corrected = "none"
    if isinstance(model, Corrected1):
        corrected, model = "1", model.inner
    elif isinstance(model, Corrected2):
        corrected, model = "2", model.inner
    lines += ["", "[run]"]
    if isinstance(model, NonstandardLWR):
        lines.append("model = nonstandard")
    elif isinstance(model, PhillipsRelax):
        lines += ["model = phillips", f"t = {model.T!r}"]
    elif isinstance(model, JWZ):
        lines += ["model = jwz", f"t = {model.T!r}", f"c0 = {model.c0!r}"]
    else:
        raise ConfigError(f"cannot serialize model {model!r}")
    if corrected != "none":
        lines.append(f"corrected = {corrected}")
    lines.append(f"scheme = {spec.scheme.value}")
    lines.append(f"display_vehicles = {spec.display_vehicles}")
    if spec.output_dir != ".":
        lines.append(f"out = {spec.output_dir}")
    if spec.sweep is not None:
        lines.append("sweep = " + ",".join(repr(v) for v in spec.sweep))

    if spec.stability is not None:
        lines += [
            "", "[stability]",
            f"amplitude = {spec.stability.amplitude!r}",
            f"omega = {spec.stability.omega!r}",
        ]
    return "\n".join(lines) + "\n"


# -- execution ---------------------------------------------------------


def _g17(x: float) -> str:
    return f"{x:.17g}"


def _write_trajectory_csv(path: str, traj: Trajectory) -> None:
    J = traj.speeds.shape[0] - 1
    width = traj.speeds.shape[1]
    with open(path, "w") as fh:
        fh.write("t,vehicle,N,x,v,a\n")
        for j in range(J + 1):
            t = _g17(float(traj.times[j]))
            for m in range(width):
                a = float(traj.accelerations[j, m]) if j < J else 0.0
                fh.write(
                    f"{t},{m},{_g17(m * traj.dn)},"
                    f"{_g17(float(traj.positions[j, m]))},"
                    f"{_g17(float(traj.speeds[j, m]))},{_g17(a)}\n"
                )


def _measurement(spec: RunSpec, traj: Trajectory) -> tuple[float, float]:
    """Front or startup wave speed, whichever the scenario calls for."""
    sc = spec.scenario
    v1 = sc.initial_speed if sc.initial_speed is not None else sc.fd.eta(sc.k1)
    v2 = sc.lead_speed
    try:
        if v1 < 1e-3 * sc.fd.V:
            meas = measure_startup_wave(traj)
        elif abs(v1 - v2) > 1e-9:
            meas = measure_front_speed(traj, v1, v2)
        else:
            return math.nan, math.nan
        return meas.speed, meas.r_squared
    except MeasurementError:
        return math.nan, math.nan


def _summary_lines(spec: RunSpec, traj: Trajectory) -> list[str]:
    report = diagnose(traj, spec.scenario.fd)
    speed, r2 = _measurement(spec, traj)
    fd = spec.scenario.fd
    return [
        f"measured_shock_speed = {_g17(speed)}",
        f"r_squared = {_g17(r2)}",
        f"min_spacing = {_g17(report.min_spacing)}",
        f"collision_count = {report.collision_count}",
        f"negative_speed_count = {report.negative_speed_count}",
        f"max_abs_accel = {_g17(report.max_abs_acceleration)}",
        f"collision_free_threshold = {_g17(collision_free_threshold(fd))}",
        f"cfl_threshold = {_g17(cfl_threshold(fd))}",
    ]


def run(spec: RunSpec, expect_clean: bool = False) -> int:
    """Execute one run; write trajectory.csv and summary.txt."""
    os.makedirs(spec.output_dir, exist_ok=True)
    traj = simulate(spec.scenario, model=spec.model, scheme=spec.scheme)

    csv_path = os.path.join(spec.output_dir, "trajectory.csv")
    _write_trajectory_csv(csv_path, traj)
    lines = _summary_lines(spec, traj)
    summary_path = os.path.join(spec.output_dir, "summary.txt")
    with open(summary_path, "w") as fh:
        fh.write("\n".join(lines) + "\n")

    for line in lines:
        print(line)
    print(f"[run] wrote {csv_path} and {summary_path}")

    if expect_clean:
        report = diagnose(traj, spec.scenario.fd)
        if not report.clean:
            print(
                f"[run] expected clean run, found {report.collision_count} collisions "
                f"and {report.negative_speed_count} negative speeds",
                file=sys.stderr,
            )
            return 2
    return 0


def _displayed_slots(spec: RunSpec, dn: float, m: int) -> list[int]:
    """Slot indices of the displayed whole-numbered vehicles (leader excluded)."""
    slots = []
    for n in range(1, spec.display_vehicles + 1):
        slot = round(n / dn)
        if 1 <= slot <= m:
            slots.append(slot)
    return slots


def sweep(spec: RunSpec, dn_list: tuple[float, ...]) -> int:
    """Re-run the scenario across dn values; write a convergence table.

    Max |acceleration| and trajectory differences are taken over the
    displayed whole-numbered vehicles, matching what the plots show;
    min spacing is over every simulated slot.
    """
    _check_sweep(tuple(dn_list))
    if spec.dt_ratio is None:
        raise ConfigError("sweep requires scenario.dt_ratio (fixed dt/dn ratio)")
    if spec.vehicles is None:
        raise ConfigError("sweep requires scenario.vehicles (whole-vehicle count)")
    os.makedirs(spec.output_dir, exist_ok=True)

    rows = []
    prev: tuple[np.ndarray, dict[int, np.ndarray]] | None = None
    for dn in dn_list:
        m = round(spec.vehicles / dn)
        scenario = replace(spec.scenario, dn=dn, dt=spec.dt_ratio * dn, m=m)
        traj = simulate(scenario, model=spec.model, scheme=spec.scheme)
        report = diagnose(traj, scenario.fd)
        speed, _ = _measurement(spec, traj)

        slots = _displayed_slots(spec, dn, m)
        max_acc = float(np.max(np.abs(traj.accelerations[:, slots]))) if slots else math.nan

        curves = {
            n: traj.positions[:, round(n / dn)]
            for n in range(1, spec.display_vehicles + 1)
            if round(n / dn) <= m
        }
        diff = math.nan
        if prev is not None:
            t_prev, curves_prev = prev
            t_hi = min(float(t_prev[-1]), float(traj.times[-1]))
            grid = t_prev[t_prev <= t_hi]
            worst = 0.0
            for n, x_prev in curves_prev.items():
                if n not in curves:
                    continue
                a = np.interp(grid, t_prev, x_prev)
                b = np.interp(grid, traj.times, curves[n])
                worst = max(worst, float(np.max(np.abs(a - b))))
            diff = worst
        prev = (traj.times, curves)

        fname = f"trajectory_dn{dn:g}.csv"
        _write_trajectory_csv(os.path.join(spec.output_dir, fname), traj)
        rows.append((dn, speed, max_acc, report.min_spacing, diff))
        print(
            f"[sweep] dn={dn:g} speed={speed:.6g} max_accel={max_acc:.6g} "
            f"min_spacing={report.min_spacing:.6g} diff_prev={diff:.6g}"
        )

    table_path = os.path.join(spec.output_dir, "sweep.csv")
    with open(table_path, "w") as fh:
        fh.write("dn,measured_speed,max_abs_accel,min_spacing,traj_diff_prev\n")
        for row in rows:
            fh.write(",".join(_g17(v) for v in row) + "\n")
    print(f"[sweep] wrote {table_path}")
    return 0


def thresholds(spec: RunSpec) -> int:
    """Report step-size admissibility for the spec's diagram and steps."""
    os.makedirs(spec.output_dir, exist_ok=True)
    sc = spec.scenario
    rep = validate_step_sizes(sc.fd, sc.dn, sc.dt)
    lines = [
        f"dn = {_g17(rep.dn)}",
        f"dt = {_g17(rep.dt)}",
        f"rate = {_g17(rep.dn / rep.dt)}",
        f"collision_free_threshold = {_g17(rep.collision_free_threshold)}",
        f"cfl_threshold = {_g17(rep.cfl_threshold)}",
        f"collision_free_ok = {str(rep.collision_free_ok).lower()}",
        f"cfl_ok = {str(rep.cfl_ok).lower()}",
        f"concave = {str(rep.concave).lower()}",
    ]
    path = os.path.join(spec.output_dir, "thresholds.txt")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    for line in lines:
        print(line)
    return 0


def stability(spec: RunSpec) -> int:
    """Run the string-stability experiment described by the spec."""
    if spec.stability is None:
        raise ConfigError("config has no [stability] section")
    os.makedirs(spec.output_dir, exist_ok=True)
    sc = spec.scenario
    result = string_stability_experiment(
        fd=sc.fd,
        model=spec.model,
        s0=1.0 / sc.k1,
        amplitude=spec.stability.amplitude,
        omega=spec.stability.omega,
        m=sc.m,
        dn=sc.dn,
        dt=sc.dt,
        duration=sc.duration,
    )
    lines = [
        f"omega = {_g17(result.omega)}",
        f"amplification_ratio = {_g17(result.amplification_ratio)}",
        f"predicted_ratio = {_g17(result.predicted_ratio)}",
        "amplitudes = " + ",".join(_g17(a) for a in result.amplitudes),
    ]
    path = os.path.join(spec.output_dir, "stability.txt")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    for line in lines:
        print(line)
    return 0


def _load_config_arg(arg: str) -> str:
    if os.path.exists(arg):
        with open(arg) as fh:
            return fh.read()
    if arg in TEMPLATES:
        return template_text(arg)
    raise ConfigError(f"no such config file or template: {arg!r}")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="lagwave",
        description="Car-following experiments for kinematic wave traffic models.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("config", help="config file path or bundled template name")
    common.add_argument("--out", help="output directory (default from config, else '.')")

    p_run = sub.add_parser("run", parents=[common], help="simulate one scenario")
    p_run.add_argument(
        "--expect-clean",
        action="store_true",
        help="exit nonzero if the run has collisions or negative speeds",
    )
    p_sweep = sub.add_parser("sweep", parents=[common], help="convergence sweep over dn")
    p_sweep.add_argument("--dn", help="comma-separated dn values (default from config)")
    sub.add_parser("thresholds", parents=[common], help="report step-size admissibility")
    sub.add_parser("stability", parents=[common], help="string-stability experiment")

    args = parser.parse_args(argv)
    try:
        spec = load_spec(_load_config_arg(args.config))
        if args.out is not None:
            spec = replace(spec, output_dir=args.out)
        if args.verb == "run":
            return run(spec, expect_clean=args.expect_clean)
        if args.verb == "sweep":
            if args.dn is not None:
                dn_list = tuple(float(p) for p in args.dn.split(",") if p.strip())
            elif spec.sweep is not None:
                dn_list = spec.sweep
            else:
                raise ConfigError("sweep needs --dn or a sweep key in [run]")
            return sweep(spec, dn_list)
        if args.verb == "thresholds":
            return thresholds(spec)
        return stability(spec)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
