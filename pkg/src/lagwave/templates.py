"""Bundled experiment presets.

Each template is a complete configuration in the INI dialect the CLI
reads; ``template_text`` renders one for loading or for use as a
starting point.  Durations are tuned so the wave of interest traverses
the displayed vehicles with margin.
"""
from __future__ import annotations

__all__ = ["TEMPLATES", "template_text"]

_K7 = 1.0 / 7.0


def _f(x: float) -> str:
    return repr(float(x))


def _greenshields_shock(lead_speed: float, duration: float) -> dict[str, dict[str, str]]:
    return {
        "fd": {"type": "greenshields", "v": _f(20.0), "k": _f(_K7)},
        "scenario": {
            "k1": _f(_K7 / 4.0),
            "lead_speed": _f(lead_speed),
            "vehicles": "10",
            "dn": _f(1.0 / 16.0),
            "dt_ratio": _f(0.35),
            "duration": _f(duration),
        },
        "run": {"model": "nonstandard", "scheme": "anisotropic", "display_vehicles": "5"},
    }


def _triangular_shock(lead_speed: float, duration: float) -> dict[str, dict[str, str]]:
    return {
        "fd": {"type": "triangular", "v": _f(20.0), "w": _f(5.0), "k": _f(_K7)},
        "scenario": {
            "k1": _f(_K7 / 10.0),
            "lead_speed": _f(lead_speed),
            "vehicles": "10",
            "dn": _f(1.0 / 16.0),
            "dt_ratio": _f(1.2),
            "duration": _f(duration),
        },
        "run": {"model": "nonstandard", "scheme": "anisotropic", "display_vehicles": "5"},
    }


def _jwz_redlight(corrected: str) -> dict[str, dict[str, str]]:
    return {
        "fd": {"type": "triangular", "v": _f(20.0), "w": _f(5.0), "k": _f(_K7)},
        "scenario": {
            "k1": _f(_K7 / 100.0),
            "lead_speed": _f(0.0),
            "initial_speed": _f(0.0),
            "m": "5",
            "dn": _f(1.0),
            "dt_ratio": _f(1.0),
            "duration": _f(400.0),
        },
        "run": {
            "model": "jwz",
            "t": _f(5.0),
            "c0": _f(2.0),
            "corrected": corrected,
            "scheme": "anisotropic",
            "display_vehicles": "5",
        },
    }


def _stability(model: str) -> dict[str, dict[str, str]]:
    preset = {
        "fd": {"type": "greenshields", "v": _f(20.0), "k": _f(_K7)},
        "scenario": {
            "k1": _f(1.0 / 14.0),
            "lead_speed": _f(10.0),
            "m": "10",
            "dn": _f(1.0),
            "dt_ratio": _f(0.35),
            "duration": _f(1200.0),
        },
        "run": {"model": model, "scheme": "anisotropic", "display_vehicles": "5"},
        "stability": {"amplitude": _f(0.02), "omega": _f(0.1)},
    }
    if model == "phillips":
        preset["run"]["t"] = _f(5.0)
    return preset


TEMPLATES: dict[str, dict[str, dict[str, str]]] = {
    # Single shocks against a slower / denser downstream state.
    "greenshields-shock-a": _greenshields_shock(7.5, 26.0),
    "greenshields-shock-b": _greenshields_shock(2.5, 19.0),
    "triangular-shock-a": _triangular_shock(7.5, 48.0),
    "triangular-shock-b": _triangular_shock(1.25, 38.0),
    # Queues released from rest behind a leader at free speed.
    "greenshields-discharge": {
        "fd": {"type": "greenshields", "v": _f(20.0), "k": _f(_K7)},
        "scenario": {
            "k1": _f(_K7),
            "lead_speed": _f(20.0),
            "vehicles": "10",
            "dn": _f(1.0 / 16.0),
            "dt_ratio": _f(0.35),
            "duration": _f(5.0),
        },
        "run": {"model": "nonstandard", "scheme": "anisotropic", "display_vehicles": "5"},
    },
    "triangular-discharge": {
        "fd": {"type": "triangular", "v": _f(20.0), "w": _f(5.0), "k": _f(_K7)},
        "scenario": {
            "k1": _f(_K7),
            "lead_speed": _f(20.0),
            "vehicles": "60",
            "dn": _f(1.0 / 16.0),
            "dt_ratio": _f(1.2),
            "duration": _f(100.0),
        },
        "run": {"model": "nonstandard", "scheme": "anisotropic", "display_vehicles": "5"},
    },
    # Fast sparse traffic hitting a red light on a sigmoid diagram.
    # The raw (unclamped) curve is used, as the negative-speed failure
    # at the coarse step is part of what the run demonstrates.
    "kerner-redlight": {
        "fd": {"type": "kerner", "clamp_nonnegative": "false"},
        "scenario": {
            "k1": _f(0.002),
            "lead_speed": _f(0.0),
            "m": "5",
            "dn": _f(0.1),
            "dt_ratio": _f(1.0),
            "duration": _f(2400.0),
        },
        "run": {"model": "nonstandard", "scheme": "anisotropic", "display_vehicles": "5"},
    },
    "kerner-redlight-coarse": {
        "fd": {"type": "kerner", "clamp_nonnegative": "false"},
        "scenario": {
            "k1": _f(0.002),
            "lead_speed": _f(0.0),
            "m": "5",
            "dn": _f(0.1),
            "dt_ratio": _f(2.0),
            "duration": _f(60.0),
        },
        "run": {"model": "nonstandard", "scheme": "anisotropic", "display_vehicles": "5"},
    },
    # Widely spaced stopped vehicles approaching a parked leader.
    "jwz-redlight": _jwz_redlight("none"),
    "jwz-redlight-corrected1": _jwz_redlight("1"),
    "jwz-redlight-corrected2": _jwz_redlight("2"),
    # Sinusoidal lead perturbation of an equilibrium platoon.
    "phillips-stability": _stability("phillips"),
    "nonstandard-stability": _stability("nonstandard"),
}


def template_text(name: str) -> str:
    """Render a bundled template as configuration text."""
    if name not in TEMPLATES:
        raise KeyError(f"no template named {name!r}")
    lines = []
    for section, keys in TEMPLATES[name].items():
        lines.append(f"[{section}]")
        for key, value in keys.items():
            lines.append(f"{key} = {value}")
        lines.append("")
    return "\n".join(lines)
