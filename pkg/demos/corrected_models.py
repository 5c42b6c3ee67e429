"""Second-order models at a red light, with and without correction.

A relaxation model with anticipation (the jwz model) lets vehicles
approach a stopped leader at speed; with coarse steps they overshoot,
collide, and even back up.  Two corrections repair this: clamping the
speed into [0, theta(spacing)], or clamping so the next spacing cannot
drop below jam.  Both keep the run clean and pack the queue at exactly
the jam spacing.
"""
import numpy as np

from lagwave import diagnose, load_spec, simulate, template_text

RUNS = [
    ("jwz-redlight", "anticipation model, no correction"),
    ("jwz-redlight-corrected1", "correction 1: speed clamped to [0, theta]"),
    ("jwz-redlight-corrected2", "correction 2: spacing kept above jam"),
]


def main():
    print("Five vehicles released 700 m apart toward a red light,")
    print("dt = dn = 1, anticipation model with T = 5 s, c0 = 2 m/s.")
    print()
    for name, label in RUNS:
        spec = load_spec(template_text(name))
        traj = simulate(spec.scenario, model=spec.model, scheme=spec.scheme)
        rep = diagnose(traj)
        terminal = traj.spacings()[-1]
        print(f"{label}")
        print(f"  collisions: {rep.collision_count},"
              f" negative speeds: {rep.negative_speed_count}")
        print(f"  min spacing over run: {rep.min_spacing:.4f}")
        print("  terminal spacings: "
              + "  ".join(f"{s:.6f}" for s in terminal))
        print()

    print("The uncorrected run is unusable even though the same model")
    print("with the same steps is fine away from the standing queue.")
    print("Both corrections stop exactly at the jam spacing of 7 m.")


if __name__ == "__main__":
    main()
