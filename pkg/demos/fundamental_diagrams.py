"""Tour of the three bundled flow-density relations.

Prints the speed law at a few densities, the induced spacing-speed law,
and the two step-size thresholds that govern discretization choices.
"""
from lagwave import (
    GreenshieldsFD,
    KernerFD,
    TriangularFD,
    cfl_threshold,
    check_concave,
    collision_free_threshold,
)

DIAGRAMS = [
    ("greenshields", GreenshieldsFD()),
    ("triangular", TriangularFD()),
    ("sigmoid (kerner)", KernerFD()),
]


def main():
    for name, fd in DIAGRAMS:
        print(f"== {name} ==")
        print(f"  free-flow speed     V = {fd.V:.4f} m/s")
        print(f"  jam density         K = {fd.K:.4f} veh/m")
        print(f"  jam spacing         S = {fd.S:.4f} m")
        if fd.kinks():
            print(f"  kink at density     {fd.kinks()[0]:.6f} veh/m")
        print("  k/K    speed eta(k)   flow phi(k)")
        for frac in (0.05, 0.25, 0.5, 0.75, 1.0):
            k = frac * fd.K
            print(f"  {frac:4.2f}   {fd.eta(k):12.4f} {fd.phi(k):12.4f}")
        print("  spacing s   theta(s)")
        for s in (fd.S, 1.5 * fd.S, 3.0 * fd.S, 10.0 * fd.S):
            print(f"  {s:9.3f} {fd.theta(s):10.4f}")
        cf = collision_free_threshold(fd)
        cfl = cfl_threshold(fd)
        print(f"  collision-free threshold  dn/dt >= {cf:.6f}")
        print(f"  linear stability (CFL)    dn/dt >= {cfl:.6f}")
        print(f"  concave flow: {check_concave(fd)}")
        print()

    print("The classical diagrams have concave flow, so both thresholds")
    print("coincide at V*K and W*K respectively.  The sigmoid diagram is")
    print("not concave and its two thresholds split apart; step-size")
    print("rates between them keep platoons collision free even though")
    print("the linear stability bound is not met.")


if __name__ == "__main__":
    main()
