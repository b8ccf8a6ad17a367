"""Where does classical correlation beat discord?

The difference statistic D(c, x) compares the measured classical correlation
against the discord bound over the three-coefficient state family. This
script sweeps the admissible coefficient region on a grid and reports the
fraction of states with D >= 0 as the measurement strength grows, under both
entropy-factor conventions the library tracks (see the verify subcommand's
discrepancy ledger for why there are two).
"""

from sqdiscord import distribution_experiment

X_VALUES = [0.25, 0.5, 1.0, 2.0, 5.0, 30.0]


def main():
    print("fraction of admissible states with nonnegative difference, d = 3")
    print()
    for region in ("tetrahedron", "octahedron"):
        print(f"region: {region} (grid step 0.02)")
        print("    x      consistent 2/d^2   printed 2/d")
        for x in X_VALUES:
            r = distribution_experiment(3, x, 0.02, region=region)
            print(f"  {x:5.2f}       {r.fraction_nonneg:8.4f}        "
                  f"{r.fraction_nonneg_printed:8.4f}")
        print()

    print("both columns grow monotonically with x: stronger measurement")
    print("extracts more classical correlation while the discord bound")
    print("only shrinks. A random sampler with a fixed seed gives the same")
    print("qualitative picture without the grid:")
    r = distribution_experiment(3, 0.5, 0.02, sampler="random", seed=1,
                                n_random=200_000)
    print(f"  random x=0.5 tetrahedron: consistent {r.fraction_nonneg:.4f}, "
          f"printed {r.fraction_nonneg_printed:.4f} ({r.samples} kept)")


if __name__ == "__main__":
    main()
