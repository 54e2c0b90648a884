#!/usr/bin/env python3
"""Size envelope of solutions under bounded data 1/lam <= f <= lam.

Solves seeded instances, records max h, diameter, and John eccentricity per
sample, and compares the empirical envelope against the lam = 1 baseline.
"""

import argparse

from s1mk import ExperimentConfig, run_diameter


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=float, default=0.5)
    ap.add_argument("--q", type=float, default=2.0)
    ap.add_argument("--lambda", dest="lam", type=float, default=2.0)
    ap.add_argument("--samples", type=int, default=50)
    ap.add_argument("--grid", type=int, default=256)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--f-kind", default="trig",
                    choices=["trig", "bump", "piecewise"])
    ap.add_argument("--out", default="results/diameter")
    args = ap.parse_args()

    cfg = ExperimentConfig(kind="diameter", p=args.p, q=args.q, lam=args.lam,
                           n_samples=args.samples, seed=args.seed,
                           n_points=args.grid, f_kind=args.f_kind,
                           out_dir=args.out)
    result = run_diameter(cfg)
    s = result["summary"]
    print(f"converged={s['n_converged']}/{s['n_samples']} "
          f"empirical_max_h={s['empirical_max_h']} "
          f"baseline={s['baseline_max_h']}")
    print(f"wrote {result['csv']}")


if __name__ == "__main__":
    main()
