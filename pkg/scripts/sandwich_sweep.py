#!/usr/bin/env python3
"""Two-sided total-measure ratio battery over random bodies.

Writes sandwich.csv and sandwich_summary.json into --out. The upper bound
ratio <= 2^(2q - 1 - 3p/2) pi must hold with zero violations; the lower
floor is only reported.
"""

import argparse

from s1mk import ExperimentConfig, run_sandwich


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=float, default=0.5)
    ap.add_argument("--q", type=float, default=2.0)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--grid", type=int, default=256)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="results/sandwich")
    args = ap.parse_args()

    cfg = ExperimentConfig(kind="sandwich", p=args.p, q=args.q,
                           n_samples=args.samples, seed=args.seed,
                           n_points=args.grid, out_dir=args.out)
    result = run_sandwich(cfg)
    s = result["summary"]
    print(f"rows={s['n_rows']} ratio in [{s['ratio_min']:.6g}, "
          f"{s['ratio_max']:.6g}] c2={s['c2']:.6g} "
          f"upper_violations={s['upper_violations']}")
    print(f"wrote {result['csv']}")


if __name__ == "__main__":
    main()
