#!/usr/bin/env python3
"""Checks max h <= (min f)^(1/(q-p)) on seeded solves; needs p > q.

A violation dumps the offending data to JSON and aborts with a nonzero
exit, so a clean run is itself the certificate.
"""

import argparse
import sys

from s1mk import ExperimentConfig, InvariantViolationError, run_maxprinciple


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=float, default=3.0)
    ap.add_argument("--q", type=float, default=2.0)
    ap.add_argument("--lambda", dest="lam", type=float, default=2.0)
    ap.add_argument("--samples", type=int, default=20)
    ap.add_argument("--grid", type=int, default=256)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="results/maxprinciple")
    args = ap.parse_args()

    cfg = ExperimentConfig(kind="maxprinciple", p=args.p, q=args.q,
                           lam=args.lam, n_samples=args.samples,
                           seed=args.seed, n_points=args.grid,
                           out_dir=args.out)
    try:
        result = run_maxprinciple(cfg)
    except InvariantViolationError as exc:
        print(f"VIOLATION: {exc}", file=sys.stderr)
        return 1
    s = result["summary"]
    print(f"violations={s['violations']} "
          f"worst_margin={s['worst_margin']:.6g} "
          f"constant_data_equality_gap={s['constant_data_equality_gap']:.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
