#!/usr/bin/env python3
"""First-variation identity checks on documented body pairs.

Compares extrapolated difference quotients of area (resp. dual volume)
along Minkowski (resp. L_p) paths against the closed-form first variation.
"""

import argparse
import sys

from s1mk import run_variational


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=256)
    ap.add_argument("--out", default=None,
                    help="also write variational_summary.json here")
    args = ap.parse_args()

    report = run_variational(n_points=args.grid, out_dir=args.out)
    for check in report["checks"]:
        status = "ok" if check["rel_error"] <= 1e-5 else "FAIL"
        print(f"{status:4s} {check['check']:32s} "
              f"rel_error={check['rel_error']:.3e}")
    print(f"max_rel_error={report['max_rel_error']:.3e}")
    return 0 if report["ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
