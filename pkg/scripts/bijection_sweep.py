"""Sweep the X(c,n) <-> Y(c,n) bijection over moduli of norm up to a bound.

    python scripts/bijection_sweep.py --D 5 13 --max-norm 200 --out bijection.json
"""
import argparse
import time

from asai_verifier.harness import SuiteSpec, all_passed, emit_report, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--D", type=int, nargs="+", default=[5, 13])
    ap.add_argument("--max-norm", type=int, default=200)
    ap.add_argument("--n-max", type=int, default=50)
    ap.add_argument("--out")
    args = ap.parse_args()

    reports = []
    for D in args.D:
        t0 = time.perf_counter()
        spec = SuiteSpec("bijection", D, ranges={"bijection": {"max_norm": args.max_norm, "n_max": args.n_max}})
        reps = run_suite(spec)
        size = sum(int(r.lhs) for r in reps if r.lhs is not None)
        print(f"D={D:>3}  moduli={len(reps):>5}  sum |X(c,n)|={size:>8}  "
              f"failing={sum(not r.passed for r in reps)}  {time.perf_counter() - t0:.1f}s")
        reports += reps
    if args.out:
        emit_report(reports, "json", args.out)
    raise SystemExit(0 if all_passed(reports) else 1)


if __name__ == "__main__":
    main()
