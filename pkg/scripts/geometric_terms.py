"""A_0,X and the A_n,X main-term constant as X grows.

A_0,X (l = l') is compared with the limit obtained from the diagonal
c = c' terms and with the closed form (1 + 1/D)/2 int int V1 V2; the A_n
constant (1/X) sum H_n / int int H_n is compared with n R(n,d)/sqrt D and
with the other candidate constants.
"""
import argparse
import math

from asai_verifier.geoside import (A0_claimed_limit, A0_diagonal_limit, A0_value, An_candidates, An_sum,
                                   GeoConfig, H_n_double_integral, _R_for)
from asai_verifier.harness.suites import distinct_l
from asai_verifier.quadfield import QuadInt, sqrt_d


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--D", type=int, default=5)
    ap.add_argument("--X", type=float, nargs="+", default=[1e2, 1e3, 1e4])
    args = ap.parse_args()
    D = args.D
    one = QuadInt(1, 0, D)
    cfg = GeoConfig(D=D, l=one)

    print(f"A_0,X, D={D}: diagonal limit {A0_diagonal_limit(cfg):.9g}, closed form {A0_claimed_limit(cfg):.9g}")
    far = GeoConfig(D=D, l=distinct_l(D))
    for X in args.X:
        v, terms = A0_value(X, cfg)
        w, _ = A0_value(X, far)
        print(f"  X={X:>8.0f}  l=l': {v:.9g} ({terms} terms)   l={far.l}: {w:.3e}")

    n = D
    integral, _ = H_n_double_integral(n, cfg)
    for d in (one, sqrt_d(D)):
        target = n * float(_R_for(n, d)) / math.sqrt(D)
        cands = An_candidates(n, d, D)
        print(f"A_{n},X constant, d={d}: n R(n,d)/sqrt D = {target:.9g}; candidates "
              + ", ".join(f"{k}={v:.6g}" for k, v in cands.items()))
        for X in args.X:
            value, points = An_sum(n, one, d, X, cfg)
            const = value / integral
            print(f"  X={X:>8.0f}  constant {const.real:.9g}  rel. to n R/sqrt D {abs(const / target - 1):.2e}"
                  f"  ({points} points)")


if __name__ == "__main__":
    main()
