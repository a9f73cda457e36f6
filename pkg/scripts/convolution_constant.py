"""Measure C = h(V*W) / (h(V) h(W)) on a grid of spectral parameters.

Only the real part is constant (pi); the imaginary part drifts with the
parameter, in both the continuous and the discrete spectrum.
"""
import argparse
import math

from asai_verifier.spectransform import CANONICAL_V, CANONICAL_W, convolution_constant


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--t", type=float, nargs="+", default=[0.25, 0.5, 1.0, 1.7, 2.5, 3.1, 5.0])
    ap.add_argument("--k", type=int, nargs="+", default=[2, 4, 6, 8, 12])
    args = ap.parse_args()

    print(f"{'spectrum':<10}{'param':>8}{'Re C':>14}{'Im C':>14}{'Re C/pi':>10}")
    for disc, params in ((False, args.t), (True, args.k)):
        for p in params:
            C = convolution_constant(CANONICAL_V, CANONICAL_W, p, disc)
            print(f"{'discrete' if disc else 'continuous':<10}{p:>8}{C.real:>14.9f}{C.imag:>14.9f}"
                  f"{C.real / math.pi:>10.6f}")


if __name__ == "__main__":
    main()
