"""The double integral of H_{Da} against D (V1*V2)(4 pi sqrt(ll')/(Da)) and the reduced form."""
import argparse

from asai_verifier.geoside import GeoConfig, H_n_integral
from asai_verifier.harness.suites import distinct_l
from asai_verifier.quadfield import QuadInt


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--D", type=int, default=5)
    ap.add_argument("--a", type=int, nargs="+", default=[1, 2, 3])
    args = ap.parse_args()
    D = args.D
    print(f"{'l':>14}{'a':>4}{'int int H':>28}{'D (V1*V2)':>28}{'rel':>10}{'reduced rel':>13}")
    for l in (QuadInt(1, 0, D), distinct_l(D)):
        cfg = GeoConfig(D=D, l=l)
        for a in args.a:
            res = H_n_integral(D * a, cfg)
            rel = abs(res.integral - res.convolution_side) / abs(res.integral)
            red = abs(res.integral - res.reduced_integral) / abs(res.integral)
            print(f"{str(l):>14}{a:>4}{res.integral:>28.9g}{res.convolution_side:>28.9g}{rel:>10.3f}{red:>13.1e}")


if __name__ == "__main__":
    main()
