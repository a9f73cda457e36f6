"""Suite registry, instance generation and the sweep runner.

Every suite turns a ``SuiteSpec`` into a list of instances.  An instance is a
canonical string descriptor plus picklable arguments; evaluating it yields one
or more (lhs, rhs) comparisons.  Evaluation is a top-level function so that
instances can be shipped to worker processes.
"""

from __future__ import annotations

import math
import os
import random
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

import numpy as np
import sympy

from ..errors import ConfigInvalid, UnknownSuite, VerifierError
from ..quadfield import QuadInt, Splitting, divides, make_field, splitting_type, sqrt_d
from .reports import VerificationReport

THREADS_ENV = "ASAI_VERIFIER_THREADS"
FORMATS = ("json", "csv")


# ---------------------------------------------------------------------------
# Comparisons


@dataclass(frozen=True)
class Outcome:
    lhs: Any
    rhs: Any
    passed: bool
    abs_error: float | None
    rel_error: float | None
    provenance: str


def _errors(lhs, rhs) -> tuple[float, float]:
    if isinstance(lhs, Fraction) and isinstance(rhs, Fraction):
        diff = abs(lhs - rhs)
        a = float(diff)
        return a, (float(diff / abs(rhs)) if rhs else a)
    a = abs(complex(lhs) - complex(rhs))
    scale = abs(complex(rhs))
    return a, (a / scale if scale else a)


def compare(lhs, rhs, tol: float | None, mode: str, provenance: str,
            scale: float | None = None) -> Outcome:
    """mode "exact": lhs == rhs; "abs": |lhs - rhs| <= tol; "rel": relative to |rhs|,
    or to ``scale`` when given (for targets that are zero)."""
    if isinstance(lhs, int) and not isinstance(lhs, bool):
        lhs = Fraction(lhs)
    if isinstance(rhs, int) and not isinstance(rhs, bool):
        rhs = Fraction(rhs)
    a, r = _errors(lhs, rhs)
    if scale is not None:
        r = a / scale if scale else a
    if mode == "exact":
        ok = lhs == rhs
    elif mode == "abs":
        ok = a <= tol
    else:
        ok = r <= tol
    return Outcome(lhs, rhs, bool(ok), a, r, provenance)


def _num(x) -> str:
    """Canonical string for an input value."""
    if isinstance(x, QuadInt):
        return x.canonical()
    if isinstance(x, complex):
        return repr(x)
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _desc(**kw) -> dict[str, str]:
    return {k: _num(v) for k, v in kw.items()}


# ---------------------------------------------------------------------------
# Suite configuration


@dataclass(frozen=True)
class SuiteDef:
    name: str
    summary: str
    defaults: dict[str, Any]
    tolerances: dict[str, float]
    primary_bound: str | None
    instances: Callable[["SuiteSpec", dict], list[tuple[dict, tuple]]]
    evaluate: Callable[[int, dict, dict, tuple], list[tuple[dict, Outcome]]]
    needs_D_1_mod_4: bool = False


SUITES: dict[str, SuiteDef] = {}


def _suite(name, summary, defaults, tolerances, primary_bound=None, needs_D_1_mod_4=False):
    def wrap(pair):
        inst, ev = pair
        SUITES[name] = SuiteDef(name, summary, defaults, tolerances, primary_bound, inst, ev,
                                needs_D_1_mod_4)
        return pair
    return wrap


@dataclass
class SuiteSpec:
    """Inputs of one suite run.

    ``ranges`` and ``tolerances`` are keyed by suite name.  A tolerance entry is
    either a single real applied to every comparison of the suite or a mapping
    from comparison kind to real.
    """

    suite_name: str
    field_D: int = 5
    ranges: dict[str, dict[str, Any]] = field(default_factory=dict)
    tolerances: dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    output: str | None = None
    format: str = "json"
    parallel: int = 1

    @property
    def suite(self) -> SuiteDef:
        try:
            return SUITES[self.suite_name]
        except KeyError:
            raise UnknownSuite(f"unknown suite {self.suite_name!r}; known: {', '.join(SUITES)}") from None

    def bounds(self) -> dict[str, Any]:
        b = dict(self.suite.defaults)
        b.update(self.ranges.get(self.suite_name, {}))
        return b

    def tolerance(self) -> dict[str, float]:
        t = dict(self.suite.tolerances)
        given = self.tolerances.get(self.suite_name)
        if isinstance(given, (int, float)) and not isinstance(given, bool):
            # exact suites have no float comparisons, but a bad value is still an error
            if not given > 0:
                raise ConfigInvalid(f"tolerance for {self.suite_name} must be positive, got {given}")
            t = {k: float(given) for k in t}
        elif isinstance(given, dict):
            unknown = set(given) - set(t)
            if unknown:
                raise ConfigInvalid(f"unknown tolerance kinds {sorted(unknown)} for {self.suite_name}")
            t.update({k: float(v) for k, v in given.items()})
        elif given is not None:
            raise ConfigInvalid(f"tolerance for {self.suite_name} must be a number or a mapping")
        return t

    def validate(self) -> None:
        suite = self.suite
        try:
            make_field(int(self.field_D))
        except (VerifierError, ValueError, TypeError) as exc:
            raise ConfigInvalid(f"field_D={self.field_D!r}: {exc}") from exc
        if suite.needs_D_1_mod_4 and self.field_D % 4 != 1:
            raise ConfigInvalid(f"suite {suite.name} needs D = 1 mod 4, got {self.field_D}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ConfigInvalid(f"seed must be an integer, got {self.seed!r}")
        if self.format not in FORMATS:
            raise ConfigInvalid(f"format must be one of {FORMATS}, got {self.format!r}")
        if not isinstance(self.parallel, int) or self.parallel < 1:
            raise ConfigInvalid(f"parallel must be a positive integer, got {self.parallel!r}")
        given = self.ranges.get(self.suite_name, {})
        if not isinstance(given, dict):
            raise ConfigInvalid(f"ranges for {self.suite_name} must be a mapping")
        unknown = set(given) - set(suite.defaults)
        if unknown:
            raise ConfigInvalid(f"unknown bounds {sorted(unknown)} for {self.suite_name}; "
                                f"known: {sorted(suite.defaults)}")
        for k, v in self.bounds().items():
            if isinstance(v, bool) or isinstance(v, str):
                continue
            if isinstance(v, (int, float)):
                if not v > 0:
                    raise ConfigInvalid(f"bound {k}={v} must be positive")
            elif isinstance(v, (list, tuple)):
                if not v:
                    raise ConfigInvalid(f"bound {k} must be non-empty")
            else:
                raise ConfigInvalid(f"bound {k} has unsupported type {type(v).__name__}")
        for k, v in self.tolerance().items():
            if not v > 0:
                raise ConfigInvalid(f"tolerance {k}={v} must be positive")


# ---------------------------------------------------------------------------
# bijection


def _bijection_instances(spec, b):
    from ..solnsets import sweep_moduli

    ctx = make_field(spec.field_D)
    return [(_desc(D=spec.field_D, c=c, n_max=b["n_max"]), (c,))
            for c in sweep_moduli(int(b["max_norm"]), ctx, bool(b["associates"]))]


def _bijection_eval(D, b, tol, args):
    from ..solnsets import check_bijection

    (c,) = args
    size_x = size_y = 0
    ok = True
    mod_n = total = 0
    for n in range(-int(b["n_max"]), int(b["n_max"]) + 1):
        if n == 0:
            continue
        res = check_bijection(c, n)
        size_x += res.size_X
        size_y += res.size_Y
        ok &= res.ok
        if res.size_X:
            total += 1
            mod_n += res.injective_mod_n
    prov = ("|X(c,n)| = |Y(c,n)|, x -> r injective into Y(c,n) with rr' = 1 (mod n), "
            f"summed over 0 < |n| <= n_max; injective modulo n on {mod_n}/{total} nonempty n")
    out = compare(Fraction(size_x), Fraction(size_y), None, "exact", prov)
    if not ok:
        out = Outcome(out.lhs, out.rhs, False, out.abs_error, out.rel_error, out.provenance + "; map check failed")
    return [({}, out)]


_suite("bijection", "X(c,n) <-> Y(c,n) bijection over a (c, n) sweep",
       {"max_norm": 200, "n_max": 50, "associates": True}, {}, "max_norm")(
    (_bijection_instances, _bijection_eval))


# ---------------------------------------------------------------------------
# zagier


def _zagier_instances(spec, b):
    from ..zagierbridge import bridge_elements

    ctx = make_field(spec.field_D)
    ls = bridge_elements(int(b["max_norm"]), ctx)
    return [(_desc(D=spec.field_D, a=a, l=l), (a, l)) for a in range(1, int(b["a_max"]) + 1) for l in ls]


def _zagier_eval(D, b, tol, args):
    from ..zagierbridge import bridge_lhs, bridge_rhs_coprime

    a, l = args
    ctx = make_field(D)
    prov = ("sum_{r mod n/delta, rr' = 1 (n)} e(Tr(rl)/n) = D^{-1/2} sum_{r | l, r | a} r S_D(ll'/r^2, 1, Da/r), "
            "n = Da, (l, D) = 1")
    return [({}, compare(bridge_lhs(a, l, ctx), bridge_rhs_coprime(a, l, ctx), tol["abs"], "abs", prov))]


_suite("zagier", "quadratic exponential sums against chi_D-twisted Kloosterman sums",
       {"a_max": 20, "max_norm": 50}, {"abs": 1e-9}, "max_norm", needs_D_1_mod_4=True)(
    (_zagier_instances, _zagier_eval))


# ---------------------------------------------------------------------------
# rnd: the density constants R(n, d) and Ramanujan sums

_R_ANCHORS = ((2, 1, Fraction(1, 3)), (2, 2, Fraction(1, 6)))


def _rnd_instances(spec, b):
    out = [(_desc(check="sum", n=n), ("sum", n)) for n in range(1, int(b["n_max"]) + 1)]
    out += [(_desc(check="anchor", n=n, d=d), ("anchor", n, d, v)) for n, d, v in _R_ANCHORS]
    out += [(_desc(check="ramanujan", n=n, y_max=b["ram_y_max"]), ("ramanujan", n))
            for n in range(1, int(b["ram_n_max"]) + 1)]
    return out


def _rnd_eval(D, b, tol, args):
    from ..charsums import ramanujan_Z
    from ..multident import R, R_sum_check

    kind = args[0]
    if kind == "sum":
        n = args[1]
        return [({}, compare(R_sum_check(n), Fraction(1, n), None, "exact",
                             "sum_{d | n} R(n, d) = 1/n, exact rationals"))]
    if kind == "anchor":
        _, n, d, v = args
        return [({}, compare(R(n, d), v, None, "exact", "prime-power closed form of R(n, d)"))]
    n = args[1]
    ys = np.arange(-int(b["ram_y_max"]), int(b["ram_y_max"]) + 1, dtype=np.int64)
    x = np.arange(1, n + 1, dtype=np.int64)
    x = x[np.gcd(x, n) == 1]
    brute = np.cos(2 * np.pi * (np.outer(x, ys % n) % n) / n).sum(axis=0)
    by_gcd = {}
    closed = np.array([by_gcd.setdefault(g, ramanujan_Z(n, g)) for g in np.gcd(ys, n).tolist()], dtype=float)
    # exact agreement: the float brute force rounds to the closed-form integer with margin
    agree = int(np.sum((np.abs(brute - closed) < 1e-6) & (np.rint(brute) == closed)))
    prov = ("Ramanujan sum c_n(y): mu(n/g) phi(n)/phi(n/g) against the sum over units mod n, "
            "count of agreeing y with |y| <= y_max")
    return [({}, compare(Fraction(agree), Fraction(ys.size), None, "exact", prov))]


_suite("rnd", "R(n, d) summation, prime-power anchors and Ramanujan sums",
       {"n_max": 10000, "ram_n_max": 500, "ram_y_max": 500}, {}, "n_max")(
    (_rnd_instances, _rnd_eval))


# ---------------------------------------------------------------------------
# euler

EULER_KINDS = ("ramanujanL", "split", "inert", "ramified")


def _primes_of(kind: str, D: int, limit: int = 200) -> list[int]:
    ctx = make_field(D)
    primes = [int(p) for p in sympy.primerange(2, limit)]
    if kind == "ramanujanL":
        return primes[:15]
    target = Splitting(kind)
    return [p for p in primes if splitting_type(p, ctx) is target]


def euler_sample_points(kind: str, D: int, seed: int, count: int,
                        max_valuation: int = 1) -> list[dict[str, Any]]:
    """Seeded parameter draws: Re s in [1.5, 4], Im s in [-10, 10], t in [-3, 3].

    For the Ramanujan factor y carries v_p(y) <= ``max_valuation``; for split p
    omega^2 is a random point on the unit circle.
    """
    rng = random.Random(f"euler:{seed}:{D}:{kind}")
    primes = _primes_of(kind, D)
    out = []
    for _ in range(count):
        s = complex(rng.uniform(1.5, 4.0), rng.uniform(-10.0, 10.0))
        t = rng.uniform(-3.0, 3.0)
        p = rng.choice(primes)
        y, w = 1, None
        if kind == "ramanujanL":
            y0 = rng.randrange(1, 10_000)
            while y0 % p == 0:
                y0 = rng.randrange(1, 10_000)
            y = y0 * p ** rng.randint(0, max_valuation)
        elif kind == "split":
            w = complex(math.cos(a := rng.uniform(0, 2 * math.pi)), math.sin(a))
        out.append({"s": s, "t": t, "p": p, "y": y, "omega_sq": w})
    return out


def _euler_instances(spec, b):
    out = []
    for kind in EULER_KINDS:
        pts = euler_sample_points(kind, spec.field_D, spec.seed, int(b["samples"]), int(b["max_valuation"]))
        for i, pt in enumerate(pts):
            d = _desc(kind=kind, index=i, s=pt["s"], p=pt["p"])
            if kind == "ramanujanL":
                d["y"] = str(pt["y"])
            else:
                d["t"] = _num(pt["t"])
            if pt["omega_sq"] is not None:
                d["omega_sq"] = _num(pt["omega_sq"])
            out.append((d, (kind, pt["s"], pt["t"], pt["p"], pt["y"], pt["omega_sq"])))
    return out


def _euler_eval(D, b, tol, args):
    from ..multident import euler_factor_sides

    kind, s, t, p, y, w = args
    lhs, rhs = euler_factor_sides(kind, s, t, p, make_field(D), y, w)
    prov = {"ramanujanL": "sum_k c_{p^k}(y) p^{-ks} against (1 - p^-s), times (1 + p^{1-s}) when p | y",
            "split": "local divisor-sum series at split p against its closed form",
            "inert": "local divisor-sum series at inert p against its closed form",
            "ramified": "local divisor-sum series at ramified p against its closed form"}[kind]
    return [({}, compare(lhs, rhs, tol["abs"], "abs", prov))]


_suite("euler", "per-prime Euler factor identities at seeded random points",
       {"samples": 100, "max_valuation": 1}, {"abs": 1e-12}, "samples")(
    (_euler_instances, _euler_eval))


# ---------------------------------------------------------------------------
# compa


def _compa_instances(spec, b):
    from ..quadfield import principal_ideals_up_to

    if b["reading"] not in ("literal", "derived"):
        raise ConfigInvalid("compa reading must be 'literal' or 'derived'")
    ctx = make_field(spec.field_D)
    out = []
    for l in principal_ideals_up_to(int(b["max_norm"]), ctx):
        for t in b["t_values"]:
            for k in b["mu_indices"]:
                out.append((_desc(D=spec.field_D, l=l, t=float(t), mu_index=int(k), reading=b["reading"]),
                            (l, float(t), int(k), b["reading"])))
    return out


def _compa_eval(D, b, tol, args):
    from ..multident import compa_sides

    l, t, k, reading = args
    res = compa_sides(l, t, k, make_field(D), reading)
    e = 2 if reading == "literal" else 1
    return [
        ({"identity": "1"}, compare(res.lhs1, res.rhs1, tol["abs"], "abs",
                                    "N(l)^{it} sigma_{-2it,0}(l) = sum_{r | l} tau_it(ll'/r^2)")),
        ({"identity": "2"}, compare(res.lhs2, res.rhs2, tol["abs"], "abs",
                                    f"omega(l)^-{e} sigma_{{0,omega^2}}(l) = sum_{{r | l}} psi_mu(ll'/r^2)")),
    ]


_suite("compa", "divisor-sum identities for sigma, tau_it and psi_mu",
       {"max_norm": 100, "t_values": [0.0, 0.5, 1.3], "mu_indices": [0, 1, 2], "reading": "literal"},
       {"abs": 1e-9}, "max_norm")((_compa_instances, _compa_eval))


# ---------------------------------------------------------------------------
# hecke


def _hecke_instances(spec, b):
    return [(_desc(D=spec.field_D, sequence=i, depth=b["depth"]), (spec.seed, i))
            for i in range(int(b["sequences"]))]


def _hecke_eval(D, b, tol, args):
    from ..charsums import chi_D
    from ..multident import alpha_relation_worst, hecke_relation_worst, random_hecke_sequence, trivial_character

    seed, i = args
    ctx = make_field(D)
    depth, amax = int(b["depth"]), int(b["alpha_max_norm"])
    max_prime = max(depth * depth, amax * amax)
    triv = random_hecke_sequence(random.Random(f"hecke:{seed}:{i}:trivial"), max_prime, trivial_character)
    chi = random_hecke_sequence(random.Random(f"hecke:{seed}:{i}:chi"), max_prime, lambda n: chi_D(n, ctx))
    out = []
    n, m, lhs, rhs = hecke_relation_worst(triv, depth)
    out.append(({"relation": "trivial-character"},
                compare(lhs, rhs, tol["abs"], "abs",
                        f"a_n a_m = sum_{{r | (n,m)}} a_{{nm/r^2}}, worst pair n={n}, m={m}")))
    n, m, lhs, rhs = hecke_relation_worst(chi, depth)
    out.append(({"relation": "chi-weighted"},
                compare(lhs, rhs, tol["abs"], "abs",
                        f"a_n a_m = sum_{{r | (n,m)}} chi_D(r) a_{{nm/r^2}}, worst pair n={n}, m={m}")))
    x, y, lhs, rhs = alpha_relation_worst(chi, ctx, amax)
    out.append(({"relation": "alpha"},
                compare(lhs, rhs, tol["abs"], "abs",
                        "alpha_x alpha_y = sum_{q | (x,y)} alpha_{xy/q^2} over ideals prime to D, "
                        f"worst pair x={x.canonical()}, y={y.canonical()}")))
    return out


_suite("hecke", "Hecke relations for seeded Satake sequences",
       {"sequences": 20, "depth": 50, "alpha_max_norm": 60}, {"abs": 1e-10}, "depth")(
    (_hecke_instances, _hecke_eval))


# ---------------------------------------------------------------------------
# bessel

BESSEL_ORDERS = (0, 1, 2.5, 7, -3, 0.5j, 2j, complex(0.5, 3), 10j, 30j, 60j, 90j)
BESSEL_ARGS = (0.1, 1.0, 5.0, 11.5, 20.0, 45.0)
KERNEL_T = (0.0, 0.5, 3.0, 15.0)


def _bessel_instances(spec, b):
    out = [(_desc(kind="J", nu=complex(nu), x=x), ("J", complex(nu), x)) for nu in BESSEL_ORDERS for x in BESSEL_ARGS]
    out += [(_desc(kind="B", t=t, x=x), ("B", t, x)) for t in KERNEL_T for x in BESSEL_ARGS]
    return out


def _bessel_eval(D, b, tol, args):
    import mpmath

    from ..spectransform import bessel_J, kernel_B

    kind, p, x = args
    with mpmath.workdps(40):
        if kind == "J":
            nu = p if p.imag else p.real
            ref = complex(mpmath.besselj(nu, x))
            val = complex(bessel_J(p if p.imag else p.real, x))
            prov = "J_nu(x) against mpmath at 40 digits"
        else:
            t = p
            if t == 0:
                ref = complex(-mpmath.bessely(0, x))
            else:
                nu = mpmath.mpc(0, 2 * t)
                ref = complex((mpmath.besselj(-nu, x) - mpmath.besselj(nu, x)) / (2 * mpmath.sin(mpmath.pi * 1j * t)))
            val = complex(kernel_B(t, x))
            prov = "B_{2it}(x) = (J_{-2it} - J_{2it})/(2 sin(pi i t)) against mpmath, t = 0 as the limit"
    return [({}, compare(val, ref, tol["rel"], "rel", prov))]


_suite("bessel", "Bessel J of complex order and the kernel B_{2it} against mpmath",
       {}, {"rel": 1e-10})((_bessel_instances, _bessel_eval))


# ---------------------------------------------------------------------------
# spectral suites share the canonical test functions, rebuilt inside workers


def _canonical_pair():
    from ..spectransform import CANONICAL_V, CANONICAL_W

    return CANONICAL_V, CANONICAL_W


def _sears_instances(spec, b):
    out = []
    for variant in b["variants"]:
        if variant not in ("stated", "real-part"):
            raise ConfigInvalid(f"sears variant must be 'stated' or 'real-part', got {variant!r}")
        for t in b["t_values"]:
            out.append((_desc(part="theorem", spectrum="continuous", param=float(t), variant=variant),
                        ("theorem", float(t), False, variant)))
        for k in b["k_values"]:
            out.append((_desc(part="theorem", spectrum="discrete", param=int(k), variant=variant),
                        ("theorem", int(k), True, variant)))
        for z in b["z_values"]:
            out.append((_desc(part="inversion", z=float(z), T=float(b["T"]), K=int(b["K"]), variant=variant),
                        ("inversion", float(z), None, variant)))
    return out


def _sears_eval(D, b, tol, args):
    from ..spectransform import (h_of_convolution, h_transform, real_convolution_expansion,
                                 sears_titchmarsh_reconstruct)

    V, W = _canonical_pair()
    part, p, discrete, variant = args
    if part == "theorem":
        C = 2 * math.pi if discrete else math.pi
        lhs = h_of_convolution(V, W, p, discrete).value
        rhs = C * h_transform(V, p, discrete).value * h_transform(W, p, discrete).value
        if variant == "real-part":
            rhs = math.pi * rhs / C
            lhs = complex(lhs.real, 0.0)
            prov = "Re h(V*W) = pi h(V) h(W)"
        else:
            prov = f"h(V*W) = C h(V) h(W), C = {'2 pi' if discrete else 'pi'}"
        return [({}, compare(lhs, rhs, tol["theorem"], "rel", prov))]
    T, K = float(b["T"]), int(b["K"])
    if variant == "real-part":
        res = real_convolution_expansion(V, W, p, T, K)
        prov = ("Re V*W(z) = 4 pi int M tanh(pi t) B_{2it}(z) t dt + 2 pi sum_k (k-1) J_{k-1}(z) i^{-k} M(k), "
                f"tail bound {res.tail:.3g}")
    else:
        res = sears_titchmarsh_reconstruct(V, W, p, T, K)
        prov = ("V*W(z) = 4 pi (int M tanh(pi t) B_{2it}(z) t dt + sum_k (k-1) J_{k-1}(z) M(k)), "
                f"tail bound {res.tail:.3g}")
    return [({}, compare(res.expansion, res.convolution, tol["inversion"], "rel", prov))]


_suite("sears", "convolution theorem and the Sears-Titchmarsh expansion of V*W",
       {"t_values": [0.5, 1.7, 3.1], "k_values": [2, 4, 6], "z_values": [1.0, 5.0, 10.0],
        "T": 30.0, "K": 40, "variants": ["stated", "real-part"]},
       {"theorem": 1e-3, "inversion": 1e-2})((_sears_instances, _sears_eval))


PLANCHEREL_PAIRS = {
    "V,V": ((1.0, 3.0), (1.0, 3.0)),
    "V,W": ((1.0, 3.0), (2.0, 4.0)),
    "W,W": ((2.0, 4.0), (2.0, 4.0)),
    "disjoint": ((1.0, 2.0), (3.0, 4.0)),
}


def _plancherel_instances(spec, b):
    return [(_desc(pair=name, T=float(b["T"]), K=int(b["K"])), (name,)) for name in b["pairs"]]


def _plancherel_eval(D, b, tol, args):
    from ..spectransform import bump, gauss_legendre, plancherel_sides

    (name,) = args
    if name not in PLANCHEREL_PAIRS:
        raise ConfigInvalid(f"unknown Plancherel pair {name!r}")
    s1, s2 = PLANCHEREL_PAIRS[name]
    V1, V2 = bump(*s1), bump(*s2)
    res = plancherel_sides(V1, V2, float(b["T"]), int(b["K"]))
    norms = [gauss_legendre(lambda x, f=f: f(x) ** 2 / x, *f.support, tol=1e-12)[0].real for f in (V1, V2)]
    scale = math.sqrt(norms[0] * norms[1])
    prov = ("int V1 V2 dx/x = 2 (int_R M tanh(pi t) t dt + sum_k (k-1) M(k)), error relative to "
            f"(|V1| |V2|) = {scale:.6g}, tail bound {res.tail:.3g}")
    return [({}, compare(res.lhs, res.rhs, tol["rel"], "rel", prov, scale=scale))]


_suite("plancherel", "Plancherel identity for the spectral transform",
       {"pairs": list(PLANCHEREL_PAIRS), "T": 30.0, "K": 40}, {"rel": 1e-2})(
    (_plancherel_instances, _plancherel_eval))


# ---------------------------------------------------------------------------
# geometric side


def distinct_l(D: int) -> QuadInt:
    """Smallest k + w (k >= 2) that is totally positive, prime to D, and not a unit."""
    from ..quadfield import omega

    w = omega(D)
    k = 2
    while True:
        l = w + k
        e1, e2 = l.embeddings()
        if e1 > 0 and e2 > 0 and math.gcd(l.norm(), D) == 1 and not l.is_unit() and e1 / e2 < 8:
            return l
        k += 1


def _geo_cfg(D: int, l: QuadInt | None, X_values=None):
    from ..geoside import GeoConfig

    kw = {"D": D, "l": l}
    if X_values is not None:
        kw["X_values"] = tuple(float(x) for x in X_values)
    return GeoConfig(**kw)


def _a0_instances(spec, b):
    out = []
    for case in b["cases"]:
        if case not in ("equal", "distinct"):
            raise ConfigInvalid(f"a0 case must be 'equal' or 'distinct', got {case!r}")
        l = QuadInt(1, 0, spec.field_D) if case == "equal" else distinct_l(spec.field_D)
        for X in b["X_values"]:
            out.append((_desc(D=spec.field_D, case=case, l=l, X=float(X)), (case, l, float(X))))
    return out


def _a0_eval(D, b, tol, args):
    from ..geoside import A0_claimed_limit, A0_diagonal_limit, A0_value

    case, l, X = args
    cfg = _geo_cfg(D, l)
    value, terms = A0_value(X, cfg)
    ref = _geo_cfg(D, QuadInt(1, 0, D))
    scale = A0_claimed_limit(ref)
    if case == "distinct":
        prov = f"A_0,X -> 0 for l != l', error relative to the l = l' target {scale:.6g}; {terms} terms"
        return [({"target": "stated"}, compare(value, 0.0, tol["limit"], "rel", prov, scale=scale))]
    claimed = A0_claimed_limit(cfg)
    diag = A0_diagonal_limit(cfg)
    return [
        ({"target": "stated"}, compare(value, claimed, tol["limit"], "rel",
                                       f"A_0,X -> (1 + 1/D)/2 int int V1 V2 dx dy/(xy); {terms} terms")),
        ({"target": "diagonal"}, compare(value, diag, tol["limit"], "rel",
                                         f"A_0,X -> (2D+1)/(D+1) (int g) int V1 V2 dp/p; {terms} terms")),
    ]


_suite("a0", "limit of the zero-frequency geometric term A_0,X",
       {"X_values": [1e2, 1e3, 1e4], "cases": ["equal", "distinct"]}, {"limit": 1e-2})(
    (_a0_instances, _a0_eval))


def _an_instances(spec, b):
    D = spec.field_D
    one = QuadInt(1, 0, D)
    out = []
    for d in (one, sqrt_d(D)):
        for X in b["X_values"]:
            out.append((_desc(D=D, part="mainterm", n=D, r=one, d=d, X=float(X)), ("mainterm", d, float(X))))
    ld = distinct_l(D)
    st = [(a, one) for a in b["st_a"]] + [(a, ld) for a in b["st_a_distinct"]]
    for a, l in st:
        out.append((_desc(D=D, part="ST", a=int(a), l=l), ("ST", int(a), l)))
    return out


def _an_eval(D, b, tol, args):
    from ..geoside import H_n_double_integral, H_n_integral, An_candidates, An_sum, _R_for

    one = QuadInt(1, 0, D)
    if args[0] == "mainterm":
        _, d, X = args
        cfg = _geo_cfg(D, one)
        n = D
        integral, _ = H_n_double_integral(n, cfg)
        value, points = An_sum(n, one, d, X, cfg)
        const = value / integral
        cands = An_candidates(n, d, D)
        name = min(cands, key=lambda k: abs(const - cands[k]))
        derived = n * float(_R_for(n, d)) / math.sqrt(D)
        return [
            ({"candidate": "stated-best"},
             compare(const, cands[name], tol["mainterm"], "rel",
                     f"(1/X) sum H_n / int int H_n against the closest stated constant {name}; {points} points")),
            ({"candidate": "n R/sqrtD"},
             compare(const, derived, tol["mainterm"], "rel",
                     f"(1/X) sum H_n / int int H_n against n R(n,d)/sqrt D; {points} points")),
        ]
    _, a, l = args
    cfg = _geo_cfg(D, l)
    res = H_n_integral(D * a, cfg)
    return [
        ({"form": "stated"}, compare(res.integral, res.convolution_side, tol["ST"], "rel",
                                     "int int H_{Da} = D (V1*V2)(4 pi sqrt(ll')/(Da))")),
        ({"form": "reduced"}, compare(res.integral, res.reduced_integral, tol["ST"], "rel",
                                      "int int H_{Da} = (int g) int int exp(-iz/2 (p/q+q/p) - i pq/(2Dz)) "
                                      "V1 V2 dp dq/(pq)")),
    ]


_suite("an", "main term of A_n,X and the double integral of H_n",
       {"X_values": [1e2, 1e3, 1e4], "st_a": [1, 2, 3], "st_a_distinct": [1, 2]},
       {"mainterm": 0.05, "ST": 1e-3})((_an_instances, _an_eval))


# ---------------------------------------------------------------------------
# dcard and ddivn


def _dcard_instances(spec, b):
    from ..solnsets import unit_norm_classes

    D = spec.field_D
    delta = sqrt_d(D)
    out = []
    for n in range(D, int(b["n_max"]) + 1, D):
        rs = unit_norm_classes(n, D)
        plus = [r for r in rs if divides(delta, r - 1)][: int(b["r_limit"])]
        minus = [r for r in rs if divides(delta, r + 1) and not divides(delta, r - 1)][: int(b["r_limit"])]
        for k in sympy.divisors(n):
            for d in (QuadInt(int(k), 0, D), delta * int(k)):
                if not divides(d, QuadInt(n, 0, D)):
                    continue
                for f in sympy.divisors(k):
                    if not divides(d * delta, QuadInt(n * int(f), 0, D)):
                        continue
                    for branch, rlist in (("+1", plus), ("-1", minus)):
                        for r in rlist:
                            out.append((_desc(D=D, n=n, r=r, d=d, f=int(f), branch=branch),
                                        (n, r, d, int(f), branch)))
    return out


def _dcard_eval(D, b, tol, args):
    from ..solnsets import count_congruence_solutions

    n, r, d, f, branch = args
    cc = count_congruence_solutions(n, r, d, f)
    claim = "#{c mod M: cr = c'} = nf/d (d = d') or nf/(Dk) (d = k sqrt D), M = nf/(d delta)"
    if branch == "-1" and divides(sqrt_d(D), cc.modulus):
        # mod delta the congruence reads -2c = 0, so delta divides both c and c'
        return [({}, compare(Fraction(cc.coprime_kernel), Fraction(0), None, "exact",
                             "no c with (c, c') = 1 solves cr = c' mod M when r = -1 mod delta and delta | M"))]
    if cc.expected is None:
        return [({}, Outcome(Fraction(cc.kernel), None, False, None, None, "no integral expected count"))]
    return [({}, compare(Fraction(cc.kernel), Fraction(cc.expected), None, "exact", claim))]


_suite("dcard", "counting c mod nf/(d delta) with cr = c'",
       {"n_max": 60, "r_limit": 12}, {}, "n_max")((_dcard_instances, _dcard_eval))


def _ddivn_instances(spec, b):
    total, size = int(b["samples"]), int(b["batch"])
    nb = -(-total // size)
    return [(_desc(D=spec.field_D, batch=i, coord_max=b["coord_max"]),
             (spec.seed, i, min(size, total - i * size))) for i in range(nb)]


def _ddivn_eval(D, b, tol, args):
    from ..solnsets import norm_delta_c, trace_delta_c_xconj

    seed, i, size = args
    rng = random.Random(f"ddivn:{seed}:{D}:{i}")
    cmax = int(b["coord_max"])
    hits = 0
    for _ in range(size):
        c = QuadInt(0, 0, D)
        while not c:
            c = QuadInt(rng.randint(-cmax, cmax), rng.randint(-cmax, cmax), D)
        x = QuadInt(rng.randint(-cmax, cmax), rng.randint(-cmax, cmax), D)
        m = rng.randint(-cmax, cmax)
        n = trace_delta_c_xconj(c, x) + m * norm_delta_c(c)
        hits += n % D == 0
    return [({}, compare(Fraction(hits), Fraction(size), None, "exact",
                         "n = delta'c'x + delta c x' + m N(delta c) is divisible by D, count over the batch"))]


_suite("ddivn", "D divides every n = delta'c'x + delta c x' + m N(delta c)",
       {"samples": 100_000, "batch": 1000, "coord_max": 1000}, {}, "samples")(
    (_ddivn_instances, _ddivn_eval))


# ---------------------------------------------------------------------------
# Running


_DIGITS = re.compile(r"(\d+)")


def _natural(s: str) -> tuple:
    parts = _DIGITS.split(s)
    return tuple(int(p) if i % 2 else p for i, p in enumerate(parts))


def sort_key(instance: dict[str, str]) -> tuple:
    return tuple((k, _natural(v)) for k, v in sorted(instance.items()))


def _evaluate(payload) -> list[tuple[dict, Outcome | None, str | None, int]]:
    name, D, bounds, tol, args = payload
    start = time.perf_counter()
    try:
        results = SUITES[name].evaluate(D, bounds, tol, args)
        err = None
    except Exception as exc:  # failures never abort a sweep
        results, err = [], f"error: {type(exc).__name__}: {exc}"
    ms = int(round((time.perf_counter() - start) * 1000))
    if err is not None:
        return [({}, None, err, ms)]
    return [(extra, out, None, ms) for extra, out in results]


def worker_count(requested: int) -> int:
    env = os.environ.get(THREADS_ENV)
    if env is None or env == "":
        return requested
    try:
        n = int(env)
    except ValueError:
        raise ConfigInvalid(f"{THREADS_ENV}={env!r} is not an integer") from None
    if n < 1:
        raise ConfigInvalid(f"{THREADS_ENV} must be positive, got {n}")
    return n


def run_suite(spec: SuiteSpec) -> list[VerificationReport]:
    """Evaluate every instance of the suite; reports come back in canonical order."""
    spec.validate()
    suite = spec.suite
    bounds, tol = spec.bounds(), spec.tolerance()
    instances = suite.instances(spec, bounds)
    payloads = [(suite.name, spec.field_D, bounds, tol, args) for _, args in instances]
    workers = worker_count(spec.parallel)
    if workers > 1 and len(payloads) > 1:
        chunk = max(1, len(payloads) // (8 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate, payloads, chunksize=chunk))
    else:
        results = [_evaluate(p) for p in payloads]
    reports = []
    for (desc, _), rows in zip(instances, results):
        for extra, out, err, ms in rows:
            inst = {"D": str(spec.field_D), **desc, **extra}
            if out is None:
                reports.append(VerificationReport(suite.name, inst, None, None, None, None, False, ms, err))
            else:
                reports.append(VerificationReport(suite.name, inst, out.lhs, out.rhs, out.abs_error,
                                                  out.rel_error, out.passed, ms, out.provenance))
    reports.sort(key=lambda r: sort_key(r.instance))
    return reports


def all_passed(reports: list[VerificationReport]) -> bool:
    return all(r.passed for r in reports)


def list_suites() -> list[tuple[str, str]]:
    return [(name, s.summary) for name, s in SUITES.items()]
