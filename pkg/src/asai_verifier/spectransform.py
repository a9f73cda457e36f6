"""Archimedean layer: complex-order Bessel functions, the Kuznetsov kernel
B_{2it}, the transforms h(V, t) and h(V, k), the convolution V*W, the
Sears-Titchmarsh expansion and the Plancherel identity.

Conventions
-----------
h(V, t) = int V(x) B_{2it}(x) dx/x            (principal series, real t)
h(V, k) = i^k int V(x) J_{k-1}(x) dx/x        (discrete series, even k)
V*W(z)  = int int exp(iz/2 (p/q + q/p)) exp(i pq/(2z)) V(p) W(q) dp dq/(pq)

The last form is the convolution written in the variables p = 4 pi/x,
q = 4 pi/y, where the phase (1/z) 8 pi^2 i/(xy) becomes i pq/(2z).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import mpmath
import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import yv

from .errors import QuadratureFailure, RegimeExceeded, TruncationBudgetExceeded

# ---------------------------------------------------------------------------
# Gamma

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)


def log_gamma(z: complex) -> complex:
    """log Gamma(z) by the Lanczos approximation (g=7, 9 terms).

    The imaginary part is a continuous branch only up to multiples of 2 pi i;
    callers exponentiate.
    """
    z = complex(z)
    if z.real < 0.5:
        s = cmath.sin(math.pi * z)
        if s == 0:
            raise ValueError(f"Gamma has a pole at {z}")
        return cmath.log(math.pi / s) - log_gamma(1.0 - z)
    z -= 1.0
    x = _LANCZOS[0]
    for i in range(1, 9):
        x += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_TWO_PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def gamma(z: complex) -> complex:
    return cmath.exp(log_gamma(z))


# ---------------------------------------------------------------------------
# Bessel J of complex order

SERIES_MAX_X = 12.0  # double-precision ascending series keeps >= 11 digits here
MAX_X = 60.0
MAX_IMAG_ORDER = 100.0  # h(V, t) up to t = 50


def _check_regime(nu: complex, x: np.ndarray) -> None:
    if np.any(x < 0) or np.any(x > MAX_X):
        raise RegimeExceeded(f"argument outside [0, {MAX_X}]")
    if abs(complex(nu).imag) > MAX_IMAG_ORDER:
        raise RegimeExceeded(f"|Im nu| > {MAX_IMAG_ORDER}")


def _series(nu: complex, x: np.ndarray) -> np.ndarray:
    """sum_m (-1)^m (x/2)^{2m+nu} / (m! Gamma(m+1+nu)) for x > 0."""
    q = -0.25 * x * x
    term = np.ones_like(x, dtype=complex)
    total = term.copy()
    m = 0
    while True:
        m += 1
        term = term * q / (m * (m + nu))
        total += term
        if m > 0.5 * float(np.max(x, initial=0.0)) + 2 and np.max(np.abs(term)) <= 1e-18 * np.max(np.abs(total)):
            break
        if m > 500:
            break
    return np.exp(nu * np.log(0.5 * x) - log_gamma(1.0 + nu)) * total


def _is_negative_integer(nu: complex) -> bool:
    return nu.imag == 0 and nu.real < 0 and float(nu.real).is_integer()


def bessel_J(nu: complex, x) -> np.ndarray | complex:
    """J_nu(x) for complex nu and 0 <= x <= 60.

    Ascending series with Lanczos Gamma for x <= 12; mpmath's series in
    extended precision on (12, 60], where double-precision cancellation in
    the series would cost more than two digits.
    """
    nu = complex(nu)
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    _check_regime(nu, xs)
    if _is_negative_integer(nu):
        n = int(-nu.real)
        out = (-1) ** n * np.atleast_1d(bessel_J(n, xs))
        return complex(out[0]) if scalar else out
    out = np.empty(xs.shape, dtype=complex)
    zero = xs == 0
    out[zero] = 1.0 if nu == 0 else 0.0
    small = (~zero) & (xs <= SERIES_MAX_X)
    if np.any(small):
        out[small] = _series(nu, xs[small])
    big = xs > SERIES_MAX_X
    if np.any(big):
        with mpmath.workdps(30):
            out[big] = [complex(mpmath.besselj(mpmath.mpc(nu.real, nu.imag), float(v))) for v in xs[big]]
    return complex(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# Kuznetsov kernel


def kernel_B(t: float, x) -> np.ndarray | float:
    """B_{2it}(x) = (J_{-2it}(x) - J_{2it}(x)) / (2 sin(pi i t)).

    For real t and x, J_{-2it} = conj(J_{2it}) and the kernel equals
    -Im J_{2it}(x) / sinh(pi t).  At t = 0 the limit is -Y_0(x).
    """
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if t == 0:
        _check_regime(0, xs)
        out = -yv(0, xs)
    else:
        out = -bessel_J(2j * t, xs).imag / math.sinh(math.pi * t)
    return float(out[0]) if scalar else out


def kernel_B_complex(t: float, x) -> np.ndarray:
    """The defining quotient evaluated with both orders, before taking real parts."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    num = bessel_J(-2j * t, xs) - bessel_J(2j * t, xs)
    return num / (2.0 * cmath.sin(math.pi * 1j * t))


def kernel_B_checked(t: float, x, tol: float = 1e-10) -> np.ndarray:
    """Real part of the defining quotient; asserts the imaginary residue is below ``tol``."""
    val = kernel_B_complex(t, x)
    scale = max(1.0, float(np.max(np.abs(val))))
    residue = float(np.max(np.abs(val.imag)))
    if residue > tol * scale:
        raise QuadratureFailure(f"B_{{2it}} imaginary residue {residue:.3e} exceeds {tol}")
    return val.real


# ---------------------------------------------------------------------------
# Test functions


def _bump_profile(u: np.ndarray) -> np.ndarray:
    out = np.zeros_like(u)
    inside = np.abs(u) < 1
    out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    return out


@dataclass(frozen=True)
class TestFunction:
    """A smooth function compactly supported in (a, b), 0 < a < b."""

    __test__ = False  # not a pytest class

    support: tuple[float, float]
    eval: Callable[[np.ndarray], np.ndarray] = field(compare=False)
    family_params: tuple = ()

    def __post_init__(self):
        a, b = self.support
        if not 0 <= a < b:
            raise ValueError(f"support must satisfy 0 <= a < b, got {self.support}")

    def __call__(self, x) -> np.ndarray:
        xs = np.asarray(x, dtype=float)
        a, b = self.support
        inside = (xs > a) & (xs < b)
        out = np.zeros(np.shape(xs))
        if np.any(inside):
            out[inside] = self.eval(xs[inside])
        return out

    @property
    def is_zero(self) -> bool:
        return self.family_params[:1] == ("zero",)

    def integral(self, weight: Callable[[np.ndarray], np.ndarray] | None = None) -> float:
        """int f(x) w(x) dx over the support, Gauss-Legendre with doubling."""
        f = self if weight is None else (lambda x: self(x) * weight(x))
        return gauss_legendre(f, *self.support, tol=1e-12)[0].real

    def scaled(self, factor: float) -> "TestFunction":
        """x -> c f(x)."""
        return TestFunction(self.support, lambda x: factor * self.eval(x),
                            self.family_params + (("scaled", factor),))

    def dilated(self, lam: float) -> "TestFunction":
        """x -> f(lam x)."""
        a, b = self.support
        return TestFunction((a / lam, b / lam), lambda x: self.eval(lam * x),
                            self.family_params + (("dilated", lam),))

    def normalized(self) -> "TestFunction":
        """Rescaled to unit integral."""
        return self.scaled(1.0 / self.integral())


def bump(a: float, b: float, height: float = 1.0) -> TestFunction:
    """height * exp(-1/(1-u^2)) with u = (2x - a - b)/(b - a) on (a, b)."""
    def ev(x, a=a, b=b, height=height):
        return height * _bump_profile((2.0 * x - a - b) / (b - a))

    return TestFunction((a, b), ev, ("bump", 0.5 * (a + b), b - a, height))


def zero_function(a: float = 1.0, b: float = 2.0) -> TestFunction:
    return TestFunction((a, b), lambda x: np.zeros_like(x), ("zero",))


def linear_combination(alpha: float, f: TestFunction, beta: float, g: TestFunction) -> TestFunction:
    """alpha f + beta g on the hull of both supports."""
    support = (min(f.support[0], g.support[0]), max(f.support[1], g.support[1]))
    return TestFunction(support, lambda x: alpha * f(x) + beta * g(x),
                        ("combination", alpha, f.family_params, beta, g.family_params))


# ---------------------------------------------------------------------------
# Quadrature

GL_ORDER = 16


@lru_cache(maxsize=16)
def _gl_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    return leggauss(order)


def panel_nodes(a: float, b: float, panels: int, order: int = GL_ORDER) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes and weights on [a, b]."""
    x0, w0 = _gl_nodes(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    xs = (mid[:, None] + half[:, None] * x0[None, :]).ravel()
    ws = (half[:, None] * w0[None, :]).ravel()
    return xs, ws


def panels_for_phase(variation: float, minimum: int = 8) -> int:
    """Panel count with at most pi/4 of phase change per panel."""
    return max(minimum, int(math.ceil(abs(variation) / (math.pi / 4))))


def gauss_legendre(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                   panels: int = 8, tol: float = 1e-10, max_panels: int = 4096) -> tuple[complex, float]:
    """Composite Gauss-Legendre with panel doubling.

    Returns (value, est_error) where est_error = |I_P - I_{2P}| at the last step.
    """
    xs, ws = panel_nodes(a, b, panels)
    prev = complex(np.sum(f(xs) * ws))
    while True:
        panels *= 2
        xs, ws = panel_nodes(a, b, panels)
        cur = complex(np.sum(f(xs) * ws))
        err = abs(cur - prev)
        if err <= tol * max(1.0, abs(cur)):
            return cur, err
        if panels >= max_panels:
            raise QuadratureFailure(f"no convergence on [{a}, {b}]: est_error {err:.3e}")
        prev = cur


# ---------------------------------------------------------------------------
# Transforms


@dataclass(frozen=True)
class TransformValue:
    t: complex
    value: complex
    est_error: float


def _oscillation(t: float, a: float, b: float) -> float:
    """Phase variation of x^{2it} and of e^{ix} across [a, b]."""
    return 2.0 * abs(t) * math.log(b / a) + (b - a)


def h_transform(V: TestFunction, param: float, discrete: bool = False,
                tol: float = 1e-9) -> TransformValue:
    """h(V, t) for real t, or h(V, k) = i^k int V J_{k-1} dx/x with ``discrete``.

    The discrete convention takes the weight k as the index in J_{k-1}.
    """
    a, b = V.support
    if V.is_zero:
        return TransformValue(param, 0j, 0.0)
    if discrete:
        k = int(param)
        f = lambda x: V(x) * bessel_J(k - 1, x).real / x
        value, err = gauss_legendre(f, a, b, panels_for_phase(b - a), tol=tol)
        return TransformValue(k, (1j ** k) * value, err)
    f = lambda x: V(x) * kernel_B(param, x) / x
    value, err = gauss_legendre(f, a, b, panels_for_phase(_oscillation(param, a, b)), tol=tol)
    return TransformValue(param, complex(value.real, 0.0), err)


def _fixed_nodes(V: TestFunction, t_max: float) -> tuple[np.ndarray, np.ndarray]:
    a, b = V.support
    panels = 2 * panels_for_phase(_oscillation(t_max, a, b))
    return panel_nodes(a, b, panels)


def h_principal_grid(V: TestFunction, ts: np.ndarray) -> np.ndarray:
    """h(V, t) for many t on one fixed node set (sized for the largest |t|)."""
    ts = np.asarray(ts, dtype=float)
    if V.is_zero:
        return np.zeros(ts.shape)
    xs, ws = _fixed_nodes(V, float(np.max(np.abs(ts), initial=0.0)))
    fw = V(xs) * ws / xs
    return np.array([np.dot(fw, kernel_B(float(t), xs)) for t in ts])


def h_discrete_grid(V: TestFunction, ks) -> np.ndarray:
    """h(V, k) = i^k int V J_{k-1} dx/x for even k; real since i^k = +-1."""
    ks = list(ks)
    if V.is_zero:
        return np.zeros(len(ks))
    xs, ws = _fixed_nodes(V, 0.0)
    fw = V(xs) * ws / xs
    return np.array([((-1) ** (k // 2)) * np.dot(fw, bessel_J(k - 1, xs).real) for k in ks])


# ---------------------------------------------------------------------------
# Convolution


def _convolution_phase_variation(V: TestFunction, W: TestFunction, z: float) -> tuple[float, float]:
    (a, b), (c, d) = V.support, W.support
    ratio = max(b / c, d / a)
    var_p = 0.5 * z * (ratio - min(a / d, c / b)) + 0.5 * d * (b - a) / z
    var_q = 0.5 * z * (ratio - min(a / d, c / b)) + 0.5 * b * (d - c) / z
    return var_p, var_q


def convolve(V: TestFunction, W: TestFunction, z: float, tol: float = 1e-9) -> tuple[complex, float]:
    """V*W(z) by tensor Gauss-Legendre on supp V x supp W.

    Panels are sized for at most pi/4 of phase change each and doubled until
    two successive values agree to ``tol``.  Returns (value, est_error).
    """
    if z <= 0:
        raise ValueError("z must be positive")
    if V.is_zero or W.is_zero:
        return 0j, 0.0
    (a, b), (c, d) = V.support, W.support
    vp, vq = _convolution_phase_variation(V, W, z)
    np_, nq = panels_for_phase(vp), panels_for_phase(vq)

    def evaluate(np_: int, nq: int) -> complex:
        p, wp = panel_nodes(a, b, np_)
        q, wq = panel_nodes(c, d, nq)
        fp = V(p) * wp / p
        fq = W(q) * wq / q
        P, Q = np.meshgrid(p, q, indexing="ij")
        phase = 0.5 * z * (P / Q + Q / P) + P * Q / (2.0 * z)
        return complex(fp @ np.exp(1j * phase) @ fq)

    prev = evaluate(np_, nq)
    for _ in range(6):
        np_, nq = 2 * np_, 2 * nq
        cur = evaluate(np_, nq)
        err = abs(cur - prev)
        if err <= tol * max(1.0, abs(cur)):
            return cur, err
        prev = cur
    raise QuadratureFailure(f"convolution at z={z} did not converge: est_error {err:.3e}")


def watson_kernel(nu: complex, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """int_0^oo exp(i/2 (s + (a^2+b^2)/s)) J_nu(ab/s) ds/s for 0 < a <= b.

    Classical closed form: pi i e^{i nu pi/2} J_nu(a) H^(1)_nu(b).  For
    non-integer nu, H^(1)_nu = (J_{-nu} - e^{-i pi nu} J_nu)/(i sin(nu pi)).
    """
    nu = complex(nu)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ja = bessel_J(nu, a)
    if nu.imag == 0 and float(nu.real).is_integer():
        n = int(nu.real)
        hb = bessel_J(n, b).real + 1j * yv(n, b)
    else:
        hb = (bessel_J(-nu, b) - cmath.exp(-1j * math.pi * nu) * bessel_J(nu, b)) / (1j * cmath.sin(nu * math.pi))
    return math.pi * 1j * cmath.exp(0.5j * nu * math.pi) * ja * hb


def convolution_kernel(param: float, p: np.ndarray, q: np.ndarray, discrete: bool = False) -> np.ndarray:
    """K(p, q) with h(V*W, .) = int int V(p) W(q) K(p, q) dp dq/(pq).

    Obtained by exchanging the z-integral of h with the convolution and
    substituting s = pq/z, which turns the inner integral into
    ``watson_kernel`` at (min(p,q), max(p,q)).
    """
    lo, hi = np.minimum(p, q), np.maximum(p, q)
    if discrete:
        k = int(param)
        return (1j ** k) * watson_kernel(k - 1, lo, hi)
    nu = 2j * param
    num = watson_kernel(-nu, lo, hi) - watson_kernel(nu, lo, hi)
    return num / (2.0 * cmath.sin(math.pi * 1j * param))


def h_of_convolution(V: TestFunction, W: TestFunction, param: float, discrete: bool = False,
                     tol: float = 1e-10) -> TransformValue:
    """h(V*W, t) (or h(V*W, k)) through the exchanged-order kernel."""
    if V.is_zero or W.is_zero:
        return TransformValue(param, 0j, 0.0)
    (a, b), (c, d) = V.support, W.support
    osc = 0.0 if discrete else param
    n1 = panels_for_phase(_oscillation(osc, a, b))
    n2 = panels_for_phase(_oscillation(osc, c, d))

    # K has a kink on p = q; the inner integral is split there
    def evaluate(n1: int, n2: int) -> complex:
        p, wp = panel_nodes(a, b, n1)
        total = 0j
        for pi, wi in zip(p, wp):
            inner = 0j
            for lo, hi in ((c, min(d, pi)), (max(c, pi), d)):
                if hi <= lo:
                    continue
                span = max(1, int(math.ceil(n2 * (hi - lo) / (d - c))))
                q, wq = panel_nodes(lo, hi, span)
                K = convolution_kernel(param, np.full_like(q, pi), q, discrete)
                inner += np.sum(K * W(q) * wq / q)
            total += wi * V(np.array([pi]))[0] / pi * inner
        return complex(total)

    prev = evaluate(n1, n2)
    cur = evaluate(2 * n1, 2 * n2)
    err = abs(cur - prev)
    if err > 1e3 * tol * max(1.0, abs(cur)):
        raise QuadratureFailure(f"h(V*W) did not converge: est_error {err:.3e}")
    return TransformValue(param, cur, err)


def convolution_constant(V: TestFunction, W: TestFunction, param: float, discrete: bool = False) -> complex:
    """h(V*W, .) / (h(V, .) h(W, .))."""
    lhs = h_of_convolution(V, W, param, discrete).value
    rhs = h_transform(V, param, discrete).value * h_transform(W, param, discrete).value
    return lhs / rhs


def convolution_theorem_residual(V: TestFunction, W: TestFunction, param: float, C: float,
                                 discrete: bool = False) -> tuple[complex, complex, float]:
    """(lhs, rhs, relative error) for h(V*W) = C h(V) h(W)."""
    lhs = h_of_convolution(V, W, param, discrete).value
    rhs = C * h_transform(V, param, discrete).value * h_transform(W, param, discrete).value
    return lhs, rhs, abs(lhs - rhs) / abs(rhs)


# ---------------------------------------------------------------------------
# Sears-Titchmarsh and Plancherel

T_DEFAULT = 30.0
K_DEFAULT = 40


@dataclass(frozen=True)
class SpectralExpansion:
    """Truncated continuous and discrete parts with their empirical tail bounds."""

    continuous: complex
    discrete: complex
    tail: float

    @property
    def total(self) -> complex:
        return self.continuous + self.discrete


def _t_grid(T: float, panels: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    panels = panels or max(16, int(4 * T))
    return panel_nodes(0.0, T, panels)


def _even_weights(K: int) -> list[int]:
    return list(range(2, K + 1, 2))


@lru_cache(maxsize=64)
def _spectral_data(V: TestFunction, W: TestFunction, T: float, K: int):
    ts, wt = _t_grid(T)
    M_t = h_principal_grid(V, ts) * h_principal_grid(W, ts)
    ks = _even_weights(K)
    M_k = h_discrete_grid(V, ks) * h_discrete_grid(W, ks)
    return ts, wt, M_t, np.array(ks), M_k


def _tail_bound(ts: np.ndarray, wt: np.ndarray, cont_terms: np.ndarray, disc_terms: np.ndarray) -> float:
    """Twice the magnitude of the last tenth of the t-range plus the last five k-terms."""
    last = ts >= 0.9 * ts[-1]
    return 2.0 * (abs(float(np.sum(cont_terms[last] * wt[last]))) + float(np.sum(np.abs(disc_terms[-5:]))))


def spectral_expansion(V: TestFunction, W: TestFunction, z: float,
                       c_cont: float, c_disc: float,
                       T: float = T_DEFAULT, K: int = K_DEFAULT,
                       signed: bool = False) -> SpectralExpansion:
    """c_cont int_0^T M(t) tanh(pi t) B_{2it}(z) t dt + c_disc sum_{k even <= K} (k-1) J_{k-1}(z) M(k).

    ``signed`` weights the k-th term by i^{-k} = (-1)^{k/2}.
    """
    ts, wt, M_t, ks, M_k = _spectral_data(V, W, T, K)
    if signed:
        M_k = M_k * (-1.0) ** (ks // 2)
    Bz = np.array([kernel_B(float(t), z) for t in ts])
    cont_terms = c_cont * M_t * np.tanh(math.pi * ts) * Bz * ts
    disc_terms = c_disc * (ks - 1) * np.array([bessel_J(int(k) - 1, z).real for k in ks]) * M_k
    return SpectralExpansion(complex(np.sum(cont_terms * wt)), complex(np.sum(disc_terms)),
                             _tail_bound(ts, wt, cont_terms, disc_terms))


@dataclass(frozen=True)
class ReconstructionResult:
    z: float
    convolution: complex
    expansion: complex
    tail: float

    @property
    def rel_error(self) -> float:
        return abs(self.convolution - self.expansion) / abs(self.convolution)


def sears_titchmarsh_reconstruct(V: TestFunction, W: TestFunction, z: float,
                                 T: float = T_DEFAULT, K: int = K_DEFAULT,
                                 tail_tol: float | None = None) -> ReconstructionResult:
    """Compare V*W(z) with 4 pi (int_0^oo M tanh(pi t) B_{2it}(z) t dt + sum_k (k-1) J_{k-1}(z) M(k)),
    M = h(V, .) h(W, .), the sum running over even weights k."""
    conv, _ = convolve(V, W, z)
    exp_ = spectral_expansion(V, W, z, 4 * math.pi, 4 * math.pi, T, K)
    if tail_tol is not None and exp_.tail > tail_tol * max(abs(exp_.total), 1e-300):
        raise TruncationBudgetExceeded(f"tail bound {exp_.tail:.3e} at T={T}, K={K}")
    return ReconstructionResult(z, conv, exp_.total, exp_.tail)


def sears_titchmarsh_invert(V: TestFunction, x, T: float = T_DEFAULT, K: int = K_DEFAULT) -> np.ndarray:
    """V(x) rebuilt as 4 int_0^oo B_{2it}(x) h(V,t) t tanh(pi t) dt + 2 sum_k (k-1) J_{k-1}(x) i^{-k} h(V,k)."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    ts, wt = _t_grid(T)
    ht = h_principal_grid(V, ts)
    ks = _even_weights(K)
    hk = h_discrete_grid(V, ks) * np.array([(-1) ** (k // 2) for k in ks])
    cont = np.array([4.0 * np.sum(wt * ht * ts * np.tanh(math.pi * ts) * np.array([kernel_B(float(t), xi) for t in ts]))
                     for xi in xs])
    disc = np.array([2.0 * sum((k - 1) * bessel_J(k - 1, xi).real * h for k, h in zip(ks, hk)) for xi in xs])
    return cont + disc


def real_convolution_expansion(V: TestFunction, W: TestFunction, z: float,
                               T: float = T_DEFAULT, K: int = K_DEFAULT) -> ReconstructionResult:
    """Re V*W(z) against 4 pi int M tanh B t dt + 2 pi sum (k-1) J_{k-1}(z) i^{-k} M(k).

    Follows from h(Re V*W, .) = pi M and the inversion in ``sears_titchmarsh_invert``.
    """
    conv, _ = convolve(V, W, z)
    exp_ = spectral_expansion(V, W, z, 4 * math.pi, 2 * math.pi, T, K, signed=True)
    return ReconstructionResult(z, complex(conv.real, 0.0), exp_.total, exp_.tail)


@dataclass(frozen=True)
class PlancherelResult:
    lhs: float
    rhs: float
    tail: float

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def rel_residual(self) -> float:
        scale = max(abs(self.lhs), abs(self.rhs))
        return self.residual / scale if scale else 0.0


def plancherel_sides(V1: TestFunction, V2: TestFunction,
                     T: float = T_DEFAULT, K: int = K_DEFAULT) -> PlancherelResult:
    """int V1 V2 dx/x against 2 (int_R M(t) tanh(pi t) t dt + sum_{k even} (k-1) M(k)).

    M is even in t, so the integral over R is twice the integral over (0, T].
    """
    lo = max(V1.support[0], V2.support[0])
    hi = min(V1.support[1], V2.support[1])
    lhs = 0.0
    if lo < hi:
        lhs = gauss_legendre(lambda x: V1(x) * V2(x) / x, lo, hi, tol=1e-12)[0].real
    ts, wt, M_t, ks, M_k = _spectral_data(V1, V2, T, K)
    cont_terms = 4.0 * M_t * np.tanh(math.pi * ts) * ts
    disc_terms = 2.0 * (ks - 1) * M_k
    rhs = float(np.sum(cont_terms * wt) + np.sum(disc_terms))
    return PlancherelResult(lhs, rhs, _tail_bound(ts, wt, cont_terms, disc_terms))


def plancherel_check(V1: TestFunction, V2: TestFunction, T: float = T_DEFAULT, K: int = K_DEFAULT) -> float:
    """Absolute residual of the Plancherel identity."""
    return plancherel_sides(V1, V2, T, K).residual


CANONICAL_V = bump(1.0, 3.0)
CANONICAL_W = bump(2.0, 4.0)
