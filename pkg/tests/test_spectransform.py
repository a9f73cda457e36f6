import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asai_verifier.errors import RegimeExceeded
from asai_verifier.spectransform import (
    CANONICAL_V,
    CANONICAL_W,
    bessel_J,
    bump,
    convolution_constant,
    convolve,
    gamma,
    h_of_convolution,
    h_transform,
    kernel_B,
    kernel_B_checked,
    linear_combination,
    plancherel_sides,
    real_convolution_expansion,
    sears_titchmarsh_reconstruct,
    watson_kernel,
    zero_function,
)

B_ANCHOR = 0.5323863439767902  # B_{2i}(1)


def mp_J(nu, x):
    with mp.workdps(40):
        return complex(mp.besselj(mp.mpc(nu.real, nu.imag), x))


def mp_B(t, x):
    with mp.workdps(40):
        nu = mp.mpc(0, 2 * t)
        return complex((mp.besselj(-nu, x) - mp.besselj(nu, x)) / (2 * mp.sin(mp.pi * 1j * t))).real


def test_bessel_examples():
    assert bessel_J(0, 0.0) == 1
    x = 2.0
    assert abs(bessel_J(0.5, x) - math.sqrt(2 / (math.pi * x)) * math.sin(x)) < 1e-12
    assert abs(bessel_J(-3, 4.0) + bessel_J(3, 4.0)) < 1e-14


@settings(max_examples=40)
@given(st.floats(-6, 6), st.floats(-30, 30), st.floats(0.05, 60))
def test_bessel_against_mpmath(re, im, x):
    nu = complex(re, im)
    ref = mp_J(nu, x)
    assert abs(bessel_J(nu, x) - ref) <= 1e-10 * max(1.0, abs(ref))


@given(st.floats(-10, 10), st.floats(0.05, 60))
def test_bessel_conjugate_symmetry(t, x):
    a, b = bessel_J(2j * t, x), bessel_J(-2j * t, x)
    assert abs(b - a.conjugate()) <= 1e-10 * max(1.0, abs(a))


def test_bessel_regime():
    with pytest.raises(RegimeExceeded):
        bessel_J(1, 61.0)
    with pytest.raises(RegimeExceeded):
        bessel_J(120j, 1.0)


@pytest.mark.parametrize("z", [0.3, 1.0, 2.5, 4 + 3j, 0.5 - 7j, -2.5 + 1j])
def test_gamma_against_mpmath(z):
    ref = complex(mp.gamma(z))
    assert abs(gamma(z) - ref) <= 1e-12 * abs(ref)


def test_kernel_B_anchor_and_reality():
    assert abs(kernel_B(1.0, 1.0) - B_ANCHOR) < 1e-12
    assert abs(mp_B(1.0, 1.0) - B_ANCHOR) < 1e-12
    ts = np.linspace(0.1, 5, 12)
    xs = np.linspace(0.5, 20, 15)
    for t in ts:
        assert np.allclose(kernel_B_checked(float(t), xs), kernel_B(float(t), xs), atol=1e-10)


@pytest.mark.parametrize("t,x", [(0.3, 0.7), (2.0, 5.0), (4.5, 15.0), (8.0, 40.0)])
def test_kernel_B_against_mpmath(t, x):
    assert abs(kernel_B(t, x) - mp_B(t, x)) < 1e-10


def test_kernel_B_small_t_limit():
    for x in (0.5, 2.0, 9.0):
        assert abs(kernel_B(1e-3, x) - kernel_B(0.0, x)) < 1e-5
        assert abs(kernel_B(0.0, x) + float(mp.bessely(0, x))) < 1e-12


def test_h_zero_and_linearity():
    assert h_transform(zero_function(), 1.3).value == 0
    V, W = CANONICAL_V, CANONICAL_W
    combo = linear_combination(2.0, V, -0.5, W)
    for param, disc in ((0.7, False), (2.2, False), (2, True), (6, True)):
        lhs = h_transform(combo, param, disc).value
        rhs = 2.0 * h_transform(V, param, disc).value - 0.5 * h_transform(W, param, disc).value
        assert abs(lhs - rhs) < 1e-10


def test_h_discrete_against_mpmath():
    V = CANONICAL_V
    for k in (2, 4):
        with mp.workdps(20):
            ref = mp.quad(lambda x: float(V(np.array([float(x)]))[0]) * mp.besselj(k - 1, x) / x, [1, 2, 3])
        assert abs(h_transform(V, k, discrete=True).value - (1j ** k) * complex(ref)) < 1e-9


def test_h_principal_against_mpmath():
    V = CANONICAL_V
    t = 1.7
    with mp.workdps(20):
        ref = mp.quad(lambda x: float(V(np.array([float(x)]))[0]) * mp_B(t, float(x)) / x, [1, 2, 3])
    assert abs(h_transform(V, t).value - float(ref)) < 1e-9


def test_h_decay():
    V = CANONICAL_V
    vals = [abs(h_transform(V, t).value) * (1 + t) ** 4 for t in (10.0, 20.0, 40.0)]
    assert vals[0] > vals[1] > vals[2]


@pytest.mark.parametrize("nu,a,b", [(1, 1.0, 2.0), (3, 1.5, 2.5)])
def test_watson_kernel_against_direct_integral(nu, a, b):
    assert abs(watson_kernel(nu, np.array([a]), np.array([b]))[0] - _watson_direct(nu, a, b)) < 1e-12


@pytest.mark.slow
def test_watson_kernel_imaginary_order():
    nu, a, b = 0.6j, 1.2, 3.0
    assert abs(watson_kernel(nu, np.array([a]), np.array([b]))[0] - _watson_direct(nu, a, b)) < 1e-12


def _watson_direct(nu, a, b):
    # [1, oo) in s, and (0, 1] through u = 1/s, each by oscillatory quadrature
    with mp.workdps(20):
        f = lambda s: mp.exp(0.5j * (s + (a * a + b * b) / s)) * mp.besselj(nu, a * b / s) / s  # noqa: E731
        g = lambda u: mp.exp(0.5j * (1 / u + (a * a + b * b) * u)) * mp.besselj(nu, a * b * u) / u  # noqa: E731
        val = mp.quadosc(f, [1, mp.inf], omega=0.5) + mp.quadosc(g, [1, mp.inf], omega=(a * a + b * b) / 2 + a * b)
        return complex(val)


def test_convolve_zero_and_symmetry():
    assert convolve(zero_function(), CANONICAL_W, 2.0) == (0j, 0.0)
    a, _ = convolve(CANONICAL_V, CANONICAL_W, 3.0)
    b, _ = convolve(CANONICAL_W, CANONICAL_V, 3.0)
    assert abs(a - b) < 1e-9


def test_convolve_against_mpmath():
    V, W, z = CANONICAL_V, CANONICAL_W, 1.0
    v = lambda x: float(V(np.array([float(x)]))[0])  # noqa: E731
    w = lambda x: float(W(np.array([float(x)]))[0])  # noqa: E731
    with mp.workdps(15):
        ref = mp.quad(lambda p, q: v(p) * w(q) / (p * q)
                      * mp.expj(0.5 * z * (p / q + q / p) + p * q / (2 * z)), [1, 2, 3], [2, 3, 4])
    assert abs(convolve(V, W, z)[0] - complex(ref)) < 1e-8


@pytest.mark.parametrize("param,disc", [(1.7, False), (2, True)])
def test_convolution_constant_real_part_is_pi(param, disc):
    C = convolution_constant(CANONICAL_V, CANONICAL_W, param, disc)
    assert abs(C.real - math.pi) < 1e-3 * math.pi
    # the imaginary part does not vanish, so neither pi nor 2 pi is the full constant
    assert abs(C.imag) > 0.1


def test_h_of_convolution_zero():
    assert h_of_convolution(zero_function(), CANONICAL_W, 1.0).value == 0


def test_real_part_expansion_reconstructs():
    res = real_convolution_expansion(CANONICAL_V, CANONICAL_W, 5.0)
    assert res.rel_error < 1e-2
    assert res.tail < 1e-6


def test_stated_expansion_misses():
    res = sears_titchmarsh_reconstruct(CANONICAL_V, CANONICAL_W, 5.0)
    assert res.rel_error > 0.5


def test_plancherel_same_function():
    res = plancherel_sides(CANONICAL_V, CANONICAL_V)
    assert res.rel_residual < 1e-3


def test_plancherel_disjoint():
    res = plancherel_sides(bump(1.0, 2.0), bump(3.0, 4.0))
    assert res.lhs == 0.0
    scale = plancherel_sides(bump(1.0, 2.0), bump(1.0, 2.0)).lhs
    assert abs(res.rhs) < 1e-3 * scale


def test_plancherel_dilation_covariance():
    # dx/x is dilation invariant, so the left side is unchanged by x -> 2x
    a = plancherel_sides(CANONICAL_V, CANONICAL_W)
    b = plancherel_sides(CANONICAL_V.dilated(2.0), CANONICAL_W.dilated(2.0))
    assert abs(a.lhs - b.lhs) < 1e-12
    assert b.rel_residual < 1e-3 and a.rel_residual < 1e-3

