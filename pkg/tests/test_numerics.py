import cmath
import math

import mpmath as mp
import numpy as np
import pytest
import scipy.special as sps
from hypothesis import given, settings
from hypothesis import strategies as st

from khalfin import (
    QuadratureSpec,
    e1_asymptotic,
    exp_integral_e1,
    exp_integral_e1_scaled,
    integrate_oscillatory,
    lambert_w,
)
from khalfin.errors import ConvergenceError, DomainError, RangeOverflowError


def e1_oracle(z: complex) -> complex:
    """Independent high-precision reference for E1."""
    with mp.workdps(30):
        return complex(mp.e1(mp.mpc(z)))


def e1_series_oracle(z: complex) -> complex:
    """Plain-loop power series, independent of the library internals."""
    s = -0.5772156649015328606 - cmath.log(z)
    u = 1.0 + 0.0j
    for k in range(1, 300):
        u *= -z / k
        s -= u / k
        if abs(u) < 1e-22:
            break
    return s


# a grid that exercises every algorithm region: series (|z| <= 6),
# continued fraction, full asymptotic series, and the mpmath pocket
E1_GRID = [
    0.5 + 0.0j, 2.0 + 1.0j, -1.0 + 2.0j, 0.01 - 0.03j, 5.0 - 4.0j,
    8.0 + 0.0j, 10.0 - 30.0j, 50.0 + 50.0j, 200.0 + 5.0j, 3.0 + 300.0j,
    -10.0 + 20.0j, -30.0 - 45.0j, -8.0 + 2.0j, -20.0 - 3.0j, -100.0 + 80.0j,
]


@pytest.mark.parametrize("z", E1_GRID)
def test_e1_matches_oracle(z):
    if -z.real > 700:
        pytest.skip("plain E1 not representable here")
    got = exp_integral_e1(z)
    ref = e1_oracle(z)
    assert abs(got - ref) <= 1e-12 * max(abs(ref), 1e-300)


@pytest.mark.parametrize("z", [0.3 + 0.2j, 1.0 - 2.0j, 2.0 + 1.5j])
def test_e1_matches_independent_series(z):
    # the plain-loop oracle itself loses ~e^{|z|} eps to cancellation,
    # so keep |z| modest and budget for that in the tolerance
    got = exp_integral_e1(z)
    ref = e1_series_oracle(z)
    assert abs(got - ref) <= 1e-15 * math.exp(abs(z)) + 1e-13 * abs(ref)


@pytest.mark.parametrize("z", E1_GRID)
def test_scaled_e1_defining_identity(z):
    got = exp_integral_e1_scaled(z)
    with mp.workdps(40):
        ref = complex(mp.exp(mp.mpc(z)) * mp.e1(mp.mpc(z)))
    assert abs(got - ref) <= 1e-12 * abs(ref)


def test_scaled_e1_deep_left_plane_no_overflow():
    # e^z alone overflows at Re z = -2000; the scaled form must not
    z = complex(-2000.0, 50.0)
    v = exp_integral_e1_scaled(z)
    assert math.isfinite(v.real) and math.isfinite(v.imag)
    # leading behavior 1/z
    assert abs(v - 1.0 / z) <= 5e-3 * abs(1.0 / z)


def test_e1_overflow_raises():
    with pytest.raises(RangeOverflowError):
        exp_integral_e1(complex(-800.0, 1.0))


@pytest.mark.parametrize("z", [0.0 + 0.0j, -1.0 + 0.0j, -5.0 + 0.0j])
def test_e1_domain_errors(z):
    with pytest.raises(DomainError):
        exp_integral_e1(z)
    with pytest.raises(DomainError):
        exp_integral_e1_scaled(z)


@settings(max_examples=60, deadline=None)
@given(
    r=st.floats(min_value=0.05, max_value=80.0),
    th=st.floats(min_value=-3.0, max_value=3.0),
)
def test_e1_schwarz_reflection(r, th):
    z = cmath.rect(r, th)
    if abs(z.imag) < 1e-3 and z.real < 0:
        return  # too close to the branch cut
    a = exp_integral_e1_scaled(z)
    b = exp_integral_e1_scaled(z.conjugate())
    assert abs(a - b.conjugate()) <= 1e-12 * max(abs(a), 1e-300)


def test_e1_asymptotic_truncation():
    z = 40.0 + 10.0j
    ref = e1_oracle(z)
    errs = [abs(e1_asymptotic(z, n) - ref) for n in (1, 2, 4, 8)]
    assert errs == sorted(errs, reverse=True)
    assert errs[-1] <= 1e-6 * abs(ref)
    with pytest.raises(DomainError):
        e1_asymptotic(z, 0)
    with pytest.raises(DomainError):
        e1_asymptotic(z, 9)
    with pytest.raises(DomainError):
        e1_asymptotic(0.0, 2)


# ---------------------------------------------------------------------------
# Lambert W
# ---------------------------------------------------------------------------

def test_lambert_known_values():
    assert lambert_w(0, 0.0) == 0.0
    assert abs(lambert_w(0, math.e) - 1.0) <= 1e-14
    assert abs(lambert_w(0, -1.0 / math.e) + 1.0) <= 1e-7
    assert abs(lambert_w(-1, -1.0 / math.e) + 1.0) <= 1e-7


@pytest.mark.parametrize("x", [-0.3678, -0.36, -0.2, -0.05, -1e-4, -1e-12,
                               1e-12, 0.1, 1.0, 10.0, 1e4, 1e12])
def test_lambert_branch0_vs_scipy(x):
    w = lambert_w(0, x)
    ref = float(sps.lambertw(x, 0).real)
    assert abs(w - ref) <= 1e-12 * max(1.0, abs(ref))


@pytest.mark.parametrize("x", [-0.3678, -0.36, -0.2, -0.05, -1e-4, -1e-12,
                               -1e-100])
def test_lambert_branch_minus1_vs_scipy(x):
    w = lambert_w(-1, x)
    ref = float(sps.lambertw(x, -1).real)
    assert abs(w - ref) <= 1e-12 * max(1.0, abs(ref))


@settings(max_examples=150, deadline=None)
@given(st.floats(min_value=-math.exp(-1.0) + 1e-12, max_value=1e6))
def test_lambert_branch0_residual(x):
    w = lambert_w(0, x)
    assert abs(w * math.exp(w) - x) <= 1e-13 * max(1.0, abs(x))
    assert w >= -1.0 - 1e-9


@settings(max_examples=150, deadline=None)
@given(st.floats(min_value=-math.exp(-1.0) + 1e-12, max_value=-1e-300))
def test_lambert_branch_minus1_residual(x):
    w = lambert_w(-1, x)
    assert abs(w * math.exp(w) - x) <= 1e-13 * max(1.0, abs(x))
    assert w <= -1.0 + 1e-9


def test_lambert_domain_errors():
    with pytest.raises(DomainError):
        lambert_w(0, -1.0)
    with pytest.raises(DomainError):
        lambert_w(-1, 0.1)
    with pytest.raises(DomainError):
        lambert_w(-1, -1.0)
    with pytest.raises(DomainError):
        lambert_w(1, 0.5)


# ---------------------------------------------------------------------------
# oscillatory quadrature
# ---------------------------------------------------------------------------

def test_oscillatory_exponential_kernel():
    # int_0^inf e^{-u} e^{-iu} du = 1/(1+i)
    v = integrate_oscillatory(lambda u: np.exp(-u), 0.0, 1.0)
    assert abs(v - (0.5 - 0.5j)) <= 1e-12


def test_oscillatory_zero_frequency():
    v = integrate_oscillatory(lambda u: np.exp(-u), 0.0, 0.0)
    assert abs(v - 1.0) <= 1e-10


def _lorentzian_fourier_ref(c: float, f: float) -> complex:
    """High-precision reference for int_0^inf e^{-ifu}/(pi((u-c)^2+1)) du:
    residue of the pole at u = c + i plus the endpoint contribution in
    terms of the scaled exponential integral."""
    with mp.workdps(40):
        z1 = mp.mpc(f, -c * f)
        z2 = mp.mpc(-f, -c * f)
        val = mp.exp(-(1 + 1j * c) * f) + (
            mp.exp(z1) * mp.e1(z1) - mp.exp(z2) * mp.e1(z2)
        ) / (2j * mp.pi)
        return complex(val)


def test_oscillatory_lorentzian_tail():
    f, c = 2.5, 0.5
    ref = _lorentzian_fourier_ref(c, f)
    v = integrate_oscillatory(
        lambda u: 1.0 / (math.pi * ((u - c) ** 2 + 1.0)), 0.0, f, critical=(c,)
    )
    assert abs(v - ref) <= 1e-10


def test_oscillatory_narrow_peak_needs_critical_points():
    # width-1 Lorentzian at u = 100, slow oscillation: half-period
    # segments are ~300 wide and plain Gauss rules can miss the peak
    # entirely, so it must be declared as a critical abscissa.
    f, c = 0.01, 100.0
    ref = _lorentzian_fourier_ref(c, f)
    v = integrate_oscillatory(
        lambda u: 1.0 / (math.pi * ((u - c) ** 2 + 1.0)), 0.0, f, critical=(c,)
    )
    assert abs(v - ref) <= 1e-9


def test_oscillatory_rejects_negative_frequency():
    with pytest.raises(DomainError):
        integrate_oscillatory(lambda u: np.exp(-u), 0.0, -1.0)


def test_oscillatory_budget_exhaustion():
    spec = QuadratureSpec(max_subdivisions=4)
    with pytest.raises(ConvergenceError):
        integrate_oscillatory(
            lambda u: 1.0 / (math.pi * (u ** 2 + 1.0)), 0.0, 10.0, spec
        )


def test_quadrature_spec_validation():
    with pytest.raises(DomainError):
        QuadratureSpec(rel_tol=0.0)
    with pytest.raises(DomainError):
        QuadratureSpec(abs_tol=-1.0)
    with pytest.raises(DomainError):
        QuadratureSpec(max_subdivisions=0)
    with pytest.raises(DomainError):
        QuadratureSpec(tail_truncation_multiplier=2.0)
