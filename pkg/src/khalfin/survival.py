"""Survival amplitude a(t) and decay law P(t) = |a(t)|^2 by three
mutually checking routes: closed form in terms of the exponential
integral, direct oscillatory quadrature of the Fourier integral, and
the long-time asymptotic series.

The closed form is evaluated entirely through the scaled exponential
integral so that no intermediate overflows even deep in the
exponential era (gamma0 t / hbar up to ~1e5):

    a(t) = N e^{-i e0 t/hbar - v}
         + (i N / 2 pi) e^{-i e_min t/hbar} [E1s(z2) - E1s(z1)],

with v = gamma0 t / (2 hbar), u = (e0 - e_min) t / hbar,
z1 = v - i u, z2 = -v - i u and E1s(z) = e^z E1(z).
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .density import NormalizedDensity
from .errors import DomainError
from .numerics import (
    QuadratureSpec,
    _integrate_oscillatory,
    exp_integral_e1_scaled,
)

TWO_PI = 2.0 * math.pi


class Route(enum.Enum):
    CLOSED_FORM = "closed_form"
    QUADRATURE = "quadrature"
    ASYMPTOTIC = "asymptotic"


@dataclass(frozen=True)
class AmplitudeSample:
    """One evaluation of the survival amplitude."""

    t: float
    value: complex
    route: Route
    est_error: float

    @property
    def p(self) -> float:
        """Survival probability |a(t)|^2."""
        return abs(self.value) ** 2


def _phase_args(d: NormalizedDensity, t: float):
    p = d.params
    u = (p.e0 - p.e_min) * t / p.hbar
    v = 0.5 * p.gamma0 * t / p.hbar
    return u, v


def amplitude_closed_form(d: NormalizedDensity, t: float) -> AmplitudeSample:
    """Closed-form survival amplitude; overflow-safe for all t >= 0."""
    if t < 0:
        raise DomainError("t must be >= 0")
    if t == 0.0:
        return AmplitudeSample(0.0, 1.0 + 0.0j, Route.CLOSED_FORM, 0.0)
    p = d.params
    u, v = _phase_args(d, t)
    if max(u, v) < 1e-250:
        # a(t) = 1 - O(t ln t); below this scale the phase arguments
        # degenerate in double precision, so join the exact t = 0 value
        return AmplitudeSample(t, 1.0 + 0.0j, Route.CLOSED_FORM, 1e-240)
    z1 = complex(v, -u)
    z2 = complex(-v, -u)
    bracket = exp_integral_e1_scaled(z2) - exp_integral_e1_scaled(z1)
    pole = d.norm_n * cmath.exp(complex(-v, -p.e0 * t / p.hbar))
    tail = (1j * d.norm_n / TWO_PI) * cmath.exp(-1j * p.e_min * t / p.hbar) * bracket
    est = 5e-14 * (1.0 + 2.0 * v)
    return AmplitudeSample(t, pole + tail, Route.CLOSED_FORM, est)


def amplitude_quadrature(d: NormalizedDensity, t: float,
                         spec: QuadratureSpec | None = None) -> AmplitudeSample:
    """Direct Fourier integral of the density; the independent cross-check
    for the closed form (slow, intended for tests and spot checks)."""
    if t < 0:
        raise DomainError("t must be >= 0")
    if spec is None:
        spec = QuadratureSpec()
    p = d.params
    value, err = _integrate_oscillatory(
        d.density_at, p.e_min, t / p.hbar, spec, critical=(p.e0,)
    )
    return AmplitudeSample(t, value, Route.QUADRATURE, err)


def _power_series_terms(d: NormalizedDensity, t: float, order: int):
    """Terms of the 1/t background: (i N / 2 pi) e^{-i e_min t/hbar}
    sum_{k>=0} (-1)^k k! (z2^{-(k+1)} - z1^{-(k+1)})."""
    u, v = _phase_args(d, t)
    z1 = complex(v, -u)
    z2 = complex(-v, -u)
    pref = (1j * d.norm_n / TWO_PI) * cmath.exp(-1j * d.params.e_min * t / d.params.hbar)
    terms = []
    fact = 1.0
    for k in range(order + 1):
        if k > 0:
            fact *= k
        sign = -fact if (k % 2) else fact
        terms.append(pref * sign * (z2 ** -(k + 1) - z1 ** -(k + 1)))
    return terms


def amplitude_asymptotic(d: NormalizedDensity, t: float,
                         order: int = 2) -> AmplitudeSample:
    """Pole term plus the first `order` inverse-power background terms.

    est_error is the magnitude of the first omitted power term.
    """
    if t <= 0:
        raise DomainError("t must be > 0")
    if order not in (1, 2):
        raise DomainError("order must be 1 or 2")
    p = d.params
    _, v = _phase_args(d, t)
    pole = d.norm_n * cmath.exp(complex(-v, -p.e0 * t / p.hbar))
    terms = _power_series_terms(d, t, order)
    value = pole + sum(terms[:order])
    return AmplitudeSample(t, value, Route.ASYMPTOTIC, abs(terms[order]))


def delta_amplitude(d: NormalizedDensity, t: float) -> complex:
    """Correction term coupling the amplitude to its time derivative:
    i hbar da/dt = (e0 - i gamma0/2) a(t) + delta_a(t).

    Logarithmically singular at t = 0 (the model has divergent mean
    energy), hence t > 0 is required.
    """
    if t <= 0:
        raise DomainError("t must be > 0")
    p = d.params
    u, v = _phase_args(d, t)
    z1 = complex(v, -u)
    return (
        d.norm_n * p.gamma0 / TWO_PI
        * cmath.exp(-1j * p.e_min * t / p.hbar)
        * exp_integral_e1_scaled(z1)
    )


def decay_law(d: NormalizedDensity, t: float) -> float:
    """Survival probability P(t) = |a(t)|^2 via the closed form."""
    return amplitude_closed_form(d, t).p


def power_tail_coefficient(d: NormalizedDensity) -> float:
    """Magnitude of the leading 1/t coefficient of |a(t)| at long times:
    (N / 2 pi) gamma0 hbar / |pole - e_min|^2."""
    p = d.params
    return d.norm_n * p.gamma0 * p.hbar / (TWO_PI * p.pole_offset_sq)
