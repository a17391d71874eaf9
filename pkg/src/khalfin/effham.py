"""Time-dependent effective Hamiltonian of the surviving state.

h(t) = i hbar (da/dt)/a(t); its real part is the instantaneous energy
E(t), its imaginary part encodes the instantaneous decay rate
gamma(t) = -2 Im h(t).  For the truncated Breit-Wigner model
h(t) = pole + delta_a(t)/a(t) exactly, with the known long-time limit
E(t) -> e_min and gamma(t) -> 0.

Also implements the generalized late-time model: any amplitude of the
form e^{-i e_min t/hbar} sum_k c_k / t^{lambda+k} has an effective
Hamiltonian that is rational in 1/t and tends to e_min.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .density import NormalizedDensity
from .errors import AmplitudeUnderflowError, DomainError, FitError
from .survival import (
    AmplitudeSample,
    amplitude_closed_form,
    delta_amplitude,
    power_tail_coefficient,
)

_EPS = np.finfo(float).eps


class HamiltonianRoute(enum.Enum):
    EXACT_RATIO = "exact_ratio"
    FINITE_DIFFERENCE = "finite_difference"
    ASYMPTOTIC = "asymptotic"


@dataclass(frozen=True)
class HamiltonianSample:
    t: float
    h: complex
    energy: float
    rate: float
    route: HamiltonianRoute
    ill_conditioned: bool = False

    @classmethod
    def from_h(cls, t, h, route, ill_conditioned=False):
        return cls(t=t, h=h, energy=h.real, rate=-2.0 * h.imag,
                   route=route, ill_conditioned=ill_conditioned)


def _conditioning(d: NormalizedDensity, t: float, a_abs: float) -> bool:
    """Interference between the pole and power-law terms can drive a(t)
    through near-zeros around the crossover time, where h(t) spikes.
    Flag samples where |a| sits far below its two-term envelope."""
    p = d.params
    v = 0.5 * p.gamma0 * t / p.hbar
    envelope = d.norm_n * math.exp(-min(v, 745.0)) + power_tail_coefficient(d) / t
    return a_abs < 2e-2 * envelope


def effective_hamiltonian(d: NormalizedDensity, t: float) -> HamiltonianSample:
    """Exact-ratio route: h(t) = pole + delta_a(t)/a(t)."""
    if t <= 0:
        raise DomainError("t must be > 0 (energy diverges as t -> 0+)")
    a = amplitude_closed_form(d, t).value
    a_abs = abs(a)
    if a_abs < 1e-250:
        raise AmplitudeUnderflowError(f"|a({t})| ~ {a_abs:g}: amplitude vanished")
    h = d.params.pole + delta_amplitude(d, t) / a
    return HamiltonianSample.from_h(
        t, h, HamiltonianRoute.EXACT_RATIO, _conditioning(d, t, a_abs)
    )


def effective_hamiltonian_fd(d: NormalizedDensity, t: float) -> HamiltonianSample:
    """Finite-difference route: Richardson-extrapolated central difference
    of the closed-form amplitude, divided by a(t)."""
    p = d.params
    step = _EPS ** (1.0 / 3.0) * max(t, p.lifetime)
    if t <= 2.0 * step:
        raise DomainError("t too small for the finite-difference stencil")
    a = amplitude_closed_form(d, t).value
    a_abs = abs(a)
    if a_abs < 1e-250:
        raise AmplitudeUnderflowError(f"|a({t})| ~ {a_abs:g}: amplitude vanished")

    def central(hh):
        ap = amplitude_closed_form(d, t + hh).value
        am = amplitude_closed_form(d, t - hh).value
        return (ap - am) / (2.0 * hh)

    d1 = central(step)
    d2 = central(0.5 * step)
    deriv = (4.0 * d2 - d1) / 3.0
    h = 1j * p.hbar * deriv / a
    return HamiltonianSample.from_h(
        t, h, HamiltonianRoute.FINITE_DIFFERENCE, _conditioning(d, t, a_abs)
    )


def hamiltonian_asymptotic(d: NormalizedDensity, t: float) -> HamiltonianSample:
    """Three-term long-time form:
    h(t) ~ e_min - i hbar/t - 2 (e0 - e_min) (hbar/t)^2 / |pole - e_min|^2."""
    if t <= 0:
        raise DomainError("t must be > 0")
    p = d.params
    ht = p.hbar / t
    h = complex(
        p.e_min - 2.0 * (p.e0 - p.e_min) * ht * ht / p.pole_offset_sq,
        -ht,
    )
    return HamiltonianSample.from_h(t, h, HamiltonianRoute.ASYMPTOTIC)


# ---------------------------------------------------------------------------
# generalized inverse-power late-time model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PowerLawModel:
    """Late-time amplitude e^{-i e_min t/hbar} sum_k c_k / t^{lambda+k}."""

    e_min: float
    lam: float
    coefficients: tuple
    hbar: float = 1.0

    def __post_init__(self):
        if not self.lam > 0:
            raise DomainError("lambda must be > 0")
        if len(self.coefficients) == 0 or self.coefficients[0] == 0:
            raise DomainError("leading coefficient c_0 must be nonzero")

    def amplitude(self, t: float) -> complex:
        """The model amplitude itself (valid only asymptotically)."""
        s = sum(c * t ** (-float(k)) for k, c in enumerate(self.coefficients))
        return np.exp(-1j * self.e_min * t / self.hbar) * s * t ** (-self.lam)


def powerlaw_hamiltonian(m: PowerLawModel, t: float) -> HamiltonianSample:
    """Exact effective Hamiltonian of the inverse-power amplitude:

    h(t) = e_min + (i hbar / t) * (-sum (lam+k) c_k t^-k) / (sum c_k t^-k)

    The common t^-lam factor cancels, so this stays well-scaled for any
    lam and large t.
    """
    if t <= 0:
        raise DomainError("t must be > 0")
    num = 0.0 + 0.0j
    den = 0.0 + 0.0j
    for k, c in enumerate(m.coefficients):
        tk = t ** (-float(k))
        num += -(m.lam + k) * c * tk
        den += c * tk
    if abs(den) < 1e-280:
        raise AmplitudeUnderflowError("power series denominator vanished")
    h = m.e_min + 1j * m.hbar * num / (den * t)
    return HamiltonianSample.from_h(t, h, HamiltonianRoute.EXACT_RATIO)


@dataclass(frozen=True)
class TailFit:
    model: PowerLawModel
    rms_residual: float
    residuals: tuple


def fit_powerlaw_tail(samples: Sequence[AmplitudeSample], e_min: float,
                      hbar: float = 1.0) -> TailFit:
    """Least-squares fit of |a(t)| ~ |c0| / t^lam over a late-time sample set.

    Requires at least 8 samples spanning at least one decade in t.
    """
    if len(samples) < 8:
        raise FitError("need at least 8 tail samples")
    ts = np.array([s.t for s in samples], dtype=float)
    mags = np.array([abs(s.value) for s in samples], dtype=float)
    if np.any(ts <= 0) or np.any(mags <= 0):
        raise FitError("tail samples must have t > 0 and nonzero amplitude")
    if ts.max() / ts.min() < 10.0:
        raise FitError("tail samples must span at least one decade in t")
    lt = np.log(ts)
    lm = np.log(mags)
    slope, intercept = np.polyfit(lt, lm, 1)
    lam = -float(slope)
    if lam <= 0:
        raise FitError("fitted exponent is not positive: not a decaying tail")
    c0 = math.exp(float(intercept))
    resid = lm - (slope * lt + intercept)
    model = PowerLawModel(e_min=e_min, lam=lam, coefficients=(complex(c0),),
                          hbar=hbar)
    return TailFit(model=model, rms_residual=float(np.sqrt(np.mean(resid ** 2))),
                   residuals=tuple(float(r) for r in resid))
