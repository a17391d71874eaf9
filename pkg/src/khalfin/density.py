"""Spectral energy density of the model: a Breit-Wigner (Lorentzian)
line truncated below a threshold energy, with exact normalization.

The density abstraction (support threshold / evaluate / normalization)
is kept minimal so that other below-bounded densities can be plugged in;
only the truncated Breit-Wigner ships.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class ResonanceParams:
    """One unstable state: threshold energy, resonance position, width.

    All energies share one (arbitrary) unit; hbar sets the time unit.
    """

    e_min: float
    e0: float
    gamma0: float
    hbar: float = 1.0

    def __post_init__(self):
        if not self.gamma0 > 0:
            raise DomainError("gamma0 must be > 0")
        if not self.hbar > 0:
            raise DomainError("hbar must be > 0")
        if not self.e0 > self.e_min:
            raise DomainError("e0 must exceed e_min (asymptotics divide by e0 - e_min)")

    @property
    def lifetime(self) -> float:
        """Exponential-era time constant hbar/gamma0."""
        return self.hbar / self.gamma0

    @property
    def x(self) -> float:
        """Peak offset in units of the width, (e0 - e_min)/gamma0."""
        return (self.e0 - self.e_min) / self.gamma0

    @property
    def pole(self) -> complex:
        """Complex pole parameter e0 - i gamma0/2 of the exponential era."""
        return complex(self.e0, -0.5 * self.gamma0)

    @property
    def pole_offset_sq(self) -> float:
        """|pole - e_min|^2 = (e0 - e_min)^2 + (gamma0/2)^2."""
        d = self.e0 - self.e_min
        return d * d + 0.25 * self.gamma0 * self.gamma0


def _norm_from_ratio(x: float) -> float:
    """Normalization constant as a function of x = (e0 - e_min)/gamma0.

    1/N is the mass the truncated Lorentzian retains:
    1/N = 1/2 + arctan(2x)/pi.  x = 0 is allowed here (N = 2) for
    oracle checks even though ResonanceParams rejects it.
    """
    if x < 0:
        raise DomainError("x must be >= 0")
    return 1.0 / (0.5 + math.atan(2.0 * x) / math.pi)


def normalization_constant(params: ResonanceParams) -> float:
    """Constant N making the truncated line integrate to one."""
    return _norm_from_ratio(params.x)


@dataclass(frozen=True)
class NormalizedDensity:
    """Truncated Breit-Wigner density with its normalization fixed."""

    params: ResonanceParams
    norm_n: float

    @classmethod
    def from_params(cls, params: ResonanceParams) -> "NormalizedDensity":
        return cls(params=params, norm_n=normalization_constant(params))

    @property
    def support_min(self) -> float:
        return self.params.e_min

    def density_at(self, e):
        """omega(E): zero below threshold, Lorentzian above it.

        Accepts scalars or numpy arrays.
        """
        import numpy as np

        p = self.params
        lor = (self.norm_n / (2.0 * math.pi)) * p.gamma0 / (
            (e - p.e0) ** 2 + (0.5 * p.gamma0) ** 2
        )
        return np.where(np.asarray(e) >= p.e_min, lor, 0.0) if np.ndim(e) else (
            lor if e >= p.e_min else 0.0
        )

    def __call__(self, e):
        return self.density_at(e)


def make_density(e_min: float, e0: float, gamma0: float,
                 hbar: float = 1.0) -> NormalizedDensity:
    """Convenience constructor used throughout the tests and the CLI."""
    return NormalizedDensity.from_params(
        ResonanceParams(e_min=e_min, e0=e0, gamma0=gamma0, hbar=hbar)
    )
