"""Crossover time between exponential decay and the power-law tail.

In the dimensionless time s = gamma0 t / hbar the two contributions to
the decay law are comparable where

    e^{-s} = A / s^2,   A = (gamma0^4 / |pole - e_min|^4) / (4 pi^2)
                          = 1 / (4 pi^2 (x^2 + 1/4)^2).

Squaring out, (-s/2) e^{-s/2} = -sqrt(A)/2, so both roots come from the
real Lambert W branches; the physical crossover is the large root
(branch -1).  The classical logarithmic approximation
s ~ 8.28 + 4 ln x + 2 ln(8.28 + 4 ln x) is also provided verbatim for
comparison; for x = 100 it overshoots the exact root by roughly 15%,
which the CLI surfaces explicitly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .density import NormalizedDensity
from .errors import ConvergenceError, DomainError
from .numerics import lambert_w

APPROX_CONSTANT = 8.28
APPROX_VALIDITY_X = 100.0

_INV_E = math.exp(-1.0)


def dominance_coefficient(d: NormalizedDensity) -> float:
    """The constant A of the crossover relation."""
    x = d.params.x
    return 1.0 / (4.0 * math.pi ** 2 * (x * x + 0.25) ** 2)


def crossover_equation_sides(d: NormalizedDensity, s: float):
    """(lhs, rhs) = (e^{-s}, A/s^2) of the crossover relation."""
    if s <= 0:
        raise DomainError("s must be > 0")
    return math.exp(-s), dominance_coefficient(d) / (s * s)


@dataclass(frozen=True)
class CrossoverResult:
    s_exact_small: float | None
    s_exact_large: float
    s_paper_approx: float
    residual: float
    a_coefficient: float

    def t_exact_large(self, d: NormalizedDensity) -> float:
        p = d.params
        return self.s_exact_large * p.hbar / p.gamma0


def paper_approx_crossover(d: NormalizedDensity) -> float:
    """Logarithmic approximation to the crossover, constant 8.28,
    stated for x > 100; a warning is emitted below that."""
    x = d.params.x
    if x <= APPROX_VALIDITY_X:
        warnings.warn(
            f"crossover approximation is quoted for x > {APPROX_VALIDITY_X:g}; "
            f"got x = {x:g}", stacklevel=2,
        )
    inner = APPROX_CONSTANT + 4.0 * math.log(x)
    return inner + 2.0 * math.log(inner)


def _polish_root(s: float, log_a: float) -> float:
    # Newton on f(s) = -s + 2 ln s - ln A  (zero where e^{-s} s^2 = A)
    for _ in range(60):
        f = -s + 2.0 * math.log(s) - log_a
        fp = -1.0 + 2.0 / s
        if fp == 0.0:
            break
        step = f / fp
        s -= step
        if abs(step) < 1e-15 * s:
            break
    return s


def _bisect_root(log_a: float, lo: float, hi: float) -> float:
    # g(s) = -s + 2 ln s - ln A is decreasing for s > 2; bracket the
    # large root between its maximum and a generous upper bound.
    def g(s):
        return -s + 2.0 * math.log(s) - log_a

    if g(lo) < 0 or g(hi) > 0:
        raise ConvergenceError("bisection bracket failed for crossover root")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-14 * hi:
            break
    return 0.5 * (lo + hi)


def solve_crossover(d: NormalizedDensity) -> CrossoverResult:
    """Exact crossover roots via Lambert W, with a bisection fallback."""
    x = d.params.x
    if x < 1.0:
        raise DomainError("crossover solver requires x >= 1")
    a = dominance_coefficient(d)
    arg = -0.5 * math.sqrt(a)
    if arg < -_INV_E:
        raise DomainError("no crossover: the two contributions never separate")
    log_a = math.log(a)
    try:
        s_large = -2.0 * lambert_w(-1, arg)
    except ConvergenceError:
        lo = 0.5 * (-log_a)
        hi = 4.0 * (-log_a) + 100.0
        s_large = _bisect_root(log_a, lo, hi)
    s_large = _polish_root(s_large, log_a)
    s_small = -2.0 * lambert_w(0, arg)

    lhs, rhs = crossover_equation_sides(d, s_large)
    residual = abs(lhs - rhs)
    if residual > 1e-12 * max(lhs, rhs):
        raise ConvergenceError(f"crossover root residual {residual:g} too large")

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        approx = paper_approx_crossover(d)
    return CrossoverResult(
        s_exact_small=s_small,
        s_exact_large=s_large,
        s_paper_approx=approx,
        residual=residual,
        a_coefficient=a,
    )
