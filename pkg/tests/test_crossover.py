import math

import pytest

from khalfin import make_density, paper_approx_crossover, solve_crossover
from khalfin.crossover import (
    _bisect_root,
    crossover_equation_sides,
    dominance_coefficient,
)
from khalfin.errors import DomainError


def test_dominance_coefficient(d100):
    a = dominance_coefficient(d100)
    assert abs(a - 1.0 / (4.0 * math.pi ** 2 * (100.0 ** 2 + 0.25) ** 2)) \
        <= 1e-25


def test_exact_root_x100(d100):
    res = solve_crossover(d100)
    assert abs(res.s_exact_large - 28.81852144874001) <= 1e-10
    assert res.residual <= 1e-12 * dominance_coefficient(d100)
    lhs, rhs = crossover_equation_sides(d100, res.s_exact_large)
    assert abs(lhs - rhs) <= 1e-12 * max(lhs, rhs)


def test_small_root_below_large_root(d100):
    res = solve_crossover(d100)
    assert res.s_exact_small is not None
    assert 0.0 < res.s_exact_small < res.s_exact_large
    lhs, rhs = crossover_equation_sides(d100, res.s_exact_small)
    assert abs(lhs - rhs) <= 1e-10 * max(lhs, rhs)


def test_approx_overshoots_exact(d100):
    res = solve_crossover(d100)
    assert abs(res.s_paper_approx - 33.2700588661711) <= 1e-10
    # known systematic gap at moderate x: ~15% high
    gap = (res.s_paper_approx - res.s_exact_large) / res.s_exact_large
    assert 0.10 < gap < 0.20


def test_approx_warns_at_low_x():
    d = make_density(0.0, 10.0, 1.0)
    with pytest.warns(UserWarning):
        paper_approx_crossover(d)


def test_root_grows_with_x():
    roots = [solve_crossover(make_density(0.0, x, 1.0)).s_exact_large
             for x in (1.0, 10.0, 100.0, 1e4, 1e6)]
    assert all(a < b for a, b in zip(roots, roots[1:]))


def test_t_exact_large_scaling():
    d = make_density(0.0, 200.0, 2.0, hbar=0.5)
    res = solve_crossover(d)
    assert abs(res.t_exact_large(d) - res.s_exact_large * 0.5 / 2.0) <= 1e-12


def test_bisection_agrees_with_lambert(d100):
    a = dominance_coefficient(d100)
    log_a = math.log(a)
    s_bis = _bisect_root(log_a, 0.5 * (-log_a), 4.0 * (-log_a) + 100.0)
    s_ref = solve_crossover(d100).s_exact_large
    assert abs(s_bis - s_ref) <= 1e-9 * s_ref


def test_requires_x_at_least_one():
    with pytest.raises(DomainError):
        solve_crossover(make_density(0.0, 0.5, 1.0))


def test_equation_sides_domain(d100):
    with pytest.raises(DomainError):
        crossover_equation_sides(d100, 0.0)
