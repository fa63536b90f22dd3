"""Ball and annulus integrals: exactness, agreement, determinism."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from blowup.exact_field import eval_at
from blowup.local_model import LocalHamiltonian, LocalModelParams
from blowup.quadrature import (
    IntegralResult,
    integrate_ball,
    verify_annulus_pushforward,
    verify_normalized_lemma,
)
from blowup.weinstein import CircleLoopSpec, ManifoldSpec, ball_integral_closed_form


def lebesgue_ball_volume(n, radius):
    return math.pi ** n * radius ** (2 * n) / math.factorial(n)


# ------------------------------------------------------------ integrate_ball


def test_constant_hamiltonian_ball_volume():
    h = LocalHamiltonian(weights=(0, 0), c=1.0)
    result = integrate_ball(h, 0.5, 2)
    assert result.value == pytest.approx(lebesgue_ball_volume(2, 0.5), rel=1e-12)
    assert result.scheme == "product-gauss"


def test_weighted_ball_integral_closed_value():
    # -pi(|z1|^2 + 2|z2|^2) over the 0.5-ball in C^2: -pi^3/128
    h = LocalHamiltonian(weights=(1, 2))
    result = integrate_ball(h, 0.5, 2)
    assert result.value == pytest.approx(-math.pi ** 3 / 128, rel=1e-9)
    assert result.error_estimate <= 1e-9


def test_weighted_ball_integral_monte_carlo():
    h = LocalHamiltonian(weights=(1, 2))
    result = integrate_ball(h, 0.5, 2, scheme="monte-carlo")
    exact = -math.pi ** 3 / 128
    assert result.error_estimate > 0
    assert abs(result.value - exact) <= 3 * result.error_estimate
    assert result.samples_or_order == 200_000


def test_zero_hamiltonian_both_schemes():
    h = LocalHamiltonian(weights=(0, 0, 0))
    gauss = integrate_ball(h, 0.7, 3)
    mc = integrate_ball(h, 0.7, 3, scheme="monte-carlo", samples=20_000)
    assert gauss.value == 0.0
    assert gauss.error_estimate == 0.0
    assert mc.value == 0.0
    assert mc.error_estimate == 0.0


@pytest.mark.parametrize("n,weights", [(2, (1, 2)), (3, (1, 2, 3))])
@pytest.mark.parametrize("rho", [0.3, 0.5])
def test_matches_closed_form_without_constant(n, weights, rho):
    loop = CircleLoopSpec(weights=weights, C=Fraction(0))
    manifold = ManifoldSpec(n=n, V=Fraction(10), a=Fraction(1))
    symbolic = ball_integral_closed_form(loop, manifold)
    expected = eval_at(symbolic, math.pi * rho * rho)
    h = LocalHamiltonian(weights=weights)
    result = integrate_ball(h, rho, n)
    assert result.value == pytest.approx(expected, rel=1e-5)


def test_constant_term_is_volume_normalized():
    # quadrature weighs the constant by the Lebesgue ball volume, which is
    # the symbolic tau^n coefficient divided by n!
    weights, c, rho, n = (1, 2), 5.0, 0.3, 2
    loop = CircleLoopSpec(weights=weights, C=Fraction(0))
    manifold = ManifoldSpec(n=n, V=Fraction(10), a=Fraction(1))
    quadratic_part = eval_at(ball_integral_closed_form(loop, manifold),
                             math.pi * rho * rho)
    expected = quadratic_part + c * lebesgue_ball_volume(n, rho)
    result = integrate_ball(LocalHamiltonian(weights=weights, c=c), rho, n)
    assert result.value == pytest.approx(expected, rel=1e-12)


def test_linearity():
    h1 = LocalHamiltonian(weights=(1, 2), c=0.25)
    h2 = LocalHamiltonian(weights=(3, 1), c=-1.0)
    combo = LocalHamiltonian(weights=(11, 7), c=-2.5)  # 2*h1 + 3*h2
    i1 = integrate_ball(h1, 0.4, 2).value
    i2 = integrate_ball(h2, 0.4, 2).value
    i3 = integrate_ball(combo, 0.4, 2).value
    assert i3 == pytest.approx(2 * i1 + 3 * i2, rel=1e-12)


def test_monte_carlo_deterministic():
    h = LocalHamiltonian(weights=(2, 1), c=0.5)
    first = integrate_ball(h, 0.5, 2, scheme="monte-carlo", samples=30_000)
    second = integrate_ball(h, 0.5, 2, scheme="monte-carlo", samples=30_000)
    assert first.value == second.value
    assert first.error_estimate == second.error_estimate
    shifted = integrate_ball(h, 0.5, 2, scheme="monte-carlo", samples=30_000,
                             seed=1234)
    assert shifted.value != first.value


def test_monte_carlo_agrees_with_gauss():
    h = LocalHamiltonian(weights=(1, 2), c=0.3)
    gauss = integrate_ball(h, 0.5, 2)
    mc = integrate_ball(h, 0.5, 2, scheme="monte-carlo")
    assert abs(mc.value - gauss.value) <= 3 * (mc.error_estimate
                                               + gauss.error_estimate)


def test_too_few_effective_samples():
    h = LocalHamiltonian(weights=(1,) * 6)
    with pytest.raises(ValueError, match="fewer than 10 effective samples"):
        integrate_ball(h, 0.5, 6, scheme="monte-carlo", samples=2000)


def test_argument_validation():
    h = LocalHamiltonian(weights=(1, 2))
    with pytest.raises(ValueError, match="radius"):
        integrate_ball(h, 0.0, 2)
    with pytest.raises(ValueError, match="weight count"):
        integrate_ball(h, 0.5, 3)
    with pytest.raises(ValueError, match="scheme"):
        integrate_ball(h, 0.5, 2, scheme="simpson")
    with pytest.raises(ValueError, match="nonnegative"):
        IntegralResult(1.0, -0.5, "product-gauss", 32)


# --------------------------------------------------------- annulus pushforward


def test_annulus_constant_hamiltonian():
    params = LocalModelParams(n=2, rho=0.3, delta=0.2, r=1.0)
    h = LocalHamiltonian(weights=(0, 0), c=1.0)
    left, right, deviation, skipped = verify_annulus_pushforward(h, params)
    expected = math.pi ** 2 * (1 - 0.3 ** 4) / 2
    assert right.value == pytest.approx(expected, rel=1e-10)
    assert left.value == pytest.approx(expected, rel=1e-6)
    assert deviation <= 1e-4
    assert skipped == 0


def test_annulus_weighted_hamiltonian():
    params = LocalModelParams(n=2, rho=0.3, delta=0.2, r=1.0)
    h = LocalHamiltonian(weights=(1, 0))
    left, right, deviation, _ = verify_annulus_pushforward(h, params)
    expected = -math.pi ** 3 * (1 - 0.3 ** 6) / 6
    assert right.value == pytest.approx(expected, rel=1e-10)
    assert deviation <= 1e-4


def test_annulus_zero_hamiltonian():
    params = LocalModelParams(n=2, rho=0.3, delta=0.2, r=1.0)
    h = LocalHamiltonian(weights=(0, 0))
    left, right, deviation, _ = verify_annulus_pushforward(h, params)
    assert left.value == 0.0
    assert right.value == 0.0
    assert deviation == 0.0


def test_annulus_monte_carlo_scheme():
    params = LocalModelParams(n=2, rho=0.3, delta=0.2, r=1.0)
    h = LocalHamiltonian(weights=(0, 0), c=1.0)
    left, right, _, _ = verify_annulus_pushforward(h, params,
                                                   scheme="monte-carlo",
                                                   samples=50_000)
    assert abs(left.value - right.value) <= 3 * (left.error_estimate
                                                 + right.error_estimate)
    gauss_value = math.pi ** 2 * (1 - 0.3 ** 4) / 2
    assert abs(right.value - gauss_value) <= 3 * right.error_estimate


def test_annulus_bad_scheme():
    params = LocalModelParams(n=2, rho=0.3, delta=0.2, r=1.0)
    with pytest.raises(ValueError, match="scheme"):
        verify_annulus_pushforward(LocalHamiltonian(weights=(0, 0)), params,
                                   scheme="trapezoid")


# ------------------------------------------------------------ lemma identity


def test_normalized_lemma_weighted():
    params = LocalModelParams(n=2, rho=0.4, delta=0.2, r=1.0)
    h = LocalHamiltonian(weights=(1, 2))
    result = verify_normalized_lemma(h, params)
    assert result.max_deviation <= 1e-4
    assert result.passed


def test_normalized_lemma_volume_pattern():
    params = LocalModelParams(n=2, rho=0.4, delta=0.2, r=1.0)
    h = LocalHamiltonian(weights=(0, 0), c=1.0)
    result = verify_normalized_lemma(h, params)
    assert result.max_deviation <= 1e-4


def test_normalized_lemma_zero():
    params = LocalModelParams(n=2, rho=0.4, delta=0.2, r=1.0)
    result = verify_normalized_lemma(LocalHamiltonian(weights=(0, 0)), params)
    assert result.max_deviation == 0.0


def test_normalized_lemma_ignores_volume_proxy():
    params = LocalModelParams(n=2, rho=0.4, delta=0.2, r=1.0)
    h = LocalHamiltonian(weights=(2, 1), c=0.5)
    bare = verify_normalized_lemma(h, params)
    with_proxy = verify_normalized_lemma(h, params, V_proxy=3.7)
    assert bare.max_deviation == with_proxy.max_deviation


def test_normalized_lemma_requires_gauss():
    params = LocalModelParams(n=2, rho=0.4, delta=0.2, r=1.0)
    with pytest.raises(ValueError, match="product-gauss"):
        verify_normalized_lemma(LocalHamiltonian(weights=(0, 0)), params,
                                scheme="monte-carlo")
