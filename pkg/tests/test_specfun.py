import math

import pytest

from rdrisk.errors import DomainError
from rdrisk.specfun import (EULER_GAMMA, cp_constant, digamma, harmonic,
                            log_beta_multivariate, log_gamma, validate_loss_order)


def test_log_gamma_known_values():
    assert log_gamma(1.0) == pytest.approx(0.0, abs=1e-14)
    assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-13)
    assert log_gamma(5.0) == pytest.approx(math.log(24.0), rel=1e-13)


@pytest.mark.parametrize("x", [1e-3, 0.1, 0.5, 1.0, 3.7, 100.0, 1e6])
def test_log_gamma_recurrence(x):
    assert log_gamma(x + 1.0) == pytest.approx(log_gamma(x) + math.log(x), abs=1e-12, rel=1e-12)


def test_log_gamma_domain():
    with pytest.raises(DomainError):
        log_gamma(0.0)
    with pytest.raises(DomainError):
        log_gamma(-2.5)


def test_digamma_known_values():
    assert digamma(1.0) == pytest.approx(-EULER_GAMMA, abs=1e-12)
    assert digamma(2.0) == pytest.approx(1.0 - EULER_GAMMA, abs=1e-12)
    assert digamma(0.5) == pytest.approx(-EULER_GAMMA - 2.0 * math.log(2.0), abs=1e-12)


@pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 3.7, 100.0])
def test_digamma_recurrence(x):
    assert abs(digamma(x + 1.0) - digamma(x) - 1.0 / x) <= 1e-12


def test_digamma_domain():
    with pytest.raises(DomainError):
        digamma(-1.0)


def test_log_beta_multivariate_values():
    assert log_beta_multivariate((1.0, 1.0)) == pytest.approx(0.0, abs=1e-14)
    assert log_beta_multivariate((2.0, 2.0)) == pytest.approx(math.log(1.0 / 6.0), rel=1e-13)
    assert log_beta_multivariate((1.0, 1.0, 1.0)) == pytest.approx(-math.log(2.0), rel=1e-13)


def test_log_beta_multivariate_domain():
    with pytest.raises(DomainError):
        log_beta_multivariate(())
    with pytest.raises(DomainError):
        log_beta_multivariate((1.0,))
    with pytest.raises(DomainError):
        log_beta_multivariate((1.0, 0.0))


def test_harmonic_values():
    assert harmonic(0) == 0.0
    assert harmonic(1) == 1.0
    assert harmonic(2) == 1.5
    assert harmonic(5) == pytest.approx(137.0 / 60.0, rel=1e-15)


def test_harmonic_asymptote():
    n = 10 ** 6
    gap = harmonic(n) - (math.log(n) + EULER_GAMMA)
    assert abs(gap) < 1e-6 + 1.0 / (2 * n)


def test_harmonic_domain():
    with pytest.raises(DomainError):
        harmonic(-1)


def test_cp_constant_values():
    assert cp_constant(1.0, 2) == pytest.approx(math.log(2.0 * math.e), rel=1e-13)
    assert cp_constant(2.0, 2) == pytest.approx(0.5 * math.log(2.0 * math.pi * math.e), rel=1e-13)
    assert cp_constant(math.inf, 2) == math.log(2.0)
    assert cp_constant(math.inf, 17) == math.log(2.0)


def test_cp_constant_large_p_limit():
    assert abs(cp_constant(1e6, 2) - math.log(2.0)) < 1e-4
    assert abs(cp_constant(1e6, 5) - math.log(2.0)) < 1e-4


def test_cp_constant_domain():
    with pytest.raises(DomainError):
        cp_constant(0.5, 2)
    with pytest.raises(DomainError):
        cp_constant(1.0, 1)


def test_validate_loss_order():
    assert validate_loss_order(1) == 1.0
    assert math.isinf(validate_loss_order(math.inf))
    with pytest.raises(DomainError):
        validate_loss_order(0.99)
