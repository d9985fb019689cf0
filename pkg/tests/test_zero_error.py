import math

import numpy as np
import pytest

from rdrisk.errors import ContradictionError, DomainError
from rdrisk.mc import rng_stream
from rdrisk.specfun import EULER_GAMMA, harmonic
from rdrisk.zero_error import (ZeroErrorSample, estimator_risk_exact,
                               estimator_risk_rederived, interval, label,
                               mi_monte_carlo, midpoint_estimator,
                               mutual_information_exact, rd_lower,
                               rd_lower_rederived, risk_lower_l1,
                               sample_complexity, simulate_estimator_risk)


def test_label_convention():
    assert label(0.7, 0.3) == 1
    assert label(0.1, 0.3) == -1
    assert label(0.3, 0.3) == 1  # tie goes to +1
    with pytest.raises(DomainError):
        label(1.5, 0.3)


def test_interval():
    assert interval([]) == (0.0, 1.0)
    got = interval([ZeroErrorSample(0.2, -1), ZeroErrorSample(0.9, 1),
                    ZeroErrorSample(0.6, 1)])
    assert got == (0.2, 0.6)
    with pytest.raises(ContradictionError):
        interval([ZeroErrorSample(0.5, 1), ZeroErrorSample(0.7, -1)])
    with pytest.raises(DomainError):
        interval([ZeroErrorSample(0.5, 0)])


def test_mutual_information_exact_values():
    assert mutual_information_exact(0) == 0.0
    assert mutual_information_exact(1) == pytest.approx(0.5, rel=1e-15)
    assert mutual_information_exact(10) == pytest.approx(
        2.01987734487734487734487734488, rel=1e-13)


def test_mutual_information_asymptote():
    n = 10 ** 6
    gap = mutual_information_exact(n) - math.log(n) - (EULER_GAMMA - 1.0)
    assert abs(gap) < 1e-5


def test_mi_monte_carlo_matches_exact():
    for n in (1, 10):
        est = mi_monte_carlo(n, trials=200_000, seed=701)
        assert abs(est.mean - mutual_information_exact(n)) < 3 * est.stderr
    with pytest.raises(DomainError):
        mi_monte_carlo(1, trials=10, seed=0)


def test_mi_monte_carlo_stderr_scales():
    small = mi_monte_carlo(5, trials=10_000, seed=702)
    large = mi_monte_carlo(5, trials=160_000, seed=702)
    assert large.stderr == pytest.approx(small.stderr / 4.0, rel=0.15)


def test_rd_lower_values():
    assert rd_lower(1.0 / (2.0 * math.e), 1.0) == pytest.approx(0.0, abs=1e-12)
    assert rd_lower(0.01, 1.0) == pytest.approx(2.91202300542814605861875078791, rel=1e-13)
    assert rd_lower(1.0, 1.0) == 0.0
    assert rd_lower(2.0, 1.0) == 0.0
    with pytest.raises(DomainError):
        rd_lower(0.0, 1.0)
    with pytest.raises(DomainError):
        rd_lower(0.1, math.inf)


def test_rd_lower_rederived_offset():
    # the entropy-maximizing route adds exactly (1/p) ln 2 pre-clamp
    for p in (1.0, 2.0, 4.0):
        for dist in (0.001, 0.01):
            assert rd_lower_rederived(dist, p) - rd_lower(dist, p) == pytest.approx(
                math.log(2.0) / p, abs=1e-12)


def test_chain_discrepancy_logged():
    # displayed chain: mi >= -ln(2 e L1); inline chain drops the ln 2.
    # Both n-thresholds are reproduced; the displayed one is primary.
    l1 = 0.01
    displayed = math.exp(-EULER_GAMMA) / (2.0 * l1) - 1.0
    inline = math.exp(-EULER_GAMMA) / l1 - 1.0
    got = sample_complexity(l1).n_necessary
    assert got == pytest.approx(displayed, rel=1e-12)
    print(f"n_necessary displayed={displayed:.6f} inline-variant={inline:.6f}")


def test_midpoint_estimator():
    assert midpoint_estimator([]) == 0.5
    samples = [ZeroErrorSample(0.2, -1), ZeroErrorSample(0.6, 1)]
    assert midpoint_estimator(samples) == pytest.approx(0.4, rel=1e-15)
    lo, hi = interval(samples)
    assert lo <= midpoint_estimator(samples) <= hi


def test_estimator_risk_exact_published_values():
    assert estimator_risk_exact(0) == (0.25, 0.5)
    assert estimator_risk_exact(1) == (0.125, 0.25)
    assert estimator_risk_exact(99) == (1.0 / 400.0, 1.0 / 200.0)


def test_estimator_risk_rederived_values():
    # size-biased width: E[width] = 2/(n+2), so e_abs = 1/(2(n+2))
    assert estimator_risk_rederived(0) == (0.25, 0.5)
    assert estimator_risk_rederived(1) == pytest.approx((1.0 / 6.0, 1.0 / 3.0), rel=1e-15)
    assert estimator_risk_rederived(99) == pytest.approx((1.0 / 202.0, 1.0 / 101.0), rel=1e-15)


def test_simulated_width_is_size_biased():
    # E[theta_r - theta_l] = 2/(n+2), not the unweighted spacing 1/(n+1)
    n = 9
    rng = rng_stream(703, 0)
    theta = rng.uniform(size=200_000)
    x = rng.uniform(size=(200_000, n))
    right = x >= theta[:, None]
    width = np.where(right, x, 1.0).min(axis=1) - np.where(~right, x, 0.0).max(axis=1)
    stderr = width.std(ddof=1) / math.sqrt(width.size)
    assert abs(width.mean() - 2.0 / (n + 2)) < 3 * stderr
    assert abs(width.mean() - 1.0 / (n + 1)) > 30 * stderr


@pytest.mark.parametrize("n", [0, 1, 9, 99])
def test_simulator_matches_rederived_law(n):
    est = simulate_estimator_risk(n, trials=200_000, seed=704)
    assert abs(est.mean - estimator_risk_rederived(n).e_abs) < 3 * est.stderr


def test_simulator_decreasing_in_n():
    means = [simulate_estimator_risk(n, trials=20_000, seed=705).mean
             for n in (1, 5, 25, 125)]
    assert all(b < a for a, b in zip(means, means[1:]))


def test_risk_lower_l1_below_achievable():
    for n in (0, 1, 10, 100):
        assert risk_lower_l1(n) <= estimator_risk_rederived(n).l1
        assert risk_lower_l1(n) <= estimator_risk_exact(n).l1


def test_sample_complexity():
    got = sample_complexity(0.01)
    assert got.n_sufficient == pytest.approx(49.0, rel=1e-14)
    assert got.n_necessary == pytest.approx(27.0729741783442584912071607395, rel=1e-13)
    assert got.n_necessary <= got.n_sufficient
    for l1 in (0.4999, 0.3, 0.01, 1e-6):
        pair = sample_complexity(l1)
        ratio = (pair.n_sufficient + 1.0) / (pair.n_necessary + 1.0)
        assert ratio == pytest.approx(math.exp(EULER_GAMMA), abs=1e-12)
    assert sample_complexity(0.499999).n_sufficient == pytest.approx(0.0, abs=1e-5)
    with pytest.raises(DomainError):
        sample_complexity(0.5)
    with pytest.raises(DomainError):
        sample_complexity(0.0)


def test_exact_risk_slope_is_minus_one():
    ns = np.unique(np.round(np.geomspace(10, 10 ** 4, 40)).astype(int))
    y = np.log([estimator_risk_exact(int(n)).e_abs for n in ns])
    slope = np.polyfit(np.log(ns), y, 1)[0]
    assert abs(slope + 1.0) < 0.01


def test_harmonic_consistency():
    # the MI formula is the harmonic partial sum shifted by one
    for n in (0, 1, 5, 50):
        assert mutual_information_exact(n) == pytest.approx(harmonic(n + 1) - 1.0, abs=1e-15)
