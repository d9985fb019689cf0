"""Binary Gaussian classifier with antipodal means: logistic posterior,
posterior-entropy lower bound nu(d, sigma2), exact and asymptotic mutual
information, L1 rate-distortion and risk bounds, and a conjugate plug-in
simulator.

Model: theta ~ N(0, I/d); class y in {1, 2} has x | y ~ N(+-theta, sigma2 I)
with uniform labels (sign s = 3 - 2y).  Any orthogonal basis of R^d is a
sufficient interpolation set, so d_star = d_interp = d, M = 2, coverage = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.special import expit

from .errors import DomainError
from .mc import MonteCarloEstimate, mc_mean
from .rdcore import InterpolationSpec, rd_lower_average, rd_upper, risk_lower_from_mi
from .specfun import Nats, digamma, log_gamma


@dataclass(frozen=True)
class GaussianFamily:
    d: int
    sigma2: float
    spec: InterpolationSpec = field(init=False)

    def __post_init__(self):
        if self.d < 1:
            raise DomainError(f"feature dimension must be >= 1, got {self.d}")
        if not self.sigma2 > 0.0:
            raise DomainError(f"sigma2 must be positive, got {self.sigma2}")
        spec = InterpolationSpec(d_star=self.d, d_interp=self.d,
                                 num_classes=2, coverage=1.0)
        object.__setattr__(self, "spec", spec)


def posterior(x, theta, sigma2: float) -> float:
    """W(y=1 | x, theta) = logistic(2 x.theta / sigma2), overflow-safe."""
    xv = np.asarray(x, dtype=float)
    th = np.asarray(theta, dtype=float)
    if xv.shape != th.shape:
        raise DomainError(f"dimension mismatch: {xv.shape} vs {th.shape}")
    if not sigma2 > 0.0:
        raise DomainError(f"sigma2 must be positive, got {sigma2}")
    return float(expit(2.0 * float(np.dot(xv, th)) / sigma2))


class EntropyLowerBound(NamedTuple):
    total: float
    per_coord: float


def entropy_lower_nu(d: int, sigma2: float) -> EntropyLowerBound:
    """Closed-form lower bound on the expected posterior entropy.

    total = (d/2) psi(d/2) + (d/2) ln(16 pi (1/(d sigma2) + 1) / (d sigma2))
            - d (Gamma((d+1)/2) / Gamma(d/2)) sqrt(4 (1/(d sigma2) + 1)
                                                   / (pi d sigma2))
            - 3d/2 - 2d ln 2,
    and nu = total / d.  Valid but loose: the gap to the true entropy can
    exceed 2 ln 2 per coordinate.
    """
    if d < 1 or not sigma2 > 0.0:
        raise DomainError("need d >= 1 and sigma2 > 0")
    q = 1.0 / (d * sigma2) + 1.0
    gamma_ratio = math.exp(log_gamma((d + 1) / 2.0) - log_gamma(d / 2.0))
    nu = 0.5 * digamma(d / 2.0) \
        + 0.5 * math.log(16.0 * math.pi * q / (d * sigma2)) \
        - gamma_ratio * math.sqrt(4.0 * q / (math.pi * d * sigma2)) \
        - 1.5 - 2.0 * math.log(2.0)
    return EntropyLowerBound(total=d * nu, per_coord=nu)


def mutual_information_exact(n: int, d: int, sigma2: float) -> Nats:
    """Exact I(Z^n; theta) = (d/2) ln(1 + n / (d sigma2)); 0 at n = 0."""
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    return (d / 2.0) * math.log1p(n / (d * sigma2))


def mutual_information_cb(n: int, d: int, sigma2: float) -> Nats:
    """Asymptotic I(Z^n; theta) = (d/2) ln(n / (d sigma2))."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return (d / 2.0) * math.log(n / (d * sigma2))


class RdBounds(NamedTuple):
    lower: float
    upper: float


def rd_bounds_l1(distortion: float, d: int, sigma2: float) -> RdBounds:
    """L1 rate-distortion bracket: [total - d ln(2 e D)]^+ and -d ln(min{D,1})."""
    spec = InterpolationSpec(d_star=d, d_interp=d, num_classes=2, coverage=1.0)
    total = entropy_lower_nu(d, sigma2).total
    return RdBounds(lower=rd_lower_average(total, spec, 1.0, distortion),
                    upper=rd_upper(spec, distortion))


class L1RiskBound(NamedTuple):
    """printed: the published bound (primary for reproduction);
    pipeline: the inversion-pipeline value, exactly printed / 2."""

    printed: float
    pipeline: float


def bayes_risk_lower_l1(n: int, d: int, sigma2: float) -> L1RiskBound:
    """L1 Bayes-risk lower bound, both published and pipeline variants.

    printed = sqrt(sigma2 d / (sigma2 d + n)) * exp(nu(d, sigma2) - 1);
    pipeline inverts the rate-distortion bound at the exact mutual
    information and carries an extra factor 1/2.
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    nu = entropy_lower_nu(d, sigma2).per_coord
    printed = math.sqrt(sigma2 * d / (sigma2 * d + n)) * math.exp(nu - 1.0)
    spec = InterpolationSpec(d_star=d, d_interp=d, num_classes=2, coverage=1.0)
    pipeline = risk_lower_from_mi(mutual_information_exact(n, d, sigma2),
                                  d * nu, spec, 1.0, coverage=1.0)
    return L1RiskBound(printed=printed, pipeline=pipeline)


def interpolation_scale(d: int, sigma2: float) -> float:
    """Mean norm of a marginal test draw, sqrt(1/d + sigma2) * E[chi_d].

    The marginal of X is N(0, (1/d + sigma2) I); interpolation sets used in
    entropy cross-checks are orthogonal bases scaled to this mean norm.
    """
    if d < 1 or not sigma2 > 0.0:
        raise DomainError("need d >= 1 and sigma2 > 0")
    mean_chi = math.sqrt(2.0) * math.exp(log_gamma((d + 1) / 2.0) - log_gamma(d / 2.0))
    return math.sqrt(1.0 / d + sigma2) * mean_chi


def sample_regression_values(d: int, sigma2: float, draws: int,
                             rng: np.random.Generator,
                             scale: float | None = None) -> np.ndarray:
    """Draws of the d regression values on a fixed orthogonal basis.

    The basis is scale * e_i (default scale: interpolation_scale); the
    coordinates are independent logistics of N(0, 4 scale^2 / (sigma2^2 d)).
    Returns shape (draws, d).
    """
    if draws < 1:
        raise DomainError("need at least one draw")
    c = interpolation_scale(d, sigma2) if scale is None else float(scale)
    theta = rng.normal(0.0, math.sqrt(1.0 / d), size=(draws, d))
    return expit(2.0 * c * theta / sigma2)


def simulate_bayes_risk(n: int, d: int, sigma2: float, trials: int,
                        test_points: int, seed: int, chunks: int = 64,
                        threads: int = 1) -> MonteCarloEstimate:
    """Simulated L1 risk of the conjugate posterior-mean plug-in rule.

    Per trial: theta ~ N(0, I/d); labels y_i uniform with sign s_i = 3-2y_i
    and x_i ~ N(s_i theta, sigma2 I); T_i = s_i x_i gives the posterior mean
    theta_hat = (sum T_i / sigma2) / (d + n / sigma2); the loss averages
    2 |W(X; theta) - W(X; theta_hat)| over fresh test draws X from the true
    marginal (uniform label, then the class conditional).
    """
    if trials < 100:
        raise DomainError(f"trials must be >= 100, got {trials}")
    if test_points < 100:
        raise DomainError(f"test_points must be >= 100, got {test_points}")
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    sigma = math.sqrt(sigma2)

    def sampler(rng, count):
        theta = rng.normal(0.0, math.sqrt(1.0 / d), size=(count, d))
        if n > 0:
            s = (3 - 2 * rng.integers(1, 3, size=(count, n))).astype(float)
            x = s[:, :, None] * theta[:, None, :] \
                + sigma * rng.normal(size=(count, n, d))
            t_sum = (s[:, :, None] * x).sum(axis=1)
            theta_hat = (t_sum / sigma2) / (d + n / sigma2)
        else:
            theta_hat = np.zeros_like(theta)
        st = (3 - 2 * rng.integers(1, 3, size=(count, test_points))).astype(float)
        xt = st[:, :, None] * theta[:, None, :] \
            + sigma * rng.normal(size=(count, test_points, d))
        w_true = expit(2.0 * np.einsum("ctd,cd->ct", xt, theta) / sigma2)
        w_hat = expit(2.0 * np.einsum("ctd,cd->ct", xt, theta_hat) / sigma2)
        return (2.0 * np.abs(w_true - w_hat)).mean(axis=1)

    return mc_mean(sampler, trials, seed, chunks=chunks, threads=threads)
