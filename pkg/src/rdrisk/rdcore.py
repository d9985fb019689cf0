"""Generic rate-distortion bounds on the regression function and their
inversion into Bayes-risk lower bounds.

The lower bounds take the differential entropy of the regression function
sampled on an interpolation set, subtract a distortion penalty per scalar
coordinate, and clamp at zero.  Inverting the chain

    I(Z^n; theta) >= R_p(D)

at a given mutual information yields the smallest Bayes risk any learning
rule can achieve, which is the canonical risk-lower-bound pipeline used by
all family modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .mc import MonteCarloEstimate
from .specfun import LossOrder, Nats, cp_constant, log_gamma, validate_loss_order


@dataclass(frozen=True)
class InterpolationSpec:
    """Geometry of the interpolation sets a bound is evaluated on.

    d_star: cardinality of the interpolation set the entropy refers to.
    d_interp: interpolation dimension of the family (upper-bound side).
    num_classes: class count M >= 2.
    coverage: probability mass covered by the interpolation map, in (0, 1];
        unused by the pointwise bounds.  Isotropy of the map is the
        caller's responsibility and is not verified here.
    """

    d_star: int
    d_interp: int
    num_classes: int
    coverage: float = 1.0

    def __post_init__(self):
        if self.d_star < 1 or self.d_interp < 1:
            raise DomainError("interpolation cardinality/dimension must be >= 1")
        if self.num_classes < 2:
            raise DomainError("num_classes must be >= 2")
        if not 0.0 < self.coverage <= 1.0:
            raise DomainError(f"coverage must be in (0, 1], got {self.coverage}")


@dataclass(frozen=True)
class FisherSummary:
    """Inputs to the asymptotic mutual-information expansion.

    dim: dimension t of the minimal sufficient statistic.
    mean_log_sqrt_det: E[log |Fisher(alpha)|^(1/2)] over the prior.
    entropy: differential entropy h(alpha) in nats.
    """

    dim: int
    mean_log_sqrt_det: float
    entropy: float

    def __post_init__(self):
        if self.dim < 1:
            raise DomainError("sufficient-statistic dimension must be >= 1")
        for name in ("mean_log_sqrt_det", "entropy"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")


class BoundValue(NamedTuple):
    """A tagged bound for reporting (kind: rd_lower | rd_upper | risk_lower | mi)."""

    value: float
    kind: str


def _check_distortion(distortion: float) -> float:
    if not distortion > 0.0:
        raise DomainError(f"distortion must be positive, got {distortion}")
    return float(distortion)


def rd_lower_pointwise(h_ws: Nats, spec: InterpolationSpec, p: LossOrder,
                       distortion: float) -> Nats:
    """Worst-case-over-test-points rate-distortion lower bound.

    [h_ws - d_star (M-1) (ln D + C_p)]^+ with D = ``distortion``.
    """
    d = _check_distortion(distortion)
    m = spec.num_classes
    bracket = h_ws - spec.d_star * (m - 1) * (math.log(d) + cp_constant(p, m))
    return max(bracket, 0.0)


def rd_upper(spec: InterpolationSpec, distortion: float) -> Nats:
    """-d_interp (M-1) ln(min{D, 1/(M-1)})."""
    d = _check_distortion(distortion)
    m = spec.num_classes
    return -spec.d_interp * (m - 1) * math.log(min(d, 1.0 / (m - 1)))


def rd_lower_average(e_h_ws: Nats, spec: InterpolationSpec, p: LossOrder,
                     distortion: float) -> Nats:
    """Average-over-test-points rate-distortion lower bound.

    [e_h_ws - d_star (M-1) (ln(D / coverage) + C_p)]^+; reduces to the
    pointwise bound when coverage = 1.
    """
    d = _check_distortion(distortion)
    m = spec.num_classes
    bracket = e_h_ws - spec.d_star * (m - 1) * (
        math.log(d / spec.coverage) + cp_constant(p, m))
    return max(bracket, 0.0)


def risk_lower_from_mi(mi: Nats, h_ws: Nats, spec: InterpolationSpec,
                       p: LossOrder, coverage: float = 1.0) -> float:
    """Smallest Bayes risk consistent with a mutual-information budget.

    D_min = coverage * exp((h_ws - mi) / (d_star (M-1)) - C_p), the exact
    algebraic inverse of rd_lower_average at an active bracket.  The result
    may exceed 1; callers clamp for reporting if they wish.  Negative mi
    (an asymptotic expansion evaluated at small n) is accepted; the inverse
    simply extrapolates.
    """
    m = spec.num_classes
    expo = (h_ws - mi) / (spec.d_star * (m - 1)) - cp_constant(p, m)
    return coverage * math.exp(expo)


def mi_clarke_barron(n: int, fisher: FisherSummary) -> Nats:
    """Asymptotic mutual information between n samples and the parameters.

    (t/2) ln(n / 2 pi e) + E[log |Fisher|^(1/2)] + h(alpha).  The o(1)
    remainder is dropped; consumers label the value asymptotic.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    t = fisher.dim
    return (t / 2.0) * math.log(n / (2.0 * math.pi * math.e)) \
        + fisher.mean_log_sqrt_det + fisher.entropy


def risk_lower_generic(n: int, t: int, c1: float, c2: float,
                       spec: InterpolationSpec, p: LossOrder) -> float:
    """Sample-complexity risk bound from Fisher/entropy constants.

    exp((c2 - c1) / (d_star (M-1))) / c3p * (2 pi e / n)^(t / (2 d_star (M-1)))
    with c3p = exp(C_p).
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    m = spec.num_classes
    denom = spec.d_star * (m - 1)
    c3p = math.exp(cp_constant(p, m))
    return math.exp((c2 - c1) / denom) / c3p \
        * (2.0 * math.pi * math.e / n) ** (t / (2.0 * denom))


def posterior_entropy_upper(spec: InterpolationSpec) -> Nats:
    """Maximum-entropy ceiling -d_interp (M-1) ln(M-1) for any posterior."""
    m = spec.num_classes
    return -spec.d_interp * (m - 1) * math.log(m - 1.0)


def _as_sample_cube(w_samples) -> np.ndarray:
    w = np.asarray(w_samples, dtype=float)
    if w.ndim == 1:
        w = w[:, None, None]
    elif w.ndim == 2:
        w = w[:, :, None]
    if w.ndim != 3:
        raise DomainError("w_samples must have shape (N, d_interp, M-1)")
    if w.shape[0] < 1:
        raise DomainError("w_samples is empty")
    return w


def ratio_coordinates(w_samples) -> np.ndarray:
    """Map regression values to joint-density coordinates, row by row.

    For each interpolation point i with regression row W_i (length M-1) and
    S_i = sum(W_i), the coordinates are N_i = W_i (1 + 2 S_i) / (1 + S_i),
    the normalization fixing the M-th coordinate to 1.  For continuous
    models the per-row Jacobian terms converge on d_interp (M-1) ln 2 as
    the class count grows (not asserted numerically anywhere).
    """
    w = _as_sample_cube(w_samples)
    s = w.sum(axis=2, keepdims=True)
    return w * (1.0 + 2.0 * s) / (1.0 + s)


def ratio_log_jacobian(w_samples) -> np.ndarray:
    """Per-sample ln |J| of the regression-to-coordinates map."""
    w = _as_sample_cube(w_samples)
    n, d_i, m_minus_1 = w.shape
    s = w.sum(axis=2)
    per_point = m_minus_1 * np.log((1.0 + 2.0 * s) / (1.0 + s)) \
        + np.log1p(s / ((1.0 + s) * (1.0 + 2.0 * s)))
    return per_point.sum(axis=1)


def posterior_entropy_change_of_var(w_samples, h_n: Nats) -> MonteCarloEstimate:
    """Monte-Carlo posterior entropy via the Jacobian identity.

    h(W(S)) = -E[ln |J|] + h(N), where h_n = h(N) is supplied externally
    (closed form or a k-NN estimate on ratio_coordinates(w_samples)).
    Returns the estimate with the standard error of the sampled term;
    at least ~1000 samples are needed for a stable value.
    """
    log_jac = ratio_log_jacobian(w_samples)
    n = log_jac.shape[0]
    if n < 2:
        raise DomainError("need at least 2 samples")
    terms = -log_jac
    stderr = float(terms.std(ddof=1) / np.sqrt(n))
    return MonteCarloEstimate(mean=float(terms.mean() + h_n), stderr=stderr,
                              trials=n, seed=0)


def generalized_gaussian_entropy(p: LossOrder, moment: float) -> Nats:
    """Entropy of the max-entropy density for a p-th absolute moment.

    ln(2 Gamma(1 + 1/p)) + (1/p) ln(p e moment) with moment = E|U|^p > 0.
    Finite p only; the p = inf maximizer is uniform, handled elsewhere.
    """
    p = validate_loss_order(p)
    if math.isinf(p):
        raise DomainError("p = inf has no generalized-Gaussian form; "
                          "use the uniform entropy instead")
    if not moment > 0.0:
        raise DomainError(f"moment must be positive, got {moment}")
    return log_gamma(1.0 + 1.0 / p) + math.log(2.0) \
        + math.log(p * math.e * moment) / p


def generalized_gaussian_sample(p: LossOrder, lam: float,
                                rng: np.random.Generator, size=None):
    """Draw from the density lambda^(1/p) / (2 Gamma(1+1/p)) exp(-lambda |u|^p).

    Uses the Gamma representation |U|^p ~ Gamma(1/p) / lambda with a random
    sign, so the empirical E|U|^p converges to 1 / (p lambda).  Returns a
    scalar when ``size`` is None.
    """
    p = validate_loss_order(p)
    if math.isinf(p):
        raise DomainError("p = inf is not supported by this sampler")
    if not lam > 0.0:
        raise DomainError(f"lambda must be positive, got {lam}")
    scalar = size is None
    n = 1 if scalar else size
    g = rng.gamma(1.0 / p, size=n)
    sign = rng.integers(0, 2, size=n) * 2 - 1
    u = sign * (g / lam) ** (1.0 / p)
    return float(u[0]) if scalar else u
