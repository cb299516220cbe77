"""Asymptotic inference quantities for regular parametric models.

Around a maximum-likelihood fit with r parameters, Hessian log-determinant
logdet_L and prior density log_prior at the optimum, the posterior-prior
KL divergence is asymptotically

    D = (r/2) ln(N / 2 pi e) + logdet_L / 2 - log_prior

and the log evidence has the equivalent forms loglik - D - r/2 (model
selection view) and the direct Laplace integral.  The relevance of a sample
also caps the number of resolvable parameters: r <= 2 H[k] N / ln N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BadArgument

_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class GaussianPosteriorSummary:
    r: int
    n: int
    logdet_l: float = 0.0
    log_prior_at_mle: float = 0.0
    loglik_max: float = 0.0

    def __post_init__(self):
        if self.r < 0 or self.n < 1:
            raise BadArgument("need r >= 0 and N >= 1")


@dataclass(frozen=True)
class BoundResult:
    r_max: int
    raw: float
    note: str = "approximate upper bound"


def kl_posterior_prior(summary: GaussianPosteriorSummary) -> float:
    """Asymptotic KL divergence from prior to posterior, in nats."""
    gaussian = 0.5 * summary.r * (math.log(summary.n) - _LOG_2PI - 1.0)
    return gaussian + 0.5 * summary.logdet_l - summary.log_prior_at_mle


def log_evidence(summary: GaussianPosteriorSummary) -> tuple:
    """(model-selection form, Laplace form); equal up to float rounding."""
    bms = summary.loglik_max - kl_posterior_prior(summary) - 0.5 * summary.r
    laplace = (
        summary.loglik_max
        + 0.5 * summary.r * (_LOG_2PI - math.log(summary.n))
        - 0.5 * summary.logdet_l
        + summary.log_prior_at_mle
    )
    return bms, laplace


def param_bound(n: int, relevance: float) -> BoundResult:
    """Largest parameter count resolvable at relevance H[k]: 2 H[k] N / ln N."""
    if n < 2:
        raise BadArgument("need N >= 2")
    if relevance < 0:
        raise BadArgument("relevance must be non-negative")
    raw = 2.0 * relevance * n / math.log(n)
    return BoundResult(r_max=int(math.floor(raw)), raw=raw)
