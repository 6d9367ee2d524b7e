"""Bayesian engine: conjugate Normal-Inverse-Gamma regression with ROPE analysis.

Sampling is exact (i.i.d. draws from the closed-form posterior), not MCMC, so
runs are deterministic given a seed and need no convergence diagnostics.

Model and parameterization
--------------------------
Slope columns are centered before conditioning, following the convention of
weakly-informative reference implementations (rstanarm-style): the intercept
prior applies to the expected response at average predictor values, where
"centered intercept = mean response" is a meaningful default, and the raw
intercept is recovered per draw as alpha_c - sum_j beta_j * xbar_j.

With Z the centered design, the conjugate update for (beta_c, sigma2) is

    Lambda_n = Z'Z + Lambda_0          mu_n = Lambda_n^-1 (Z'y + Lambda_0 mu_0)
    a_n = a_0 + n/2                    b_n = b_0 + (y'y + mu_0'Lambda_0 mu_0
                                                    - mu_n'Lambda_n mu_n)/2

then sigma2 ~ InvGamma(a_n, b_n) and beta_c | sigma2 ~ N(mu_n, sigma2 Lambda_n^-1).

Default priors are auto-scaled from the data: coefficient sd 2.5 * sd(y)/sd(x_j)
(intercept: 2.5 * sd(y) around mean(y)).  Because the conditional prior
covariance is sigma2 * Lambda_0^-1, the prior precision is multiplied by the
OLS residual variance so that those sds are in natural response units rather
than units of sigma.  The sigma2 prior is InvGamma(shape, scale) with shape 1
and, unless overridden, scale auto-set to shape times the OLS residual
variance so the prior scale matches the data scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import cho_solve, solve_triangular

from .errors import DataError
from .kernels import RandomSource
from .ols import DesignMatrix, _qr_solve


@dataclass
class PriorSpec:
    coef_mean: np.ndarray
    coef_sd: np.ndarray
    sigma2_shape: float = 1.0
    sigma2_scale: float | None = None  # None: auto-scale to shape * s2_ols

    def validate(self, p: int) -> None:
        if self.coef_mean.shape != (p,) or self.coef_sd.shape != (p,):
            raise DataError(
                f"prior mean/sd must have length {p}, got "
                f"{self.coef_mean.shape[0]} and {self.coef_sd.shape[0]}"
            )
        if not (self.coef_sd > 0).all():
            raise DataError("prior coefficient sds must be strictly positive")
        if self.sigma2_shape <= 0:
            raise DataError("sigma2 prior shape must be strictly positive")
        if self.sigma2_scale is not None and self.sigma2_scale <= 0:
            raise DataError("sigma2 prior scale must be strictly positive")


@dataclass
class PosteriorDraws:
    """Joint posterior draws: beta is draws-by-p, sigma2 is length draws."""

    beta: np.ndarray
    sigma2: np.ndarray
    names: tuple[str, ...]


@dataclass
class PosteriorSummary:
    name: str
    draws: np.ndarray
    median: float
    ci_low: float
    ci_high: float
    ci_midpoint: float
    rope_low: float
    rope_high: float
    pirope: float


def default_prior(
    d: DesignMatrix,
    coef_sd: float | None = None,
    sigma2_shape: float = 1.0,
    sigma2_scale: float | None = None,
) -> PriorSpec:
    """Auto-scaled weakly-informative prior; coef_sd overrides every coefficient sd."""
    y = d.y
    p = d.p
    sd_y = float(np.std(y, ddof=1))
    if sd_y == 0.0:
        sd_y = 1.0
    mean = np.zeros(p)
    mean[0] = float(np.mean(y))
    if coef_sd is not None:
        if coef_sd <= 0:
            raise DataError("coef_sd override must be strictly positive")
        sds = np.full(p, float(coef_sd))
    else:
        sds = np.empty(p)
        sds[0] = 2.5 * sd_y
        for j in range(1, p):
            sd_x = float(np.std(d.X[:, j], ddof=1))
            if sd_x == 0.0:
                raise DataError(
                    f"regressor {d.names[j]!r} is constant; cannot auto-scale its prior"
                )
            sds[j] = 2.5 * sd_y / sd_x
    return PriorSpec(
        coef_mean=mean,
        coef_sd=sds,
        sigma2_shape=sigma2_shape,
        sigma2_scale=sigma2_scale,
    )


def sample_posterior(
    d: DesignMatrix,
    prior: PriorSpec,
    draws: int,
    rs: RandomSource,
) -> PosteriorDraws:
    """Exact draws from the conjugate posterior; see the module docstring."""
    if draws < 1000:
        raise ValueError(f"draws must be at least 1000, got {draws}")
    X, y = d.X, d.y
    n, p = X.shape
    prior.validate(p)

    # OLS residual variance sets the natural-unit scaling of the prior
    beta_ols, _ = _qr_solve(X, y, d.names)
    resid = y - X @ beta_ols
    s2_ols = float(resid @ resid) / (n - p)
    if s2_ols <= 0.0:
        s2_ols = max(float(np.var(y, ddof=1)), 1e-300)

    xbar = np.zeros(p)
    xbar[1:] = X[:, 1:].mean(axis=0)
    Z = X - xbar

    lam0 = s2_ols / prior.coef_sd**2
    mu0 = prior.coef_mean
    A = Z.T @ Z + np.diag(lam0)
    L = np.linalg.cholesky(A)
    mu_n = cho_solve((L, True), Z.T @ y + lam0 * mu0)

    a_n = prior.sigma2_shape + 0.5 * n
    b0 = (
        prior.sigma2_scale
        if prior.sigma2_scale is not None
        else prior.sigma2_shape * s2_ols
    )
    b_n = b0 + 0.5 * (
        float(y @ y) + float(mu0 * lam0 @ mu0) - float(mu_n @ (A @ mu_n))
    )
    if b_n <= 0.0:
        raise DataError(f"posterior scale collapsed to {b_n}; check the prior spec")

    sigma2 = rs.inverse_gammas(draws, a_n, b_n)
    z = rs.normals(draws * p).reshape(draws, p)
    w = solve_triangular(L, z.T, lower=True, trans="T")  # solves L' w = z
    beta_c = mu_n[:, None] + np.sqrt(sigma2)[None, :] * w
    beta = beta_c.T.copy()
    beta[:, 0] = beta_c[0, :] - beta_c[1:, :].T @ xbar[1:]
    return PosteriorDraws(beta=beta, sigma2=sigma2, names=d.names)


def rope_bounds(loss: Sequence[float]) -> tuple[float, float]:
    """Region of practical equivalence: +/- sd(loss)/10 (n-1 denominator)."""
    x = np.asarray(loss, dtype=float)
    if len(x) < 2:
        raise ValueError("rope_bounds needs at least 2 values")
    high = float(np.std(x, ddof=1)) / 10.0
    return -high, high


def credible_interval(draws: Sequence[float], level: float) -> tuple[float, float]:
    """Equal-tailed interval between the (1-level)/2 and 1-(1-level)/2 quantiles."""
    x = np.asarray(draws, dtype=float)
    if len(x) < 100:
        raise ValueError(f"credible_interval needs at least 100 draws, got {len(x)}")
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie in (0, 1), got {level}")
    alpha = (1.0 - level) / 2.0
    lo, hi = np.quantile(x, [alpha, 1.0 - alpha])
    return float(lo), float(hi)


def hdi_interval(draws: Sequence[float], level: float) -> tuple[float, float]:
    """Highest-density interval: the shortest window holding the target mass."""
    x = np.sort(np.asarray(draws, dtype=float))
    if len(x) < 100:
        raise ValueError(f"hdi_interval needs at least 100 draws, got {len(x)}")
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie in (0, 1), got {level}")
    n = len(x)
    m = int(math.ceil(level * n))
    if m >= n:
        return float(x[0]), float(x[-1])
    widths = x[m - 1 :] - x[: n - m + 1]
    k = int(np.argmin(widths))
    return float(x[k]), float(x[k + m - 1])


def pirope(
    draws: Sequence[float],
    ci: tuple[float, float],
    rope: tuple[float, float],
) -> float:
    """Percent of the draws inside the CI that also land inside the ROPE."""
    x = np.asarray(draws, dtype=float)
    in_ci = (x >= ci[0]) & (x <= ci[1])
    denom = int(in_ci.sum())
    if denom == 0:
        raise DataError("degenerate credible interval: no draws inside it")
    in_both = in_ci & (x >= rope[0]) & (x <= rope[1])
    return 100.0 * int(in_both.sum()) / denom


def summarize_posterior(
    post: PosteriorDraws,
    loss: Sequence[float],
    level: float = 0.89,
    use_hdi: bool = False,
) -> list[PosteriorSummary]:
    """Per-parameter median, credible interval, ROPE bounds, and PIROPE."""
    rope = rope_bounds(loss)
    interval = hdi_interval if use_hdi else credible_interval
    out = []
    for j, name in enumerate(post.names):
        col = post.beta[:, j]
        lo, hi = interval(col, level)
        out.append(
            PosteriorSummary(
                name=name,
                draws=col,
                median=float(np.median(col)),
                ci_low=lo,
                ci_high=hi,
                ci_midpoint=0.5 * (lo + hi),
                rope_low=rope[0],
                rope_high=rope[1],
                pirope=pirope(col, (lo, hi), rope),
            )
        )
    return out
