"""Frequentist engine: OLS fit with inference and assumption diagnostics.

The fit solves the least-squares problem through a Householder QR
factorization rather than the normal equations; the fixture design is
ill-conditioned (a near-constant ratio column with a coefficient in the
hundreds) and QR keeps the solve accurate.  Standard errors come from the
triangular factor:

    (X'X)^-1 = R^-1 R^-T,   se_j = sqrt(sigma2_hat * [(X'X)^-1]_jj)

with sigma2_hat = RSS / (n - p) and two-sided t tails for p-values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .data import ModelFrame
from .errors import DataError, SingularDesignError
from .kernels import chi2_sf, student_t_sf2

INTERCEPT_NAME = "(Intercept)"

_RANK_TOL = 1e-10


@dataclass
class DesignMatrix:
    X: np.ndarray
    y: np.ndarray
    names: tuple[str, ...]

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


@dataclass
class OlsFit:
    names: tuple[str, ...]
    estimates: np.ndarray
    std_errors: np.ndarray
    t_stats: np.ndarray
    p_values: np.ndarray
    residuals: np.ndarray
    fitted: np.ndarray
    sigma2_hat: float
    r2: float
    adj_r2: float
    df_resid: int


@dataclass
class Diagnostics:
    vif: dict[str, float]
    bp_stat: float
    bp_p: float
    jb_stat: float
    jb_p: float
    dw_stat: float
    mean_resid: float
    advisories: tuple[str, ...]


def build_design(frame: ModelFrame) -> DesignMatrix:
    """Design with columns [1, Month, Year, AdjPop, Ratio, APLIR, FFR, ExpClaims]."""
    n = len(frame)
    cols = frame.regressor_columns()
    p = len(cols) + 1
    if n <= p:
        raise DataError(
            f"insufficient data: need more rows than parameters (n={n}, p={p})"
        )
    X = np.column_stack([np.ones(n)] + cols)
    return DesignMatrix(X=X, y=frame.loss.astype(float), names=(INTERCEPT_NAME,) + frame.names)


def _qr_solve(X: np.ndarray, y: np.ndarray, names: tuple[str, ...]) -> tuple[np.ndarray, np.ndarray]:
    """Least-squares solution and R factor, with a rank check on R's diagonal."""
    Q, R = np.linalg.qr(X)
    diag = np.abs(np.diag(R))
    cutoff = _RANK_TOL * diag.max()
    bad = np.nonzero(diag < cutoff)[0]
    if bad.size:
        j = int(bad[0])
        raise SingularDesignError(
            f"design is rank deficient: column {names[j]!r} is linearly "
            "dependent on the preceding columns",
            column=names[j],
        )
    beta = solve_triangular(R, Q.T @ y)
    return beta, R


def fit_ols(d: DesignMatrix) -> OlsFit:
    X, y = d.X, d.y
    n, p = X.shape
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise DataError("design matrix and response must be finite")
    if n <= p:
        raise DataError(f"need n > p for residual inference (n={n}, p={p})")

    beta, R = _qr_solve(X, y, d.names)
    fitted = X @ beta
    resid = y - fitted
    rss = float(resid @ resid)
    df_resid = n - p
    sigma2 = rss / df_resid

    r_inv = solve_triangular(R, np.eye(p))
    xtx_inv_diag = np.sum(r_inv * r_inv, axis=1)
    se = np.sqrt(sigma2 * xtx_inv_diag)

    with np.errstate(divide="ignore", invalid="ignore"):
        t = beta / se
    t = np.where(np.isnan(t), 0.0, t)
    pvals = np.array([student_t_sf2(float(tj), df_resid) for tj in t])

    sst = float(np.sum((y - y.mean()) ** 2))
    if sst > 0.0:
        r2 = 1.0 - rss / sst
    else:
        r2 = 1.0 if rss <= 1e-30 else 0.0
    adj_r2 = 1.0 - (1.0 - r2) * (n - 1) / (n - p)

    return OlsFit(
        names=d.names,
        estimates=beta,
        std_errors=se,
        t_stats=t,
        p_values=pvals,
        residuals=resid,
        fitted=fitted,
        sigma2_hat=sigma2,
        r2=r2,
        adj_r2=adj_r2,
        df_resid=df_resid,
    )


def _aux_r2(X: np.ndarray, target: np.ndarray, names: tuple[str, ...]) -> float:
    """R-squared of regressing target on X (which includes an intercept)."""
    beta, _ = _qr_solve(X, target, names)
    resid = target - X @ beta
    tss = float(np.sum((target - target.mean()) ** 2))
    if tss == 0.0:
        return 0.0
    return 1.0 - float(resid @ resid) / tss


def diagnostics(d: DesignMatrix, fit: OlsFit, vif_cutoff: float = 10.0) -> Diagnostics:
    """VIF, Breusch-Pagan, Jarque-Bera, Durbin-Watson, and residual mean.

    Advisory messages are collected (not raised) when max VIF reaches the
    cutoff or Durbin-Watson leaves [1.5, 2.5].
    """
    X = d.X
    n, p = X.shape
    e = fit.residuals

    vif: dict[str, float] = {}
    for j in range(1, p):
        others = np.delete(X, j, axis=1)
        names = tuple(nm for i, nm in enumerate(d.names) if i != j)
        r2_j = _aux_r2(others, X[:, j], names)
        vif[d.names[j]] = math.inf if r2_j >= 1.0 else 1.0 / (1.0 - r2_j)

    # Breusch-Pagan LM: n times the R^2 of e^2 regressed on the full design
    bp_stat = n * _aux_r2(X, e**2, d.names)
    bp_p = chi2_sf(bp_stat, p - 1)

    ec = e - e.mean()
    m2 = float(np.mean(ec**2))
    if m2 > 0.0:
        skew = float(np.mean(ec**3)) / m2**1.5
        kurt = float(np.mean(ec**4)) / m2**2
    else:
        skew, kurt = 0.0, 3.0
    jb_stat = n / 6.0 * (skew**2 + 0.25 * (kurt - 3.0) ** 2)
    jb_p = chi2_sf(jb_stat, 2.0)

    denom = float(e @ e)
    dw = float(np.sum(np.diff(e) ** 2)) / denom if denom > 0.0 else 0.0

    advisories = []
    worst = max(vif, key=lambda k: vif[k])
    if vif[worst] >= vif_cutoff:
        advisories.append(
            f"multicollinearity: VIF {vif[worst]:.1f} for {worst} exceeds {vif_cutoff:g}"
        )
    if not 1.5 <= dw <= 2.5:
        advisories.append(f"autocorrelation: Durbin-Watson {dw:.2f} outside [1.5, 2.5]")

    return Diagnostics(
        vif=vif,
        bp_stat=float(bp_stat),
        bp_p=float(bp_p),
        jb_stat=float(jb_stat),
        jb_p=float(jb_p),
        dw_stat=dw,
        mean_resid=float(e.mean()),
        advisories=tuple(advisories),
    )
