"""Ranked probability score and the mean-forecast diagnostics.

The score compares cumulative forecast probabilities with cumulative
realised quintile indicators::

    RPS = 1/5 * sum_j (Q_j - F_j)**2,   Q = cumsum(q), F = cumsum(f)

It lies in ``[0, 0.8]`` for one-hot ``q`` and simplex ``f``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .forecast import check_forecast
from .quintiles import N_QUINTILES

SIMPLEX_TOL = 1e-9


def _check_onehot(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    if q.shape[-1] != N_QUINTILES:
        raise ValueError(f"outcome rows must have 5 entries, got shape {q.shape}")
    if not (np.all((q == 0) | (q == 1)) and np.all(q.sum(axis=-1) == 1)):
        raise ValueError("outcome rows must be one-hot")
    return q


def _check_simplex(f) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    check_forecast(f.reshape(-1, N_QUINTILES), SIMPLEX_TOL)
    return f


def rps_matrix(q, f) -> np.ndarray:
    """Elementwise RPS over the leading axes of matching ``(..., 5)`` arrays."""
    q = _check_onehot(q)
    f = _check_simplex(f)
    if q.shape != f.shape:
        raise ValueError(f"shape mismatch {q.shape} vs {f.shape}")
    d = np.cumsum(q, axis=-1) - np.cumsum(f, axis=-1)
    return (d * d).sum(axis=-1) / N_QUINTILES


def rps_asset(q_row, f_row) -> float:
    q_row = np.asarray(q_row)
    f_row = np.asarray(f_row)
    if q_row.shape != (N_QUINTILES,) or f_row.shape != (N_QUINTILES,):
        raise ValueError("rps_asset takes two 5-vectors")
    return float(rps_matrix(q_row, f_row))


def per_period_rps(outcomes, forecasts) -> np.ndarray:
    """Cross-sectional mean RPS of each period; inputs are ``(T, N, 5)``."""
    q = np.asarray(outcomes)
    f = np.asarray(forecasts)
    if q.ndim != 3 or q.shape != f.shape:
        raise ValueError(f"expected matching (T, N, 5) arrays, got {q.shape} and {f.shape}")
    return rps_matrix(q, f).mean(axis=1)


def rps_aggregate(outcomes, forecasts) -> float:
    """Mean RPS over every (asset, period) pair."""
    q = np.asarray(outcomes)
    f = np.asarray(forecasts)
    if q.ndim != 3 or q.shape != f.shape:
        raise ValueError(f"expected matching (T, N, 5) arrays, got {q.shape} and {f.shape}")
    return float(rps_matrix(q, f).mean())


def rolling_rps(per_period, window: int) -> np.ndarray:
    """Moving average of per-period scores; only full windows are emitted."""
    v = np.asarray(per_period, dtype=float)
    if window < 1:
        raise ValueError("window must be >= 1")
    if window > v.size:
        raise ValueError(f"window {window} exceeds {v.size} periods")
    return np.array([v[t - window + 1 : t + 1].mean() for t in range(window - 1, v.size)])


@dataclass
class RpsReport:
    per_asset_per_period: np.ndarray  # (T, N)
    aggregate: float
    rolling: dict[int, list[tuple[int, float]]] = field(default_factory=dict)
    skipped_windows: list[int] = field(default_factory=list)

    @property
    def per_period(self) -> np.ndarray:
        return self.per_asset_per_period.mean(axis=1)

    def to_dict(self, periods=None) -> dict:
        per = self.per_period
        periods = list(range(len(per))) if periods is None else list(periods)
        return {
            "aggregate": float(self.aggregate),
            "per_period": [{"period": int(p), "rps": float(v)} for p, v in zip(periods, per)],
            "rolling": {
                str(w): [{"period": int(periods[t]), "rps": float(v)} for t, v in pts]
                for w, pts in self.rolling.items()
            },
            "skipped_windows": list(self.skipped_windows),
        }


def rps_report(outcomes, forecasts, windows=(3, 12)) -> RpsReport:
    """Score a forecast history; windows longer than the history are skipped."""
    cells = rps_matrix(np.asarray(outcomes), np.asarray(forecasts))
    if cells.ndim != 2:
        raise ValueError("expected (T, N, 5) inputs")
    per = cells.mean(axis=1)
    rolling, skipped = {}, []
    for w in windows:
        if w > per.size:
            skipped.append(int(w))
            continue
        vals = rolling_rps(per, w)
        rolling[int(w)] = [(t, float(v)) for t, v in zip(range(w - 1, per.size), vals)]
    return RpsReport(cells, float(cells.mean()), rolling, skipped)


# -- mean-forecast diagnostics -----------------------------------------------


@dataclass(frozen=True)
class RpsDecomposition:
    """``mean_rps == bias_term - correlation_term + variance_term``.

    ``bias_term`` is the score the mean forecast would get.  It splits into
    ``mean_gap_term`` (squared gap between mean cumulative outcome and mean
    cumulative forecast) plus ``outcome_variance_term`` (spread of the
    outcomes themselves, which no forecast can remove).
    """

    bias_term: float
    correlation_term: float
    variance_term: float
    mean_rps: float
    mean_gap_term: float
    outcome_variance_term: float

    @property
    def residual(self) -> float:
        return self.bias_term - self.correlation_term + self.variance_term - self.mean_rps


def decompose_rps(outcome_samples, forecast_samples) -> RpsDecomposition:
    """Split the mean score of paired ``(S, 5)`` samples around the mean forecast."""
    q = _check_onehot(outcome_samples)
    f = _check_simplex(forecast_samples)
    if q.ndim != 2 or q.shape != f.shape:
        raise ValueError("expected matching (S, 5) sample arrays")
    if q.shape[0] < 2:
        raise ValueError("need at least 2 samples")
    Q = np.cumsum(q, axis=1)
    F = np.cumsum(f, axis=1)
    F_mean = F.mean(axis=0)
    e = F - F_mean
    gap = Q - F_mean
    bias = (gap * gap).mean(axis=0).sum() / N_QUINTILES
    corr = 2.0 * (Q * e).mean(axis=0).sum() / N_QUINTILES
    var = (e * e).mean(axis=0).sum() / N_QUINTILES
    mean_gap = ((Q.mean(axis=0) - F_mean) ** 2).sum() / N_QUINTILES
    return RpsDecomposition(
        bias_term=float(bias),
        correlation_term=float(corr),
        variance_term=float(var),
        mean_rps=float(rps_matrix(q, f).mean()),
        mean_gap_term=float(mean_gap),
        outcome_variance_term=float(Q.var(axis=0).sum() / N_QUINTILES),
    )


@dataclass(frozen=True)
class OptimalityCheck:
    ok: bool
    margin: float  # worst (perturbed - optimal) mean score
    optimal_forecast: np.ndarray
    optimal_rps: float


def check_mean_optimality(
    outcome_samples, n_perturbations: int = 1000, seed=None, slack: float = 1e-12
) -> OptimalityCheck:
    """Check that the empirical mean of the outcomes is the best constant forecast.

    Competitors are random simplex points: Dirichlet(1) draws pulled towards
    the mean by a uniform random amount, so both distant and nearby forecasts
    are tried.
    """
    q = _check_onehot(outcome_samples)
    if q.ndim != 2 or q.shape[0] < 2:
        raise ValueError("need at least 2 outcome samples of shape (S, 5)")
    rng = np.random.default_rng(seed)
    f_opt = q.mean(axis=0)
    best = rps_matrix(q, np.broadcast_to(f_opt, q.shape)).mean()

    Q = np.cumsum(q, axis=1)
    draws = rng.dirichlet(np.ones(N_QUINTILES), size=n_perturbations)
    lam = rng.uniform(size=(n_perturbations, 1))
    cand = lam * draws + (1.0 - lam) * f_opt
    F = np.cumsum(cand, axis=1)
    # mean over samples of sum_j (Q_j - F_j)^2 for each candidate
    scores = np.array([((Q - Fc) ** 2).sum(axis=1).mean() for Fc in F]) / N_QUINTILES
    margin = float((scores - best).min()) if n_perturbations else 0.0
    return OptimalityCheck(margin >= -slack, margin, f_opt, float(best))
