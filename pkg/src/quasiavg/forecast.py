"""Quasi-average quintile forecasters.

Every forecaster returns an ``(N, 5)`` matrix of probabilities.  Histories are
stacks of past one-hot outcomes with shape ``(n_periods, N, 5)``, oldest
first; a forecast for period ``T`` is built from ``history[:T]`` only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .market_data import ETF, STOCK, AssetUniverse
from .quintiles import N_QUINTILES

FORECASTERS = ("benchmark", "temporal", "type", "mixed")


@dataclass(frozen=True)
class TemporalConfig:
    windows: tuple[int, ...] = (5, 10, 400)
    weights: tuple[float, ...] = (0.2, 0.2, 0.6)

    def __post_init__(self):
        object.__setattr__(self, "windows", tuple(int(w) for w in self.windows))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if not self.windows or len(self.windows) != len(self.weights):
            raise ValueError("windows and weights must be non-empty and equal length")
        if any(w < 1 for w in self.windows):
            raise ValueError("windows must be >= 1")
        if any(b <= a for a, b in zip(self.windows, self.windows[1:])):
            raise ValueError("windows must be strictly increasing")
        if any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive")
        if abs(sum(self.weights) - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")


def check_forecast(f, tol: float = 1e-9) -> np.ndarray:
    """Validate simplex rows; returns ``f`` as a float array."""
    f = np.asarray(f, dtype=float)
    if f.ndim != 2 or f.shape[1] != N_QUINTILES:
        raise ValueError(f"forecast must have shape (N, 5), got {f.shape}")
    if np.any(f < -tol) or np.any(f > 1 + tol):
        raise ValueError("forecast probabilities outside [0, 1]")
    if np.any(np.abs(f.sum(axis=1) - 1.0) > tol):
        raise ValueError("forecast rows must sum to 1")
    return f


def _history(history) -> np.ndarray:
    h = np.asarray(history, dtype=float)
    if h.ndim == 2:
        h = h[None]
    if h.ndim != 3 or h.shape[2] != N_QUINTILES:
        raise ValueError(f"history must have shape (T, N, 5), got {h.shape}")
    return h


def uniform_forecast(n_assets: int) -> np.ndarray:
    if n_assets < 1:
        raise ValueError("n_assets must be >= 1")
    return np.full((n_assets, N_QUINTILES), 1.0 / N_QUINTILES)


def temporal_forecast(history, cfg: TemporalConfig = TemporalConfig()) -> np.ndarray:
    """Weighted blend of each asset's own trailing outcome means.

    Windows longer than the history are clamped to it but keep their weight.
    """
    h = _history(history)
    n_avail = h.shape[0]
    if n_avail == 0:
        raise ValueError("empty history")
    f = np.zeros(h.shape[1:])
    for window, weight in zip(cfg.windows, cfg.weights):
        f += weight * h[-min(window, n_avail):].mean(axis=0)
    return f / f.sum(axis=1, keepdims=True)


def class_forecast(last_outcomes, universe: AssetUniverse, k: int = 1) -> np.ndarray:
    """Stocks all get the stock-average outcome of the last ``k`` periods; ETFs likewise."""
    h = _history(last_outcomes)
    if k < 1:
        raise ValueError("k must be >= 1")
    if h.shape[0] < k:
        raise ValueError(f"need {k} trailing periods, got {h.shape[0]}")
    if h.shape[1] != len(universe):
        raise ValueError("history does not match universe size")
    recent = h[-k:]
    f = np.empty(h.shape[1:])
    for cls in (STOCK, ETF):
        mask = universe.mask(cls)
        if not mask.any():
            raise ValueError(f"class {cls} has no members")
        f[mask] = recent[:, mask, :].reshape(-1, N_QUINTILES).mean(axis=0)
    return f


def mixed_forecast(a, b, weight: float = 0.5) -> np.ndarray:
    """``weight * a + (1 - weight) * b``; plain mean by default."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    if not 0.0 <= weight <= 1.0:
        raise ValueError("weight must lie in [0, 1]")
    if weight == 0.5:
        return (a + b) / 2.0
    return weight * a + (1.0 - weight) * b


def forecast_at(
    method: str,
    history,
    universe: AssetUniverse,
    temporal: TemporalConfig = TemporalConfig(),
    k: int = 1,
    mix_weight: float = 0.5,
) -> np.ndarray:
    """Forecast for the period right after ``history``.

    With no completed period (or fewer than ``k`` for the class average) the
    uniform forecast is returned.
    """
    n = len(universe)
    h = _history(history) if len(history) else np.zeros((0, n, N_QUINTILES))
    if method == "benchmark":
        return uniform_forecast(n)
    if method == "temporal":
        return temporal_forecast(h, temporal) if len(h) else uniform_forecast(n)
    if method == "type":
        return class_forecast(h, universe, k) if len(h) >= k else uniform_forecast(n)
    if method == "mixed":
        if len(h) < k:
            return uniform_forecast(n)
        return mixed_forecast(
            class_forecast(h, universe, k), temporal_forecast(h, temporal), mix_weight
        )
    raise ValueError(f"unknown forecaster {method!r}; expected one of {FORECASTERS}")


def forecast_series(outcomes, universe: AssetUniverse, method: str, **kwargs) -> np.ndarray:
    """Forecasts for every period in ``outcomes``, each using only earlier periods."""
    q = _history(outcomes)
    return np.stack([forecast_at(method, q[:t], universe, **kwargs) for t in range(len(q))])
