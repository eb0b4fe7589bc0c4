"""Seeded synthetic market: independent log-normal random walks.

Normal variates come from Box-Muller on 53-bit uniforms drawn from the raw
PCG64 stream, so a seed maps to the same prices regardless of changes to
numpy's higher-level samplers.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass

import numpy as np

from .market_data import ETF, STOCK, AssetUniverse, PriceTable


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 42
    n_stocks: int = 50
    n_etfs: int = 50
    n_days: int = 1001
    stock_vol: float = 0.02
    etf_vol: float = 0.01
    stock_drift: float = 0.0003
    etf_drift: float = 0.0002
    include_vxx_like: bool = False
    vxx_vol: float = 0.045
    vxx_drift: float = -0.003
    start_date: str = "2015-01-02"
    start_price: float = 100.0

    def __post_init__(self):
        if self.stock_vol <= 0 or self.etf_vol <= 0 or self.vxx_vol <= 0:
            raise ValueError("volatilities must be positive")
        if self.n_days < 2:
            raise ValueError("n_days must be >= 2")
        if self.n_stocks < 0 or self.n_etfs < 0 or self.n_stocks + self.n_etfs < 1:
            raise ValueError("need a non-negative number of assets, at least one in total")
        if self.include_vxx_like and self.n_etfs < 1:
            raise ValueError("the VXX-like asset replaces an ETF; n_etfs must be >= 1")
        if self.start_price <= 0:
            raise ValueError("start_price must be positive")


def standard_normals(seed: int, size: int) -> np.ndarray:
    """Box-Muller normals from the raw PCG64 stream of ``seed``."""
    bits = np.random.PCG64(seed)
    n_pairs = (size + 1) // 2
    raw = bits.random_raw(2 * n_pairs)
    u = ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53  # (0, 1)
    u1, u2 = u[0::2], u[1::2]
    rad = np.sqrt(-2.0 * np.log(u1))
    z = np.empty(2 * n_pairs)
    z[0::2] = rad * np.cos(2.0 * np.pi * u2)
    z[1::2] = rad * np.sin(2.0 * np.pi * u2)
    return z[:size]


def business_days(start: str, n: int) -> np.ndarray:
    day = dt.date.fromisoformat(start)
    out = []
    while len(out) < n:
        if day.weekday() < 5:
            out.append(day)
        day += dt.timedelta(days=1)
    return np.array(out, dtype="datetime64[D]")


def make_universe(cfg: SynthConfig) -> AssetUniverse:
    ids = [f"S{i + 1:03d}" for i in range(cfg.n_stocks)]
    ids += [f"E{i + 1:03d}" for i in range(cfg.n_etfs)]
    if cfg.include_vxx_like:
        ids[-1] = "VXX"
    classes = [STOCK] * cfg.n_stocks + [ETF] * cfg.n_etfs
    return AssetUniverse(tuple(ids), tuple(classes))


def generate_market(cfg: SynthConfig = SynthConfig()) -> tuple[PriceTable, AssetUniverse]:
    """Prices ``S[t+1] = S[t] * exp(drift + vol * z)`` from a common start price."""
    universe = make_universe(cfg)
    n = len(universe)
    vol = np.array([cfg.stock_vol] * cfg.n_stocks + [cfg.etf_vol] * cfg.n_etfs)
    drift = np.array([cfg.stock_drift] * cfg.n_stocks + [cfg.etf_drift] * cfg.n_etfs)
    if cfg.include_vxx_like:
        vol[-1], drift[-1] = cfg.vxx_vol, cfg.vxx_drift
    z = standard_normals(cfg.seed, (cfg.n_days - 1) * n).reshape(cfg.n_days - 1, n)
    steps = drift + vol * z
    log_path = np.vstack([np.zeros(n), np.cumsum(steps, axis=0)])
    prices = cfg.start_price * np.exp(log_path)
    meta = {"synthetic": True, "seed": cfg.seed}
    return PriceTable(business_days(cfg.start_date, cfg.n_days), prices, universe, meta), universe
