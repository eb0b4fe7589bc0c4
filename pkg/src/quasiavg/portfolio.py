"""Portfolio weights: equal-weight benchmark, regression to the trend, compensated."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .market_data import AssetUniverse, PriceTable, trailing_ratio
from .quintiles import rank_assets


class ShortLeg(enum.Enum):
    ETFS = "etfs"
    STOCKS = "stocks"
    BOTH = "both"

    def mask(self, universe: AssetUniverse) -> np.ndarray:
        if self is ShortLeg.ETFS:
            return universe.is_etf
        if self is ShortLeg.STOCKS:
            return universe.is_stock
        return np.ones(len(universe), dtype=bool)


@dataclass(frozen=True)
class RttConfig:
    long_horizon_days: int = 120
    short_horizon_days: int = 40
    long_rank_pct: float = 0.50
    short_rank_pct: float = 0.85

    def __post_init__(self):
        if self.long_horizon_days < 1 or self.short_horizon_days < 1:
            raise ValueError("horizons must be >= 1")
        if not 0 < self.long_rank_pct < self.short_rank_pct <= 1:
            raise ValueError("need 0 < long_rank_pct < short_rank_pct <= 1")

    @property
    def max_horizon(self) -> int:
        return max(self.long_horizon_days, self.short_horizon_days)

    def cutoffs(self, n: int) -> tuple[int, int]:
        """Rank thresholds ``(long, short)``: keep long-rank > long, short-rank <= short."""
        # half-up rounding / floor; the epsilon absorbs binary error in pct * n
        long_cut = math.floor(self.long_rank_pct * n + 0.5 + 1e-9)
        short_cut = math.floor(self.short_rank_pct * n + 1e-9)
        return long_cut, short_cut


@dataclass(frozen=True)
class PortfolioWeights:
    w: np.ndarray
    fallback: bool = False  # RtT selected nothing; equal weight over stocks instead

    def __post_init__(self):
        w = np.array(self.w, dtype=float)
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    @property
    def gross(self) -> float:
        return float(np.abs(self.w).sum())

    @property
    def net(self) -> float:
        return float(self.w.sum())

    @property
    def long_exposure(self) -> float:
        return float(self.w[self.w > 0].sum())

    @property
    def short_exposure(self) -> float:
        return float(-self.w[self.w < 0].sum())


def _equal_over(mask: np.ndarray) -> np.ndarray:
    w = np.zeros(mask.size)
    w[mask] = 1.0 / mask.sum()
    return w


def benchmark_weights(universe: AssetUniverse) -> PortfolioWeights:
    return PortfolioWeights(np.full(len(universe), 1.0 / len(universe)))


def rtt_selection(table: PriceTable, day_index: int, cfg: RttConfig = RttConfig()) -> np.ndarray:
    """Boolean mask of stocks passing the long-trend and short-overshoot gates."""
    n = table.n_assets
    long_ranks = rank_assets(trailing_ratio(table, day_index, cfg.long_horizon_days))
    short_ranks = rank_assets(trailing_ratio(table, day_index, cfg.short_horizon_days))
    long_cut, short_cut = cfg.cutoffs(n)
    return table.universe.is_stock & (long_ranks > long_cut) & (short_ranks <= short_cut)


def rtt_weights(table: PriceTable, day_index: int, cfg: RttConfig = RttConfig()) -> PortfolioWeights:
    """Equal weights over the selected stocks, using closes before ``day_index``.

    Ranks run over the whole universe (ETFs included).  An empty selection
    falls back to equal weight over all stocks with ``fallback=True``.
    """
    selected = rtt_selection(table, day_index, cfg)
    if selected.any():
        return PortfolioWeights(_equal_over(selected))
    stocks = table.universe.is_stock
    if not stocks.any():
        raise ValueError("universe has no stocks")
    return PortfolioWeights(_equal_over(stocks), fallback=True)


def compensated_weights(
    long: PortfolioWeights,
    universe: AssetUniverse,
    leg: ShortLeg | str = ShortLeg.ETFS,
    long_frac: float = 2.0 / 3.0,
    short_frac: float = 1.0 / 3.0,
) -> PortfolioWeights:
    """``long_frac * long - short_frac * (equal weight over the short leg)``."""
    leg = ShortLeg(leg)
    mask = leg.mask(universe)
    if long.w.size != len(universe):
        raise ValueError("long weights do not match the universe")
    if not mask.any():
        raise ValueError(f"short leg {leg.value} is empty")
    w = long_frac * long.w
    if short_frac:
        w = w - short_frac * _equal_over(mask)
    return PortfolioWeights(w, fallback=long.fallback)
