"""Cross-sectional ranks and one-hot quintile outcomes."""

from __future__ import annotations

import numpy as np

from .market_data import AssetUniverse

N_QUINTILES = 5


def rank_assets(returns, universe: AssetUniverse | None = None) -> np.ndarray:
    """Ascending ranks ``1..N``; the highest return gets rank ``N``.

    Ties go to universe order: the earlier asset gets the lower rank.
    """
    r = np.asarray(returns, dtype=float)
    if r.ndim != 1:
        raise ValueError("returns must be a 1-d vector")
    if universe is not None and len(universe) != r.size:
        raise ValueError("one return per universe asset expected")
    if not np.all(np.isfinite(r)):
        raise ValueError("returns must be finite")
    order = np.argsort(r, kind="stable")
    ranks = np.empty(r.size, dtype=int)
    ranks[order] = np.arange(1, r.size + 1)
    return ranks


def quintile_of_rank(ranks, n: int | None = None) -> np.ndarray:
    """Quintile index ``ceil(5 r / N)`` in ``1..5``."""
    ranks = np.asarray(ranks, dtype=int)
    n = ranks.size if n is None else n
    return (N_QUINTILES * ranks + n - 1) // n


def quintile_outcome(ranks) -> np.ndarray:
    """One-hot ``(N, 5)`` membership matrix for a rank vector."""
    ranks = np.asarray(ranks, dtype=int)
    n = ranks.size
    if n < N_QUINTILES:
        raise ValueError(f"need at least {N_QUINTILES} assets, got {n}")
    if not np.array_equal(np.sort(ranks), np.arange(1, n + 1)):
        raise ValueError("ranks must be a permutation of 1..N")
    q = np.zeros((n, N_QUINTILES), dtype=int)
    q[np.arange(n), quintile_of_rank(ranks, n) - 1] = 1
    return q


def outcomes_from_returns(period_rets, universe: AssetUniverse | None = None) -> np.ndarray:
    """Stack of outcomes, shape ``(n_periods, N, 5)``, one per return row."""
    period_rets = np.atleast_2d(np.asarray(period_rets, dtype=float))
    return np.stack([quintile_outcome(rank_assets(r, universe)) for r in period_rets])


def occupancy(outcomes, universe: AssetUniverse, selector=None) -> np.ndarray:
    """Mean quintile membership over the selected assets and all periods.

    ``selector`` is ``None`` (all assets), an asset class name, or an
    ``asset_id``.
    """
    q = np.asarray(outcomes)
    if q.ndim == 2:
        q = q[None]
    if q.shape[0] == 0:
        raise ValueError("need at least one period")
    if selector is None:
        mask = np.ones(len(universe), dtype=bool)
    elif selector in ("Stock", "ETF"):
        mask = universe.mask(selector)
    elif selector in universe.asset_ids:
        mask = np.zeros(len(universe), dtype=bool)
        mask[universe.index(selector)] = True
    else:
        raise ValueError(f"unknown selector {selector!r}")
    if not mask.any():
        raise ValueError(f"selector {selector!r} matches no assets")
    return q[:, mask, :].reshape(-1, N_QUINTILES).mean(axis=0)
