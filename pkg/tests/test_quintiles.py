import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from quasiavg.market_data import build_calendar, period_returns
from quasiavg.quintiles import (
    occupancy,
    outcomes_from_returns,
    quintile_of_rank,
    quintile_outcome,
    rank_assets,
)
from quasiavg.synth import SynthConfig, generate_market

finite = st.floats(-0.9, 5.0, allow_nan=False, allow_subnormal=False)


def test_rank_simple():
    assert rank_assets([0.3, -0.1, 0.0]).tolist() == [3, 1, 2]


def test_rank_ties_follow_universe_order():
    assert rank_assets([0.0, 0.0, 0.0]).tolist() == [1, 2, 3]
    assert rank_assets([0.5, 0.1, 0.5, 0.1]).tolist() == [3, 1, 4, 2]


def test_rank_matches_argsort_oracle():
    r = np.random.default_rng(0).normal(size=100)
    oracle = np.empty(100, dtype=int)
    for rank, i in enumerate(sorted(range(100), key=lambda i: r[i]), start=1):
        oracle[i] = rank
    np.testing.assert_array_equal(rank_assets(r), oracle)


def test_rank_rejects_non_finite():
    with pytest.raises(ValueError):
        rank_assets([0.1, np.nan, 0.2])


@pytest.mark.parametrize("rank, quintile", [(1, 1), (20, 1), (21, 2), (60, 3), (100, 5)])
def test_quintile_of_rank_n100(rank, quintile):
    assert quintile_of_rank([rank], 100)[0] == quintile


def test_quintile_outcome_n5_one_each():
    q = quintile_outcome([3, 1, 5, 2, 4])
    np.testing.assert_array_equal(q.argmax(axis=1) + 1, [3, 1, 5, 2, 4])
    assert q.sum(axis=0).tolist() == [1] * 5


def test_quintile_outcome_balanced_for_100():
    ranks = np.random.default_rng(1).permutation(100) + 1
    assert quintile_outcome(ranks).sum(axis=0).tolist() == [20] * 5


def test_quintile_outcome_errors():
    with pytest.raises(ValueError):
        quintile_outcome([1, 2, 3, 4])
    with pytest.raises(ValueError):
        quintile_outcome([1, 1, 2, 3, 4])


@settings(max_examples=60, deadline=None)
@given(arrays(float, st.integers(5, 60), elements=finite))
def test_outcome_rows_onehot_and_columns_balanced(r):
    q = quintile_outcome(rank_assets(r))
    assert np.all(q.sum(axis=1) == 1)
    cols = q.sum(axis=0)
    assert cols.max() - cols.min() <= 1
    if r.size % 5 == 0:
        assert np.all(cols == r.size // 5)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-90, 500), min_size=5, max_size=40))
def test_outcome_invariant_under_increasing_transform(cents):
    r = np.array(cents) / 100.0
    q = quintile_outcome(rank_assets(r))
    for g in (lambda x: np.exp(3 * x), lambda x: x**3 + 2, lambda x: np.log1p(x)):
        np.testing.assert_array_equal(quintile_outcome(rank_assets(g(r))), q)


def test_occupancy_single_asset():
    q = np.zeros((1, 5, 5), dtype=int)
    q[0, np.arange(5), [1, 0, 2, 3, 4]] = 1
    from quasiavg.market_data import AssetUniverse

    uni = AssetUniverse(tuple("ABCDE"), ("Stock",) * 4 + ("ETF",))
    np.testing.assert_array_equal(occupancy(q, uni, "A"), [0, 1, 0, 0, 0])
    with pytest.raises(ValueError):
        occupancy(q, uni, "Z")


def test_full_universe_occupancy_uniform(market):
    table, uni = market
    q = outcomes_from_returns(period_returns(table, build_calendar(table)), uni)
    np.testing.assert_allclose(occupancy(q, uni), [0.2] * 5, rtol=0, atol=1e-15)
    for t in range(len(q)):
        np.testing.assert_allclose(occupancy(q[t], uni), [0.2] * 5, atol=1e-15)


def test_stocks_fill_extreme_quintiles(market):
    table, uni = market
    q = outcomes_from_returns(period_returns(table, build_calendar(table)), uni)
    stock, etf = occupancy(q, uni, "Stock"), occupancy(q, uni, "ETF")
    assert stock[0] + stock[4] > etf[0] + etf[4]


def test_vxx_like_asset_mostly_bottom_quintile():
    table, uni = generate_market(SynthConfig(seed=4, include_vxx_like=True, n_days=1001))
    q = outcomes_from_returns(period_returns(table, build_calendar(table)), uni)
    vxx = occupancy(q, uni, "VXX")
    assert vxx[0] >= 0.5
    assert vxx[0] > occupancy(q, uni, "ETF")[0]
