import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasiavg.forecast import (
    TemporalConfig,
    check_forecast,
    class_forecast,
    forecast_at,
    forecast_series,
    mixed_forecast,
    temporal_forecast,
    uniform_forecast,
)
from quasiavg.market_data import AssetUniverse, build_calendar, period_returns
from quasiavg.quintiles import outcomes_from_returns


def onehot(quintiles):
    """(T, N, 5) history from a (T, N) array of quintiles 1..5."""
    k = np.asarray(quintiles)
    return (np.arange(1, 6) == k[..., None]).astype(int)


def test_uniform():
    assert uniform_forecast(1).tolist() == [[0.2] * 5]
    f = uniform_forecast(100)
    assert f.shape == (100, 5) and np.all(f == 0.2)
    assert np.all(f.sum(axis=1) == 1.0)


def test_temporal_config_validation():
    TemporalConfig((5, 10, 400), (0.2, 0.2, 0.6))
    for windows, weights in [((5, 5), (0.5, 0.5)), ((5,), (0.5,)), ((5, 10), (1.2, -0.2))]:
        with pytest.raises(ValueError):
            TemporalConfig(windows, weights)


def test_temporal_single_period():
    f = temporal_forecast(onehot([[3]]))
    np.testing.assert_allclose(f, [[0, 0, 1, 0, 0]], atol=1e-15)


def test_temporal_alternating_hand_value():
    # periods 1..10 alternate q1, q5; last five are q5,q1,q5,q1,q5
    h = onehot([[1 if t % 2 else 5] for t in range(1, 11)])
    m5 = np.array([0.4, 0, 0, 0, 0.6])
    m10 = np.array([0.5, 0, 0, 0, 0.5])
    expected = 0.2 * m5 + 0.8 * m10
    np.testing.assert_allclose(expected, [0.48, 0, 0, 0, 0.52])
    np.testing.assert_allclose(temporal_forecast(h)[0], expected, atol=1e-15)


def test_temporal_constant_sequence():
    h = onehot([[2]] * 17)
    for cfg in (TemporalConfig(), TemporalConfig((1, 3), (0.3, 0.7))):
        np.testing.assert_allclose(temporal_forecast(h, cfg), [[0, 1, 0, 0, 0]], atol=1e-15)


def test_temporal_window_one_is_last_outcome():
    h = onehot(np.random.default_rng(3).integers(1, 6, size=(9, 12)))
    np.testing.assert_array_equal(temporal_forecast(h, TemporalConfig((1,), (1.0,))), h[-1])


def test_temporal_empty_history():
    with pytest.raises(ValueError):
        temporal_forecast(np.zeros((0, 3, 5)))


def test_class_forecast_counting():
    stock_q = [1] * 15 + [2] * 5 + [3] * 5 + [4] * 10 + [5] * 15
    etf_q = [1] * 5 + [2] * 15 + [3] * 15 + [4] * 10 + [5] * 5
    uni = AssetUniverse(
        tuple(f"A{i}" for i in range(100)), ("Stock",) * 50 + ("ETF",) * 50
    )
    f = class_forecast(onehot([stock_q + etf_q]), uni)
    np.testing.assert_allclose(f[:50], np.tile([0.3, 0.1, 0.1, 0.2, 0.3], (50, 1)), atol=1e-15)
    np.testing.assert_allclose(f[50:], np.tile([0.1, 0.3, 0.3, 0.2, 0.1], (50, 1)), atol=1e-15)
    # class-size weighted average of the rows is the balanced distribution
    np.testing.assert_allclose(f.mean(axis=0), [0.2] * 5, atol=1e-15)


def test_class_forecast_all_etf_requires_both_classes():
    uni = AssetUniverse(tuple("ABCDE"), ("ETF",) * 5)
    with pytest.raises(ValueError, match="no members"):
        class_forecast(onehot([[1, 2, 3, 4, 5]]), uni)


def test_class_forecast_symmetric_class_is_uniform():
    uni = AssetUniverse(tuple("ABCDEFGHIJ"), ("ETF",) * 5 + ("Stock",) * 5)
    f = class_forecast(onehot([[1, 2, 3, 4, 5, 5, 4, 3, 2, 1]]), uni)
    np.testing.assert_allclose(f, 0.2, atol=1e-15)


def test_class_forecast_k_periods():
    uni = AssetUniverse(tuple("ABCDEF"), ("Stock",) * 3 + ("ETF",) * 3)
    h = onehot([[1, 1, 1, 5, 5, 5], [1, 2, 3, 3, 4, 5], [5, 5, 5, 1, 1, 1]])
    np.testing.assert_allclose(class_forecast(h, uni, k=1)[0], [0, 0, 0, 0, 1])
    np.testing.assert_allclose(class_forecast(h, uni, k=2)[0], [1 / 6, 1 / 6, 1 / 6, 0, 0.5])
    with pytest.raises(ValueError):
        class_forecast(h, uni, k=4)


def test_mixed():
    u = uniform_forecast(4)
    np.testing.assert_array_equal(mixed_forecast(u, u), u)
    a = np.array([[1.0, 0, 0, 0, 0]])
    b = np.array([[0.0, 0, 0, 0, 1]])
    np.testing.assert_array_equal(mixed_forecast(a, b), [[0.5, 0, 0, 0, 0.5]])
    np.testing.assert_allclose(mixed_forecast(a, b, 0.25), [[0.25, 0, 0, 0, 0.75]])
    with pytest.raises(ValueError):
        mixed_forecast(a, uniform_forecast(2))


def test_mixed_of_real_forecasters_sums_to_one(market):
    table, uni = market
    q = outcomes_from_returns(period_returns(table, build_calendar(table)), uni)
    f = mixed_forecast(class_forecast(q[:20], uni), temporal_forecast(q[:20]))
    np.testing.assert_allclose(f.sum(axis=1), 1.0, rtol=0, atol=1e-12)


def test_cold_start_is_uniform():
    uni = AssetUniverse(tuple("ABCDE"), ("Stock",) * 3 + ("ETF",) * 2)
    for m in ("benchmark", "temporal", "type", "mixed"):
        np.testing.assert_array_equal(forecast_at(m, [], uni), uniform_forecast(5))
    with pytest.raises(ValueError):
        forecast_at("oracle", [], uni)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(1, 30),
    st.integers(5, 15),
    st.sampled_from(["benchmark", "temporal", "type", "mixed"]),
    st.integers(0, 2**32 - 1),
)
def test_every_forecaster_emits_simplex_rows(T, n, method, seed):
    rng = np.random.default_rng(seed)
    uni = AssetUniverse(tuple(f"A{i}" for i in range(n)), ("Stock", "ETF") * (n // 2) + ("Stock",) * (n % 2))
    h = onehot(rng.integers(1, 6, size=(T, n)))
    f = forecast_at(method, h, uni)
    check_forecast(f, tol=1e-12)
    if method in ("type",):
        for cls in ("Stock", "ETF"):
            rows = f[uni.mask(cls)]
            assert np.all(rows == rows[0])


def test_forecast_series_has_no_look_ahead(market):
    table, uni = market
    q = outcomes_from_returns(period_returns(table, build_calendar(table)), uni)
    full = forecast_series(q, uni, "mixed")
    scrambled = q.copy()
    scrambled[30:] = scrambled[30:, ::-1]
    again = forecast_series(scrambled, uni, "mixed")
    np.testing.assert_array_equal(full[:31], again[:31])
    assert not np.array_equal(full[31:], again[31:])
