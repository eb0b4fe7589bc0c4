"""Quasi-average quintile forecasting and regression-to-the-trend backtesting."""

from .forecast import (
    TemporalConfig,
    class_forecast,
    forecast_at,
    forecast_series,
    mixed_forecast,
    temporal_forecast,
    uniform_forecast,
)
from .market_data import (
    AssetUniverse,
    DataError,
    PeriodCalendar,
    PriceTable,
    build_calendar,
    daily_returns,
    load_prices,
    load_universe,
    period_returns,
    save_prices,
    save_universe,
    trailing_ratio,
)
from .perf import (
    BacktestReport,
    IrReport,
    PortfolioReturnSeries,
    backtest,
    cum_log_return,
    information_ratio,
    portfolio_daily_returns,
    rolling_performance,
)
from .portfolio import (
    PortfolioWeights,
    RttConfig,
    ShortLeg,
    benchmark_weights,
    compensated_weights,
    rtt_weights,
)
from .quintiles import occupancy, outcomes_from_returns, quintile_outcome, rank_assets
from .rps import (
    RpsDecomposition,
    RpsReport,
    check_mean_optimality,
    decompose_rps,
    per_period_rps,
    rolling_rps,
    rps_aggregate,
    rps_asset,
    rps_matrix,
    rps_report,
)
from .synth import SynthConfig, generate_market

__version__ = "0.1.0"
