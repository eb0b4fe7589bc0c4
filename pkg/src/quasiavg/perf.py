"""Portfolio return series, log returns, information ratio and backtests."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .market_data import DataError, PeriodCalendar, PriceTable, build_calendar, daily_returns
from .portfolio import (
    PortfolioWeights,
    RttConfig,
    ShortLeg,
    benchmark_weights,
    compensated_weights,
    rtt_weights,
)

STRATEGIES = ("benchmark", "rtt", "compensated")
DEFAULT_WINDOWS = (3, 12, 24, 48)


@dataclass(frozen=True)
class PortfolioReturnSeries:
    days: np.ndarray  # day indices into the price table
    periods: np.ndarray  # period index of each day
    values: np.ndarray  # simple portfolio return of each day

    def __len__(self) -> int:
        return self.values.size

    def for_periods(self, first: int, last: int) -> np.ndarray:
        """Daily returns of periods ``first..last`` inclusive."""
        sel = (self.periods >= first) & (self.periods <= last)
        return self.values[sel]


@dataclass(frozen=True)
class IrReport:
    ret: float
    sdp: float
    ir: float
    window: tuple[int, int]
    rolling: dict = field(default_factory=dict)


@dataclass(frozen=True)
class RollingPoint:
    period: int
    ret: float
    ir: float  # nan when the window has zero spread but nonzero return


def portfolio_daily_returns(schedule, daily, cal: PeriodCalendar) -> PortfolioReturnSeries:
    """Day-by-day return of target weights held (rebalanced daily) within each period.

    ``schedule`` is a sequence aligned with ``cal`` or a mapping from period
    index to weights.  ``daily`` is aligned to ``dates[1:]``.
    """
    daily = np.asarray(daily, dtype=float)
    days, periods, values = [], [], []
    for pos, period in enumerate(cal):
        if isinstance(schedule, dict):
            w = schedule.get(period.index)
        else:
            w = schedule[pos] if pos < len(schedule) else None
        if w is None:
            raise ValueError(f"missing weights for period {period.index}")
        w = w.w if isinstance(w, PortfolioWeights) else np.asarray(w, dtype=float)
        block = daily[period.start_day - 1 : period.end_day]
        if block.shape[0] != len(period.days) or block.shape[1] != w.size:
            raise ValueError("daily returns do not cover the calendar")
        values.append((block * w).sum(axis=1))
        days.extend(period.days)
        periods.extend([period.index] * len(period.days))
    return PortfolioReturnSeries(
        np.array(days, dtype=int), np.array(periods, dtype=int), np.concatenate(values)
    )


def _values(series) -> np.ndarray:
    if isinstance(series, PortfolioReturnSeries):
        return series.values
    return np.asarray(series, dtype=float)


def cum_log_return(series, start: int = 0, stop: int | None = None) -> float:
    """Continuously compounded return ``sum(log(1 + r))`` over ``[start, stop)``."""
    r = _values(series)[start:stop]
    if r.size == 0:
        raise ValueError("empty range")
    if np.any(r <= -1):
        raise ValueError("daily return <= -1 has no log return")
    return float(np.log1p(r).sum())


def sample_std(r) -> float:
    """Sample standard deviation (n - 1); exactly zero for a constant series."""
    r = np.asarray(r, dtype=float)
    if np.all(r == r[0]):
        return 0.0
    return float(np.std(r, ddof=1))


def information_ratio(series, start: int = 0, stop: int | None = None) -> IrReport:
    """Log return over the range divided by the sample std of the daily returns."""
    r = _values(series)[start:stop]
    if r.size < 2:
        raise ValueError("need at least 2 days")
    ret = cum_log_return(r)
    sdp = sample_std(r)
    if sdp == 0.0:
        if ret != 0.0:
            raise ValueError("zero sdp with nonzero return")
        ir = 0.0
    else:
        ir = ret / sdp
    stop = len(_values(series)) if stop is None else stop
    return IrReport(ret, sdp, ir, (start, stop))


def rolling_performance(series: PortfolioReturnSeries, windows=DEFAULT_WINDOWS):
    """Return and IR over every run of ``W`` consecutive periods in the series.

    Returns ``(points, skipped)``: ``points[W]`` is a list of
    :class:`RollingPoint` keyed by the window's last period; windows longer
    than the series are listed in ``skipped``.
    """
    period_ids = list(dict.fromkeys(series.periods.tolist()))
    points, skipped = {}, []
    for w in windows:
        if w < 1 or w > len(period_ids):
            skipped.append(int(w))
            continue
        pts = []
        for end in range(w - 1, len(period_ids)):
            r = series.for_periods(period_ids[end - w + 1], period_ids[end])
            ret = cum_log_return(r)
            sdp = sample_std(r) if r.size > 1 else 0.0
            if sdp > 0:
                ir = ret / sdp
            else:
                ir = 0.0 if ret == 0.0 else math.nan
            pts.append(RollingPoint(period_ids[end], ret, ir))
        points[int(w)] = pts
    return points, skipped


@dataclass
class BacktestReport:
    strategy: str
    periods: list[int]
    schedule: list[PortfolioWeights]
    series: PortfolioReturnSeries
    rolling: dict[int, list[RollingPoint]]
    flags: list[str] = field(default_factory=list)
    skipped_windows: list[int] = field(default_factory=list)

    @property
    def total(self) -> IrReport:
        return information_ratio(self.series.values) if len(self.series) > 1 else None

    def to_dict(self) -> dict:
        def num(x):
            return None if not math.isfinite(x) else float(x)

        return {
            "strategy": self.strategy,
            "periods": [int(p) for p in self.periods],
            "windows": {
                str(w): [{"period": p.period, "ret": num(p.ret), "ir": num(p.ir)} for p in pts]
                for w, pts in self.rolling.items()
            },
            "flags": list(self.flags),
            "skipped_windows": list(self.skipped_windows),
        }


def first_tradable_period(cal: PeriodCalendar, rtt: RttConfig = RttConfig()) -> int:
    """Position of the first period with enough history for the RtT horizons."""
    for pos, period in enumerate(cal):
        if period.start_day - 1 - rtt.max_horizon >= 0:
            return pos
    raise DataError(
        f"insufficient history: no period has {rtt.max_horizon} prior days"
    )


def strategy_label(strategy: str, leg: ShortLeg | str | None = None) -> str:
    if strategy == "compensated":
        return f"compensated_{ShortLeg(leg or ShortLeg.ETFS).value}"
    return strategy


def backtest(
    strategy: str,
    table: PriceTable,
    cal: PeriodCalendar | None = None,
    rtt: RttConfig = RttConfig(),
    leg: ShortLeg | str = ShortLeg.ETFS,
    long_frac: float = 2.0 / 3.0,
    short_frac: float = 1.0 / 3.0,
    windows=DEFAULT_WINDOWS,
    first_period: int | None = None,
) -> BacktestReport:
    """Weights -> daily returns -> rolling ret/IR for one strategy.

    Rebalancing happens at the start of each period from closes up to the
    prior day.  All strategies start at the first period with enough history
    for the RtT horizons so their series line up.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    cal = build_calendar(table) if cal is None else cal
    start = first_tradable_period(cal, rtt) if first_period is None else first_period
    live = cal[start:]
    if len(live) == 0:
        raise DataError("no periods left after warm-up")
    universe = table.universe
    schedule, flags = [], []
    for period in live:
        if strategy == "benchmark":
            w = benchmark_weights(universe)
        else:
            w = rtt_weights(table, period.start_day, rtt)
            if w.fallback:
                flags.append(f"empty_selection:period={period.index}")
            if strategy == "compensated":
                w = compensated_weights(w, universe, leg, long_frac, short_frac)
        schedule.append(w)
    series = portfolio_daily_returns(schedule, daily_returns(table), live)
    rolling, skipped = rolling_performance(series, windows)
    for w in skipped:
        flags.append(f"window_skipped:{w}")
    return BacktestReport(
        strategy_label(strategy, leg),
        [p.index for p in live],
        schedule,
        series,
        rolling,
        flags,
        skipped,
    )
