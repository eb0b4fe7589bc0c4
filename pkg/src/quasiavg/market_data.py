"""Price and universe ingestion, the period calendar, and return tables.

Prices live in a dense ``(n_dates, n_assets)`` float array whose column order
is fixed by the :class:`AssetUniverse`.  Day indices used throughout the
package refer to rows of that array.  Daily returns are aligned to
``dates[1:]``, so daily-return row ``t - 1`` is the return realised on day
``t``.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

STOCK = "Stock"
ETF = "ETF"
ASSET_CLASSES = (STOCK, ETF)

PRICES_HEADER = ("date", "asset_id", "close")
UNIVERSE_HEADER = ("asset_id", "class")


class DataError(ValueError):
    """Raised for malformed or inconsistent input data."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class AssetUniverse:
    """Ordered assets with their class (``"Stock"`` or ``"ETF"``)."""

    asset_ids: tuple[str, ...]
    classes: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "asset_ids", tuple(self.asset_ids))
        object.__setattr__(self, "classes", tuple(self.classes))
        if len(self.asset_ids) != len(self.classes):
            raise DataError("asset_ids and classes differ in length")
        if not self.asset_ids:
            raise DataError("universe is empty")
        seen = set()
        for a in self.asset_ids:
            if not a:
                raise DataError("empty asset_id")
            if a in seen:
                raise DataError(f"duplicate asset_id {a!r}")
            seen.add(a)
        for c in self.classes:
            if c not in ASSET_CLASSES:
                raise DataError(f"unknown asset class {c!r}")

    def __len__(self) -> int:
        return len(self.asset_ids)

    def index(self, asset_id: str) -> int:
        return self.asset_ids.index(asset_id)

    def mask(self, cls: str) -> np.ndarray:
        """Boolean mask of members of ``cls``."""
        return np.array([c == cls for c in self.classes], dtype=bool)

    @property
    def is_stock(self) -> np.ndarray:
        return self.mask(STOCK)

    @property
    def is_etf(self) -> np.ndarray:
        return self.mask(ETF)

    def counts(self) -> tuple[int, int]:
        """Number of (stocks, ETFs)."""
        return int(self.is_stock.sum()), int(self.is_etf.sum())


@dataclass(frozen=True)
class PriceTable:
    dates: np.ndarray  # datetime64[D], strictly increasing
    prices: np.ndarray  # (n_dates, n_assets), all > 0
    universe: AssetUniverse
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        dates = np.asarray(self.dates, dtype="datetime64[D]")
        prices = np.asarray(self.prices, dtype=float)
        if prices.ndim != 2 or prices.shape != (len(dates), len(self.universe)):
            raise DataError(
                f"prices shape {prices.shape} does not match "
                f"{len(dates)} dates x {len(self.universe)} assets"
            )
        if len(dates) > 1 and not np.all(dates[1:] > dates[:-1]):
            raise DataError("dates must be strictly increasing")
        if not np.all(np.isfinite(prices)) or not np.all(prices > 0):
            raise DataError("all prices must be finite and positive")
        object.__setattr__(self, "dates", _frozen(dates))
        object.__setattr__(self, "prices", _frozen(prices))

    @property
    def n_dates(self) -> int:
        return self.prices.shape[0]

    @property
    def n_assets(self) -> int:
        return self.prices.shape[1]

    def with_prices(self, prices: np.ndarray) -> "PriceTable":
        return PriceTable(self.dates, prices, self.universe, dict(self.metadata))


@dataclass(frozen=True)
class Period:
    index: int
    start_day: int  # first day whose daily return belongs to the period
    end_day: int  # last such day, inclusive

    @property
    def base_day(self) -> int:
        """Day whose close is the period's base price."""
        return self.start_day - 1

    @property
    def days(self) -> range:
        return range(self.start_day, self.end_day + 1)


@dataclass(frozen=True)
class PeriodCalendar:
    periods: tuple[Period, ...]
    period_len: int
    n_dates: int

    def __len__(self) -> int:
        return len(self.periods)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return PeriodCalendar(self.periods[k], self.period_len, self.n_dates)
        return self.periods[k]

    def __iter__(self):
        return iter(self.periods)

    @property
    def dropped_days(self) -> int:
        return (self.n_dates - 1) - len(self.periods) * self.period_len


# -- CSV ingestion -----------------------------------------------------------


def _open_text(source):
    if isinstance(source, (str, os.PathLike)):
        return open(source, newline="", encoding="utf-8")
    if isinstance(source, io.TextIOBase) or hasattr(source, "read"):
        return source
    raise TypeError(f"cannot read CSV from {type(source).__name__}")


def _read_rows(source, header: tuple[str, ...]) -> Iterable[tuple[int, list[str]]]:
    fh = _open_text(source)
    try:
        reader = csv.reader(fh)
        first = next(reader, None)
        if first is None or tuple(h.strip().lower() for h in first) != header:
            raise DataError(f"line 1: expected header {','.join(header)}, got {first}")
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            yield reader.line_num, row
    finally:
        if fh is not source:
            fh.close()


def load_universe(csv_source) -> AssetUniverse:
    """Read ``asset_id,class`` rows, preserving file order."""
    ids, classes = [], []
    seen = set()
    for line, row in _read_rows(csv_source, UNIVERSE_HEADER):
        if len(row) != 2:
            raise DataError(f"line {line}: expected 2 fields, got {len(row)}")
        asset, cls = row[0].strip(), row[1].strip()
        if not asset:
            raise DataError(f"line {line}: empty asset_id")
        if asset in seen:
            raise DataError(f"line {line}: duplicate asset_id {asset!r}")
        token = {"stock": STOCK, "etf": ETF}.get(cls.lower())
        if token is None:
            raise DataError(f"line {line}: unknown class token {cls!r}")
        seen.add(asset)
        ids.append(asset)
        classes.append(token)
    return AssetUniverse(tuple(ids), tuple(classes))


def load_prices(csv_source, universe) -> PriceTable:
    """Read ``date,asset_id,close`` rows into a dense table.

    ``universe`` is an :class:`AssetUniverse` or a universe CSV source.  Only
    dates on which every asset has a price are kept; the number of dropped
    dates is recorded in ``metadata["dropped_dates"]``.
    """
    if not isinstance(universe, AssetUniverse):
        universe = load_universe(universe)
    col = {a: j for j, a in enumerate(universe.asset_ids)}
    cells: dict[dt.date, dict[int, float]] = {}
    n_rows = 0
    for line, row in _read_rows(csv_source, PRICES_HEADER):
        if len(row) != 3:
            raise DataError(f"line {line}: expected 3 fields, got {len(row)}")
        d_raw, asset, c_raw = (x.strip() for x in row)
        try:
            day = dt.date.fromisoformat(d_raw)
        except ValueError:
            raise DataError(f"line {line}: bad date {d_raw!r}") from None
        try:
            close = float(c_raw)
        except ValueError:
            raise DataError(f"line {line}: bad close {c_raw!r}") from None
        if not math.isfinite(close) or close <= 0:
            raise DataError(f"line {line}: non-positive price {c_raw}")
        j = col.get(asset)
        if j is None:
            raise DataError(f"line {line}: unknown asset_id {asset!r}")
        by_asset = cells.setdefault(day, {})
        if j in by_asset:
            raise DataError(f"line {line}: duplicate row for {asset} on {day}")
        by_asset[j] = close
        n_rows += 1

    n = len(universe)
    full = sorted(d for d, v in cells.items() if len(v) == n)
    if not full:
        raise DataError("no date has prices for every asset")
    prices = np.array([[cells[d][j] for j in range(n)] for d in full], dtype=float)
    meta = {"rows": n_rows, "dates_seen": len(cells), "dropped_dates": len(cells) - len(full)}
    return PriceTable(np.array(full, dtype="datetime64[D]"), prices, universe, meta)


def _atomic_write(path, text: str) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", newline="", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def save_universe(universe: AssetUniverse, path) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(UNIVERSE_HEADER)
    w.writerows(zip(universe.asset_ids, universe.classes))
    _atomic_write(path, buf.getvalue())


def save_prices(table: PriceTable, path) -> None:
    """Write long-format prices; ``repr`` keeps every float bit-exact."""
    buf = io.StringIO()
    buf.write(",".join(PRICES_HEADER) + "\n")
    ids = table.universe.asset_ids
    for d, row in zip(table.dates, table.prices):
        day = str(d)
        for a, p in zip(ids, row):
            buf.write(f"{day},{a},{float(p)!r}\n")
    _atomic_write(path, buf.getvalue())


# -- calendar and returns ----------------------------------------------------


def build_calendar(table: PriceTable | int, period_len: int = 20) -> PeriodCalendar:
    """Split the daily-return days into consecutive blocks of ``period_len``.

    Period ``k`` covers days ``k*L + 1 .. (k+1)*L`` and its base price is the
    close of day ``k*L``.  A trailing partial block is dropped.
    """
    n_dates = table if isinstance(table, int) else table.n_dates
    if period_len < 2:
        raise ValueError("period_len must be >= 2")
    if n_dates < period_len + 1:
        raise DataError(f"need at least {period_len + 1} dates, got {n_dates}")
    n_periods = (n_dates - 1) // period_len
    periods = tuple(
        Period(k, k * period_len + 1, (k + 1) * period_len) for k in range(n_periods)
    )
    return PeriodCalendar(periods, period_len, n_dates)


def period_returns(table: PriceTable, cal: PeriodCalendar) -> np.ndarray:
    """Simple return of each asset over each period, shape ``(n_periods, n_assets)``."""
    if cal.n_dates != table.n_dates:
        raise ValueError("calendar was not built from this table")
    base = np.array([p.base_day for p in cal], dtype=int)
    end = np.array([p.end_day for p in cal], dtype=int)
    return table.prices[end] / table.prices[base] - 1.0


def daily_returns(table: PriceTable) -> np.ndarray:
    """Simple daily returns aligned to ``dates[1:]``."""
    if table.n_dates < 2:
        raise DataError("need at least 2 dates")
    p = table.prices
    return p[1:] / p[:-1] - 1.0


def trailing_ratio(table: PriceTable, day_index: int, horizon: int) -> np.ndarray:
    """``S[day_index-1] / S[day_index-1-horizon]`` for every asset.

    Only closes strictly before ``day_index`` are read.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    back = day_index - 1 - horizon
    if back < 0 or day_index - 1 >= table.n_dates:
        raise DataError(
            f"insufficient history: day {day_index} with horizon {horizon}"
        )
    return table.prices[day_index - 1] / table.prices[back]
