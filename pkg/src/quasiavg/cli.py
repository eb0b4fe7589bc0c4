"""Command-line entry point: ``quasiavg {synth,forecast,score,backtest}``.

Exit codes: 0 success, 1 validation error, 2 I/O error.  All outputs are
written atomically and are byte-identical for identical inputs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import forecast as fc
from .market_data import (
    DataError,
    _atomic_write,
    build_calendar,
    load_prices,
    load_universe,
    period_returns,
    save_prices,
    save_universe,
)
from .perf import STRATEGIES, backtest
from .portfolio import RttConfig, ShortLeg
from .quintiles import outcomes_from_returns
from .rps import rps_report
from .synth import SynthConfig, generate_market

log = logging.getLogger("quasiavg")

EXIT_OK, EXIT_VALIDATION, EXIT_IO = 0, 1, 2


@dataclass
class RunConfig:
    prices: str | None = None
    universe: str | None = None
    out: str = "."
    period_len: int = 20
    forecaster: str = "all"
    forecasts: str | None = None
    temporal_windows: list[int] = field(default_factory=lambda: [5, 10, 400])
    temporal_weights: list[float] = field(default_factory=lambda: [0.2, 0.2, 0.6])
    class_k: int = 1
    mix_weight: float = 0.5
    rtt: dict = field(default_factory=dict)
    strategy: str = "all"
    short_leg: str = "etfs"
    long_frac: float = 2.0 / 3.0
    short_frac: float = 1.0 / 3.0
    windows: list[int] | None = None
    seed: int | None = None
    synth: dict = field(default_factory=dict)

    def temporal(self) -> fc.TemporalConfig:
        return fc.TemporalConfig(tuple(self.temporal_windows), tuple(self.temporal_weights))

    def rtt_config(self) -> RttConfig:
        return RttConfig(**self.rtt)

    def synth_config(self) -> SynthConfig:
        kw = dict(self.synth)
        if self.seed is not None:
            kw["seed"] = self.seed
        return SynthConfig(**kw)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _num(x):
    x = float(x)
    return repr(x) if math.isfinite(x) else ""


def _write_json(path: Path, obj) -> None:
    _atomic_write(path, json.dumps(obj, indent=2, allow_nan=False) + "\n")


def _load(cfg: RunConfig):
    if not cfg.prices or not cfg.universe:
        raise DataError("--prices and --universe are required")
    for p in (cfg.prices, cfg.universe):
        if not Path(p).is_file():
            raise FileNotFoundError(p)
    universe = load_universe(cfg.universe)
    table = load_prices(cfg.prices, universe)
    return table, build_calendar(table, cfg.period_len)


def _metadata(table, cal) -> dict:
    return {
        "n_assets": table.n_assets,
        "n_dates": table.n_dates,
        "first_date": str(table.dates[0]),
        "last_date": str(table.dates[-1]),
        "rows": table.metadata.get("rows"),
        "dropped_dates": table.metadata.get("dropped_dates", 0),
        "period_len": cal.period_len,
        "n_periods": len(cal),
        "dropped_trailing_days": cal.dropped_days,
    }


def _forecasters(name: str) -> list[str]:
    return list(fc.FORECASTERS) if name == "all" else [name]


# -- commands ----------------------------------------------------------------


def cmd_synth(cfg: RunConfig) -> list[Path]:
    table, universe = generate_market(cfg.synth_config())
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    save_prices(table, out / "prices.csv")
    save_universe(universe, out / "universe.csv")
    return [out / "prices.csv", out / "universe.csv"]


def _outcomes(table, cal):
    return outcomes_from_returns(period_returns(table, cal), table.universe)


def _all_forecasts(name, outcomes, universe, cfg: RunConfig) -> np.ndarray:
    """Forecasts for every calendar period plus the next, unobserved one."""
    kw = dict(temporal=cfg.temporal(), k=cfg.class_k, mix_weight=cfg.mix_weight)
    return np.stack(
        [fc.forecast_at(name, outcomes[:t], universe, **kw) for t in range(len(outcomes) + 1)]
    )


def cmd_forecast(cfg: RunConfig) -> list[Path]:
    table, cal = _load(cfg)
    ids = table.universe.asset_ids
    q = _outcomes(table, cal)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    rows = [
        [t, a, *(int(x) for x in q[t, i])] for t in range(len(q)) for i, a in enumerate(ids)
    ]
    path = out / "outcomes.csv"
    _atomic_write(path, _csv_text(["period", "asset_id", "q1", "q2", "q3", "q4", "q5"], rows))
    written.append(path)
    for name in _forecasters(cfg.forecaster):
        f = _all_forecasts(name, q, table.universe, cfg)
        rows = [[t, a, *map(_num, f[t, i])] for t in range(len(f)) for i, a in enumerate(ids)]
        path = out / f"forecast_{name}.csv"
        _atomic_write(path, _csv_text(["period", "asset_id", "f1", "f2", "f3", "f4", "f5"], rows))
        written.append(path)
    return written


def read_forecast_csv(path, universe, n_periods: int) -> np.ndarray:
    """Read ``period,asset_id,f1..f5`` rows into a ``(n_periods, N, 5)`` array."""
    col = {a: j for j, a in enumerate(universe.asset_ids)}
    f = np.full((n_periods, len(universe), 5), np.nan)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["period", "asset_id", "f1", "f2", "f3", "f4", "f5"]:
            raise DataError(f"{path}: bad forecast header {header}")
        for row in reader:
            if not row:
                continue
            try:
                t, a, probs = int(row[0]), row[1], [float(x) for x in row[2:7]]
            except (ValueError, IndexError):
                raise DataError(f"{path}:{reader.line_num}: malformed row") from None
            if a not in col:
                raise DataError(f"{path}:{reader.line_num}: unknown asset_id {a!r}")
            if 0 <= t < n_periods:
                f[t, col[a]] = probs
    if np.isnan(f).any():
        raise DataError(f"{path}: forecasts do not cover every (period, asset)")
    return f


def cmd_score(cfg: RunConfig) -> list[Path]:
    table, cal = _load(cfg)
    q = _outcomes(table, cal)
    windows = cfg.windows or [3, 12]
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)

    if cfg.forecasts:
        sets = {"submitted": read_forecast_csv(cfg.forecasts, table.universe, len(q))}
    else:
        sets = {
            name: _all_forecasts(name, q, table.universe, cfg)[: len(q)]
            for name in _forecasters(cfg.forecaster)
        }
    reports = {name: rps_report(q, f, windows) for name, f in sets.items()}
    periods = [p.index for p in cal]
    doc = {"metadata": _metadata(table, cal), "windows": list(windows)}
    if len(reports) == 1:
        doc.update(next(iter(reports.values())).to_dict(periods))
        doc["forecaster"] = next(iter(reports))
    else:
        doc["forecasters"] = {n: r.to_dict(periods) for n, r in reports.items()}
    written = [out / "rps_report.json"]
    _write_json(written[0], doc)

    names = list(reports)
    per_rows = [[periods[t], *(_num(reports[n].per_period[t]) for n in names)] for t in range(len(q))]
    path = out / "rps_per_period.csv"
    _atomic_write(path, _csv_text(["period", *names], per_rows))
    written.append(path)
    for w in windows:
        if w > len(q):
            continue
        rows = []
        for pos, (t, _) in enumerate(reports[names[0]].rolling[w]):
            rows.append([periods[t], *(_num(reports[n].rolling[w][pos][1]) for n in names)])
        path = out / f"rps_rolling_{w}.csv"
        _atomic_write(path, _csv_text(["period", *names], rows))
        written.append(path)
    return written


def _runs(cfg: RunConfig) -> list[tuple[str, ShortLeg]]:
    strategies = list(STRATEGIES) if cfg.strategy == "all" else [cfg.strategy]
    legs = list(ShortLeg) if cfg.short_leg == "all" else [ShortLeg(cfg.short_leg)]
    runs = []
    for s in strategies:
        if s == "compensated":
            runs.extend((s, leg) for leg in legs)
        else:
            runs.append((s, ShortLeg.ETFS))
    return runs


def cmd_backtest(cfg: RunConfig) -> list[Path]:
    table, cal = _load(cfg)
    windows = cfg.windows or [3, 12, 24, 48]
    rtt = cfg.rtt_config()
    reports = [
        backtest(s, table, cal, rtt, leg, cfg.long_frac, cfg.short_frac, windows)
        for s, leg in _runs(cfg)
    ]
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    doc = {
        "metadata": _metadata(table, cal),
        "rtt": asdict(rtt),
        "reports": [r.to_dict() for r in reports],
    }
    written.append(out / "backtest.json")
    _write_json(written[0], doc)

    ids = table.universe.asset_ids
    for r in reports:
        rows = [
            [p, a, f"{float(x):.12g}"]
            for p, w in zip(r.periods, r.schedule)
            for a, x in zip(ids, w.w)
        ]
        path = out / f"weights_{r.strategy}.csv"
        _atomic_write(path, _csv_text(["period", "asset_id", "weight"], rows))
        written.append(path)

    for w in windows:
        if any(w not in r.rolling for r in reports):
            continue
        header = ["period"]
        for r in reports:
            header += [f"{r.strategy}_ret", f"{r.strategy}_ir"]
        rows = []
        for pos, pt in enumerate(reports[0].rolling[w]):
            row = [pt.period]
            for r in reports:
                row += [_num(r.rolling[w][pos].ret), _num(r.rolling[w][pos].ir)]
            rows.append(row)
        path = out / f"backtest_rolling_{w}.csv"
        _atomic_write(path, _csv_text(header, rows))
        written.append(path)
    return written


COMMANDS = {
    "synth": cmd_synth,
    "forecast": cmd_forecast,
    "score": cmd_score,
    "backtest": cmd_backtest,
}


# -- argument handling -------------------------------------------------------


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig fields")
    common.add_argument("--prices")
    common.add_argument("--universe")
    common.add_argument("--out")
    common.add_argument("--period-len", type=int, dest="period_len")
    common.add_argument("--windows", type=_int_list)
    common.add_argument("--seed", type=int)
    common.add_argument(
        "--forecaster", choices=[*fc.FORECASTERS, "all"], help="default: all"
    )
    common.add_argument("--forecasts", help="score this forecast CSV instead")
    common.add_argument("--strategy", choices=[*STRATEGIES, "all"], help="default: all")
    common.add_argument(
        "--short-leg", dest="short_leg", choices=[*(l.value for l in ShortLeg), "all"]
    )
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="quasiavg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("synth", parents=[common], help="write a synthetic prices/universe pair")
    sub.add_parser("forecast", parents=[common], help="write per-period quintile forecasts")
    sub.add_parser("score", parents=[common], help="RPS report for the forecasters")
    sub.add_parser("backtest", parents=[common], help="rolling return/IR of the portfolios")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            raw = json.load(fh)
        known = {f.name for f in fields(RunConfig)}
        unknown = set(raw) - known
        if unknown:
            raise DataError(f"unknown config keys: {sorted(unknown)}")
        cfg = replace(cfg, **raw)
    overrides = {
        k: v
        for k, v in vars(args).items()
        if k in {f.name for f in fields(RunConfig)} and v is not None
    }
    return replace(cfg, **overrides)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
    )
    try:
        cfg = resolve_config(args)
        written = COMMANDS[args.command](cfg)
    except OSError as exc:
        print(f"quasiavg: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DataError, ValueError, TypeError) as exc:
        print(f"quasiavg: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    for path in written:
        log.info("wrote %s", path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
