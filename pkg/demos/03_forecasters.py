# %% [markdown]
# # Comparing the four quintile forecasters
#
# Rolling 3- and 12-period RPS for the uniform benchmark, the per-asset
# temporal average, the stock/ETF class average and their mix.  The
# temporal average needs a long history before it settles, so the market
# here spans 200 four-week periods.

# %%
from quasiavg.forecast import FORECASTERS, forecast_series
from quasiavg.market_data import build_calendar, period_returns
from quasiavg.quintiles import outcomes_from_returns
from quasiavg.rps import rps_report
from quasiavg.synth import SynthConfig, generate_market

table, uni = generate_market(SynthConfig(seed=10, n_days=200 * 20 + 1))
q = outcomes_from_returns(period_returns(table, build_calendar(table)), uni)

reports = {m: rps_report(q, forecast_series(q, uni, m), windows=(3, 12)) for m in FORECASTERS}
for m, r in reports.items():
    last12 = r.rolling[12][-1][1]
    print(f"{m:>9}: aggregate {r.aggregate:.5f}   last 12-period mean {last12:.5f}")

# %% [markdown]
# Share of 12-period windows in which each forecaster beats the benchmark.

# %%
for m in ("temporal", "type", "mixed"):
    wins = sum(v < 0.16 for _, v in reports[m].rolling[12])
    print(f"{m:>9}: {wins}/{len(reports[m].rolling[12])}")
