# %% [markdown]
# # Where do stocks and ETFs land in the return ranking?
#
# Stocks are twice as volatile as ETFs in the synthetic market, so their
# four-week returns fall in the extreme quintiles more often.  A
# high-volatility, negative-drift ETF ("VXX") sits mostly at the bottom.

# %%
import numpy as np

from quasiavg.market_data import build_calendar, period_returns
from quasiavg.quintiles import occupancy, outcomes_from_returns
from quasiavg.synth import SynthConfig, generate_market

table, uni = generate_market(SynthConfig(seed=2022, n_days=20 * 13 + 1, include_vxx_like=True))
q = outcomes_from_returns(period_returns(table, build_calendar(table)), uni)

np.set_printoptions(precision=3, suppress=True)
for label, sel in [("all", None), ("ETF", "ETF"), ("VXX", "VXX"), ("Stock", "Stock")]:
    print(f"{label:>5}", occupancy(q, uni, sel))
