# %% [markdown]
# # Ranked probability score: the reference constants
#
# With balanced quintiles (N divisible by 5) the uniform forecast always
# scores 0.16, and a certain forecast of quintile k scores a fixed amount
# that grows towards the extremes.

# %%
import numpy as np

from quasiavg.forecast import uniform_forecast
from quasiavg.rps import check_mean_optimality, decompose_rps, rps_aggregate

rng = np.random.default_rng(0)
E = np.eye(5)
q = np.stack([E[rng.permutation(np.repeat(np.arange(5), 20))] for _ in range(12)])

print("uniform:", rps_aggregate(q, np.broadcast_to(uniform_forecast(100), q.shape)))
for k in range(5):
    print(f"always quintile {k + 1}:", round(rps_aggregate(q, np.broadcast_to(E[k], q.shape)), 12))

# %% [markdown]
# Random certain forecasts average 0.32.

# %%
f = E[rng.integers(0, 5, size=q.shape[:2])]
print("random one-hot:", rps_aggregate(q, f))

# %% [markdown]
# The mean outcome is the best constant forecast, and any forecast
# spread only pays off when it correlates with the outcome.

# %%
samples = E[rng.choice(5, size=500, p=[0.3, 0.1, 0.1, 0.2, 0.3])]
res = check_mean_optimality(samples, 1000, seed=1)
print("optimal forecast", res.optimal_forecast, "worst margin", res.margin)

noisy = rng.dirichlet(np.ones(5) * 5, size=500)
d = decompose_rps(samples, noisy)
print(f"bias {d.bias_term:.4f} - correlation {d.correlation_term:.4f} "
      f"+ variance {d.variance_term:.4f} = {d.mean_rps:.4f}")
