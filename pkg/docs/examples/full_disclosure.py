# ---
# jupyter:
#   jupytext:
#     cell_metadata_filter: -all
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.3'
#       jupytext_version: 1.11.2
#   kernelspec:
#     display_name: rijax
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Full disclosure
#
# In this notebook we check when both senders disclosing everything is an
# equilibrium, and look at the receiver's payoff envelope behind the answer.

# %%
from jax import config

config.update("jax_enable_x64", True)

from jaxtyping import install_import_hook
import matplotlib.pyplot as plt
import numpy as np

with install_import_hook("rijax", "beartype.beartype"):
    import rijax as rx

# %% [markdown]
# ## The receiver's best response
#
# With $`k = 1`$ and a common prior of one half, the receiver learns
# $`\{1/4, 3/4\}`$ about the first sender she visits and stops afterwards.

# %%
params = rx.ModelParams(k=1.0, mu=0.5)
full = rx.DiscreteBeliefDistribution.full_information(0.5)
strategy = rx.best_response(full, full, params)
print(strategy.stage1.distribution, strategy.value)

# %% [markdown]
# ## The stage-1 payoff and its envelope
#
# The payoff of ending stage 1 at posterior $`y`$ is affine between
# $`\mu - 1/(4k)`$ and $`\mu + 1/(4k)`$, so every garbling supported there is
# optimal.

# %%
f = rx.SampledFunction.from_callable(lambda y: rx.stage1_value(y, params), 0.0, 1.0, n=401)
envelope = rx.concave_envelope(f)

fig, ax = plt.subplots(figsize=(7, 3.5))
ax.plot(f.grid, f.values, label="stage-1 payoff")
ax.plot(f.grid, envelope.envelope, "--", label="concave envelope")
ax.axvspan(0.25, 0.75, alpha=0.1)
ax.set_xlabel("posterior")
ax.legend()

# %% [markdown]
# ## Where full disclosure survives
#
# Sweeping the prior at a few cost levels reproduces the region
# $`k > 1/2`$, $`\mu \in [1/(4k), 1 - 1/(4k)]`$.

# %%
search = rx.DeviationSearchConfig(step=0.02)
mus = np.linspace(0.05, 0.95, 19)
for k in (0.75, 1.0, 2.0):
    verdicts = [
        rx.check_full_info(rx.ModelParams(k=k, mu=float(m), grid_points=401), search).verdict
        for m in mus
    ]
    print(k, "".join("E" if v == "equilibrium" else "." for v in verdicts))
