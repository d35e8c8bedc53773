# %% [markdown]
# # Grid search over thresholds, component counts and baselines
#
# A sweep evaluates every (encoder configuration, classifier) cell and keeps
# the best cell per encoder on the leaderboard. The same sweep is available
# as `catpca grid configs/mini_kdd.yaml`.

# %%
from pathlib import Path

from catpca import grid

config = Path("configs/mini_kdd.yaml")
if not config.exists():
    config = Path("..") / config
spec = grid.load_config(config)
result = grid.run_grid(spec)
print(grid.summary_text(result, spec))

# %% [markdown]
# Ranking by distance to the ideal point instead of the harmonic mean.

# %%
for rank, (rec, tied) in enumerate(grid.leaderboard(result.records, "mse_accuracy")[:5], 1):
    print(rank, rec.encoder, rec.classifier, round(rec.mse_accuracy, 3), tied)
