# %% [markdown]
# # Per-category class probabilities and indicator states
#
# For every category we count normal (C1) and attack (C2) rows, giving
# `p1 = P(C1 | category)` and `p2 = P(C2 | category)`. A threshold then
# assigns each category one of three indicator states.

# %%
import io

from catpca.data import load_mini_kdd
from catpca.proposed import build_threshold_map, state_for
from catpca.stats import fit_all_stats

train, _ = load_mini_kdd()
stats = fit_all_stats(train)
buf = io.StringIO()
stats[1].dump_csv(buf)
print(buf.getvalue())

# %% [markdown]
# The rule: `(1, 0)` when C1 dominates and the C2 share still exceeds the
# threshold, `(0, 1)` in the mirror case, and `(0, 0)` for near-pure
# categories and exact ties.

# %%
for p1, t in [(0.9, 0.05), (0.9, 0.15), (0.5, 0.1), (0.2, 0.1)]:
    print(f"p1={p1}, threshold={t} ->", state_for(p1, 1 - p1, t))

# %%
tmap = build_threshold_map(stats, 0.0187)
for var in tmap.variables:
    print(var, tmap.states(var))
