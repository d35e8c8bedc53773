# %% [markdown]
# # Train/test trade-off metrics
#
# Besides accuracy and AUC, two summaries reward configurations that do well
# on both splits: half the squared distance to the perfect corner, and the
# harmonic mean of the two values.

# %%
from catpca.metrics import auc, harmonic_avg, mse_to_ideal_accuracy, mse_to_ideal_auc

print(mse_to_ideal_accuracy(90, 80))     # 0.5 * (10^2 + 20^2)
print(mse_to_ideal_auc(0.9, 0.8))
print(harmonic_avg(92.18, 89.11))

# %% [markdown]
# A lopsided pair loses against a balanced one with the same sum.

# %%
for a, b in [(95, 89), (96.3, 79.5)]:
    print((a, b), "mse", round(mse_to_ideal_accuracy(a, b), 2), "harmonic", round(harmonic_avg(a, b), 3))

# %% [markdown]
# AUC is computed from ranks; ties between a positive and a negative count
# one half.

# %%
print(auc([0.1, 0.4, 0.4, 0.8], [0, 0, 1, 1]))
