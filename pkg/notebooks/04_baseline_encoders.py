# %% [markdown]
# # Baseline encoders
#
# Sixteen classical schemes share one interface. Widths depend on the
# cardinalities: one-hot adds one column per category, contrast coders one
# fewer, binary a handful of digits, target statistics a single column.

# %%
from catpca.baselines import SCHEMES, contrast_matrix, expected_output_dim, fit_baseline
from catpca.data import load_mini_kdd

train, test = load_mini_kdd()
for scheme in SCHEMES:
    enc = fit_baseline(train, scheme)
    print(f"{scheme:20s} width {enc.output_dim:3d}   NSL-KDD width "
          f"{expected_output_dim(scheme, (3, 70, 11))}")

# %% [markdown]
# Contrast matrices for a 4-level variable.

# %%
for kind in ("sum", "helmert", "backward_difference", "polynomial"):
    print(kind)
    print(contrast_matrix(kind, 4).round(3))

# %% [markdown]
# Leave-one-out and CatBoost use each training row's own label, so the
# training split is encoded differently from any other split.

# %%
loo = fit_baseline(train, "leave_one_out")
print(loo.transform(train, training=True)[:5].ravel())
print(loo.transform(train)[:5].ravel())
