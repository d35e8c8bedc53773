# %% [markdown]
# # Reading NSL-KDD files
#
# NSL-KDD partitions are header-less CSV files: 41 features, the attack
# label and a difficulty score. Three features are categorical. This demo
# uses the small synthetic fixture bundled with the package; swap in
# `KDDTrain+.txt` / `KDDTest+.txt` for the real data.

# %%
from catpca.data import balance_report, load_mini_kdd, unseen_categories

train, test = load_mini_kdd()
print(train.n_rows, "train rows,", test.n_rows, "test rows")
print("categorical:", train.categorical_names)

# %% [markdown]
# Labels other than `normal` count as attacks (class C2, target 1).

# %%
for name, ds in (("train", train), ("test", test)):
    rep = balance_report(ds)
    print(f"{name}: {100 * rep.frac_normal:.2f}% normal, {100 * rep.frac_attack:.2f}% attack,",
          rep.cardinality)

# %% [markdown]
# Categories that only occur in the test split have no training statistics.
# The encoders have to decide what to do with them.

# %%
for var in train.categorical_names:
    print(var, sorted(unseen_categories(train, test, var)))
