# %% [markdown]
# # Reference classifiers
#
# Seven binary classifiers written with numpy only. All accept sample
# weights and return a score where higher means more attack-like.

# %%
from catpca import classifiers as clf
from catpca.data import load_mini_kdd
from catpca.metrics import accuracy, auc
from catpca.proposed import fit

train, test = load_mini_kdd()
enc = fit(train, 0.0187, 3)
Xtr, Xte = enc.transform(train), enc.transform(test)

for kind in clf.KINDS:
    model = clf.train(kind, Xtr, train.target, seed=0)
    s = model.decision_function(Xte)
    print(f"{clf.LABELS[kind]:6s} test acc {accuracy(model.predict(Xte), test.target):6.2f}"
          f"  AUC {auc(s, test.target):.4f}")

# %% [markdown]
# A single-tree forest without bootstrapping is the tree itself.

# %%
import numpy as np

forest = clf.RandomForest(n_estimators=1, bootstrap=False, seed=3).fit(Xtr, train.target)
tree = clf.DecisionTree(max_depth=5, max_features=5, seed=3).fit(Xtr, train.target)
print(np.array_equal(forest.decision_function(Xte), tree.decision_function(Xte)))
