import numpy as np
import pytest

from catpca import serialize
from catpca.baselines import (
    CONTRASTS, SCHEMES, TARGET_FAMILY, contrast_matrix, expected_output_dim,
    fit_baseline, hash_bucket, n_digits,
)
from catpca.data import Dataset

NSLKDD_CARDS = (3, 70, 11)


@pytest.fixture(scope="module")
def kdd_shaped():
    """Three variables with the NSL-KDD train cardinalities."""
    rng = np.random.default_rng(0)
    cols, n = {}, 400
    for name, c in zip(("protocol_type", "service", "flag"), NSLKDD_CARDS):
        col = np.concatenate([np.arange(c), rng.integers(0, c, n - c)])
        cols[name] = [f"{name[0]}{v}" for v in col]
    target = rng.integers(0, 2, n)
    return Dataset.from_categorical(cols, target)


@pytest.fixture(scope="module")
def toy():
    # a: 3 rows (2 attack), b: 1 row (attack), c: 2 rows (normal)
    return Dataset.from_categorical({"v": list("aaabcc")}, [1, 1, 0, 1, 0, 0])


@pytest.fixture(scope="module")
def toy_unseen():
    return Dataset.from_categorical({"v": ["zz", "a"]}, [0, 1])


class TestDimensions:
    @pytest.mark.parametrize("scheme, dim", [
        ("one_hot", 84), ("sum", 81), ("helmert", 81), ("backward_difference", 81),
        ("polynomial", 81), ("binary", 13), ("base_n", 13), ("hashing", 8),
        ("ordinal", 3), ("count", 3), ("target", 3), ("woe", 3), ("james_stein", 3),
        ("m_estimate", 3), ("leave_one_out", 3), ("catboost", 3),
    ])
    def test_nslkdd_table(self, scheme, dim, kdd_shaped):
        assert expected_output_dim(scheme, NSLKDD_CARDS) == dim
        enc = fit_baseline(kdd_shaped, scheme)
        assert enc.output_dim == dim
        assert enc.transform(kdd_shaped).shape == (kdd_shaped.n_rows, dim)
        assert len(enc.column_names) == dim

    def test_every_scheme_listed(self):
        assert len(SCHEMES) == 16

    @pytest.mark.parametrize("c, base, digits", [(1, 2, 1), (2, 2, 2), (3, 2, 2), (4, 2, 3),
                                                 (70, 2, 7), (11, 2, 4), (70, 3, 4), (8, 8, 2)])
    def test_digits(self, c, base, digits):
        assert n_digits(c, base) == digits
        # oracle: length of the base representation of the largest code
        assert len(np.base_repr(c, base)) == digits


class TestUnseenPolicy:
    def test_one_hot(self, toy, toy_unseen):
        X = fit_baseline(toy, "one_hot").transform(toy_unseen)
        assert X[0].tolist() == [0, 0, 0]
        assert X[1].tolist() == [1, 0, 0]

    def test_one_hot_exactly_one(self, toy):
        X = fit_baseline(toy, "one_hot").transform(toy)
        assert (X.sum(axis=1) == 1).all()

    @pytest.mark.parametrize("scheme", ["binary", "base_n", *CONTRASTS])
    def test_zero_block(self, scheme, toy, toy_unseen):
        X = fit_baseline(toy, scheme).transform(toy_unseen)
        assert not X[0].any()
        assert X[1].any()

    def test_ordinal(self, toy, toy_unseen):
        enc = fit_baseline(toy, "ordinal")
        assert enc.transform(toy).ravel().tolist() == [1, 1, 1, 2, 3, 3]
        assert enc.transform(toy_unseen).ravel().tolist() == [0, 1]

    def test_count(self, toy, toy_unseen):
        enc = fit_baseline(toy, "count")
        assert enc.transform(toy).ravel().tolist() == [3, 3, 3, 1, 2, 2]
        assert enc.transform(toy_unseen).ravel().tolist() == [0, 3]

    def test_count_five(self):
        train = Dataset.from_categorical({"v": list("xxxxxy")}, [0, 1, 0, 1, 0, 1])
        test = Dataset.from_categorical({"v": ["x"]}, [1])
        enc = fit_baseline(train, "count")
        assert enc.transform(train)[0, 0] == 5
        assert enc.transform(test)[0, 0] == 5

    @pytest.mark.parametrize("scheme", [s for s in TARGET_FAMILY if s != "woe"])
    def test_target_family_prior(self, scheme, toy, toy_unseen):
        assert fit_baseline(toy, scheme).transform(toy_unseen)[0, 0] == pytest.approx(0.5)

    def test_woe_unseen_zero(self, toy, toy_unseen):
        assert fit_baseline(toy, "woe").transform(toy_unseen)[0, 0] == 0.0


class TestTargetStatistics:
    def test_m_estimate_hand_values(self, toy):
        X = fit_baseline(toy, "m_estimate", m=1.0).transform(toy).ravel()
        # (c2 + m * prior) / (n + m), prior 1/2
        assert X[0] == pytest.approx((2 + 0.5) / 4)
        assert X[3] == pytest.approx((1 + 0.5) / 2)
        assert X[4] == pytest.approx(0.5 / 3)

    def test_target_smoothing_formula(self, toy):
        X = fit_baseline(toy, "target", min_samples_leaf=1, smoothing=2.0).transform(toy).ravel()
        s = 1 / (1 + np.exp(-(3 - 1) / 2.0))
        assert X[0] == pytest.approx(0.5 * (1 - s) + (2 / 3) * s)

    @pytest.mark.parametrize("scheme", ["target", "m_estimate", "james_stein", "catboost"])
    def test_shrinks_towards_prior(self, scheme, toy):
        X = fit_baseline(toy, scheme).transform(toy).ravel()
        raw = np.array([2 / 3, 2 / 3, 2 / 3, 1.0, 0.0, 0.0])
        assert (np.abs(X - 0.5) <= np.abs(raw - 0.5) + 1e-12).all()
        assert ((X - 0.5) * (raw - 0.5) >= 0).all()

    def test_woe_sign(self, toy):
        X = fit_baseline(toy, "woe").transform(toy).ravel()
        assert X[0] > 0 and X[4] < 0

    def test_woe_hand_value(self, toy):
        X = fit_baseline(toy, "woe", regularization=0.5).transform(toy).ravel()
        # category a: 2 of 3 attacks, 1 of 3 normals
        assert X[0] == pytest.approx(np.log((2.5 / 4) / (1.5 / 4)))

    def test_leave_one_out_training(self, toy):
        enc = fit_baseline(toy, "leave_one_out")
        X = enc.transform(toy, training=True).ravel()
        # row 0 (a, attack): remaining a rows hold 1 attack out of 2
        assert X[0] == 0.5
        assert X[2] == 1.0
        # b occurs once; nothing left to average, so the prior is used
        assert X[3] == 0.5
        # outside training mode the full category mean is used
        assert enc.transform(toy).ravel()[0] == pytest.approx(2 / 3)

    def test_catboost_ordered(self, toy):
        X = fit_baseline(toy, "catboost", a=1.0).transform(toy, training=True).ravel()
        # running mean over earlier rows of the same category, prior weight a=1
        assert X.tolist() == pytest.approx([0.5, 0.75, 2.5 / 3, 0.5, 0.5, 0.25])

    def test_catboost_shuffle_seeded(self, toy):
        a = fit_baseline(toy, "catboost", shuffle=True, seed=4).transform(toy, training=True)
        b = fit_baseline(toy, "catboost", shuffle=True, seed=4).transform(toy, training=True)
        assert a.tobytes() == b.tobytes()

    def test_catboost_matches_loop_oracle(self, kdd_shaped):
        X = fit_baseline(kdd_shaped, "catboost").transform(kdd_shaped, training=True)
        prior = kdd_shaped.target.mean()
        for j, var in enumerate(kdd_shaped.categorical_names):
            cats = kdd_shaped.categories(var)
            sums, counts = {}, {}
            for r, (c, y) in enumerate(zip(cats, kdd_shaped.target)):
                want = (sums.get(c, 0.0) + prior) / (counts.get(c, 0) + 1)
                assert X[r, j] == pytest.approx(want, abs=1e-12)
                sums[c] = sums.get(c, 0.0) + y
                counts[c] = counts.get(c, 0) + 1


class TestContrasts:
    @pytest.mark.parametrize("kind", CONTRASTS)
    @pytest.mark.parametrize("c", [2, 3, 5, 11, 70])
    def test_full_rank_and_shape(self, kind, c):
        m = contrast_matrix(kind, c)
        assert m.shape == (c, c - 1)
        # columns independent of each other and of the intercept
        aug = np.column_stack([np.ones(c), m])
        assert np.linalg.matrix_rank(aug) == c

    @pytest.mark.parametrize("c", [2, 3, 11, 70])
    def test_polynomial_orthonormal(self, c):
        m = contrast_matrix("polynomial", c)
        np.testing.assert_allclose(m.T @ m, np.eye(c - 1), atol=1e-10)
        np.testing.assert_allclose(m.sum(axis=0), 0.0, atol=1e-10)

    def test_polynomial_linear_column(self):
        m = contrast_matrix("polynomial", 4)
        x = np.arange(4) - 1.5
        np.testing.assert_allclose(m[:, 0], x / np.linalg.norm(x))

    @pytest.mark.parametrize("kind", ["sum", "helmert", "backward_difference"])
    def test_columns_sum_to_zero(self, kind):
        np.testing.assert_allclose(contrast_matrix(kind, 6).sum(axis=0), 0.0, atol=1e-12)

    def test_helmert_small(self):
        np.testing.assert_array_equal(contrast_matrix("helmert", 3),
                                      [[-1, -1], [1, -1], [0, 2]])

    def test_single_level(self):
        for kind in CONTRASTS:
            assert contrast_matrix(kind, 1).shape == (1, 0)


class TestHashing:
    def test_known_bucket(self):
        import hashlib
        digest = hashlib.md5(b"service=http").digest()
        assert hash_bucket("service", "http", 8) == int.from_bytes(digest[:8], "big") % 8

    def test_unseen_still_hashed(self, toy, toy_unseen):
        X = fit_baseline(toy, "hashing").transform(toy_unseen)
        assert X.sum(axis=1).tolist() == [1, 1]

    def test_rows_sum_to_variable_count(self, kdd_shaped):
        X = fit_baseline(kdd_shaped, "hashing", n_components=8).transform(kdd_shaped)
        assert (X.sum(axis=1) == 3).all()


class TestParams:
    @pytest.mark.parametrize("scheme, params", [
        ("base_n", {"base": 1}), ("hashing", {"n_components": 0}),
        ("m_estimate", {"m": -1}), ("one_hot", {"base": 2}), ("nope", {}),
    ])
    def test_rejected(self, toy, scheme, params):
        with pytest.raises(ValueError):
            fit_baseline(toy, scheme, **params)


@pytest.mark.parametrize("scheme", SCHEMES)
def test_json_roundtrip(scheme, mini_train, mini_test):
    enc = fit_baseline(mini_train, scheme)
    again = serialize.loads(serialize.dumps(enc))
    assert again.transform(mini_test).tobytes() == enc.transform(mini_test).tobytes()
    assert again.transform(mini_train, training=True).tobytes() == \
        enc.transform(mini_train, training=True).tobytes()
