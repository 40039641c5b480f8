import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frugalml.errors import LoadError, MetricError, ProtocolError
from frugalml.evaldata import build_matrix, format_eval_csv, parse_eval_csv
from frugalml.learners import (
    DecisionStump,
    HyperPipes,
    NaiveBayes,
    ZeroR,
    auc_binary,
    auc_multiclass_ova,
    cross_validation,
    extract_meta_features,
    format_meta_csv,
    holdout,
    load_dataset_csv,
    make_dataset,
    metered_evaluate,
    parse_meta_csv,
    stratified_folds,
    train_predict_hyperpipes,
    train_predict_naive_bayes,
    train_predict_stump,
    train_predict_zeror,
)
from frugalml.learners.classifiers import nominal_split_gains, numeric_split_gains

from oracles import best_threshold_gain, pair_count_auc


def _gaussians(n=200, sep=5.0, seed=0):
    rng = np.random.default_rng(seed)
    y = np.arange(n) % 2
    x = np.where(y == 1, sep, -sep) + rng.standard_normal(n)
    return make_dataset(x, y)


# --------------------------------------------------------------------------- loading


def test_load_numeric_and_nominal():
    ds = load_dataset_csv(b"x,colour,class\n1.5,a,yes\n2,b,no\n?,a,yes\n", "class")
    assert ds.columns == [("x", "numeric"), ("colour", "nominal")]
    assert ds.attributes[1].values == ("a", "b")
    assert np.isnan(ds.X[2, 0]) and ds.classes == ("no", "yes")
    assert ds.y.tolist() == [1, 0, 1]


def test_load_single_numeric_predictor():
    ds = load_dataset_csv("x,class\n1,a\n2,b\n", "class")
    assert ds.columns == [("x", "numeric")] and ds.n_instances == 2


@pytest.mark.parametrize("text, message", [
    ("x,class\n1,a\n2,a\n", "fewer than 2"),
    ("x,label\n1,a\n2,b\n", "not in header"),
    ("x,class\n", "no data rows"),
    ("", "empty"),
    ("x,class\n1,a\n2,?\n", "missing class label"),
])
def test_load_errors(text, message):
    with pytest.raises(LoadError, match=message):
        load_dataset_csv(text, "class")


# --------------------------------------------------------------------------- AUC


def test_auc_perfect_and_reversed():
    assert auc_binary([0.1, 0.2, 0.8, 0.9], [0, 0, 1, 1]) == 1.0
    assert auc_binary([0.9, 0.8, 0.2, 0.1], [0, 0, 1, 1]) == 0.0
    with pytest.raises(MetricError):
        auc_binary([0.1, 0.2], [1, 1])


def test_auc_matches_pair_counting_with_ties():
    rng = np.random.default_rng(0)
    for _ in range(30):
        s = rng.integers(0, 8, 50) / 8  # coarse values force ties
        y = rng.integers(0, 2, 50)
        if y.min() == y.max():
            continue
        assert abs(auc_binary(s, y) - pair_count_auc(s, y)) < 1e-12


@given(st.lists(st.tuples(st.integers(0, 20), st.booleans()), min_size=2, max_size=60))
def test_auc_complement_and_monotone_invariance(pairs):
    s = np.array([a for a, _ in pairs], float)
    y = np.array([b for _, b in pairs], int)
    if y.min() == y.max():
        return
    a = auc_binary(s, y)
    assert abs(a + auc_binary(s, 1 - y) - 1) < 1e-12
    assert auc_binary(np.exp(s / 3) - 7, y) == a
    assert abs(a - pair_count_auc(s, y)) < 1e-12


def test_multiclass_examples():
    y = np.array([0, 1, 2, 0, 1, 2])
    assert auc_multiclass_ova(np.eye(3)[y], y) == 1.0
    assert auc_multiclass_ova(np.full((6, 3), 1 / 3), y) == 0.5


def test_multiclass_binary_identity():
    rng = np.random.default_rng(4)
    for _ in range(20):
        p = rng.random(30)
        y = rng.integers(0, 2, 30)
        if y.min() == y.max():
            continue
        S = np.column_stack([1 - p, p])
        assert auc_multiclass_ova(S, y) == pytest.approx(auc_binary(p, y), abs=1e-12)


def test_multiclass_weighted_flag():
    y = np.array([0, 0, 0, 0, 1, 2])
    S = np.column_stack([np.linspace(1, 0, 6), np.linspace(0, 1, 6), np.zeros(6)])
    unweighted = auc_multiclass_ova(S, y)
    weighted = auc_multiclass_ova(S, y, weighted=True)
    per_class = [auc_binary(S[:, c], y == c) for c in range(3)]
    assert unweighted == pytest.approx(np.mean(per_class))
    assert weighted == pytest.approx(np.dot(per_class, [4 / 6, 1 / 6, 1 / 6]))


# --------------------------------------------------------------------------- ZeroR


def test_zeror_frequency_vector():
    train = make_dataset(np.zeros(10), [0] * 7 + [1] * 3)
    test = make_dataset(np.zeros(4), [0, 1, 0, 1])
    scores = train_predict_zeror(train, test)
    assert np.allclose(scores, [[0.7, 0.3]] * 4)
    assert auc_binary(scores[:, 1], test.y) == 0.5


def test_zeror_single_instance():
    train = make_dataset([[1.0]], [0], classes=("a", "b"))
    assert train_predict_zeror(train, train).tolist() == [[1.0, 0.0]]


# --------------------------------------------------------------------------- stump


def test_stump_separable():
    x = np.linspace(-1, 1, 40)
    ds = make_dataset(x, (x > 0).astype(int))
    assert auc_binary(train_predict_stump(ds, ds)[:, 1], ds.y) == 1.0


def test_stump_random_labels_near_half():
    aucs = []
    for seed in range(10):
        rng = np.random.default_rng(seed)
        X = rng.standard_normal((1000, 2))
        y = rng.permutation(np.arange(1000) % 2)
        ds = make_dataset(X, y)
        aucs.append(metered_evaluate("stump", ds, holdout(0.5), seed=seed).auc)
    assert abs(np.mean(aucs) - 0.5) < 0.05


def test_stump_gain_matches_exhaustive_oracle():
    rng = np.random.default_rng(9)
    for _ in range(20):
        x = rng.integers(0, 6, 10).astype(float)
        y = rng.integers(0, 3, 10)
        expected_gain, expected_t = best_threshold_gain(x.tolist(), y.tolist())
        thresholds, gains = numeric_split_gains(x, y, 3)
        if expected_t is None:
            assert gains.size == 0
            continue
        assert gains.max() == pytest.approx(expected_gain, abs=1e-12)
        stump = DecisionStump().fit(make_dataset(x, y, classes=("a", "b", "c")))
        assert stump.split_[2] == expected_t
        assert stump.gain_ == pytest.approx(expected_gain, abs=1e-12)


def test_nominal_gain_hand_computed():
    x = np.array([0, 0, 1, 1, 2, 2], float)
    y = np.array([0, 0, 1, 1, 1, 0])
    gains = nominal_split_gains(x, y, 3, 2)
    # x==0 isolates two class-0 instances: 1 - 4/6 * H(1/4)
    h14 = -(0.25 * np.log2(0.25) + 0.75 * np.log2(0.75))
    assert gains[0] == pytest.approx(1 - 4 / 6 * h14)
    assert gains[2] == pytest.approx(0.0, abs=1e-12)


def test_stump_leaf_laplace_and_tie_break():
    # both attributes separate perfectly; the lower index wins
    ds = make_dataset(np.column_stack([[0, 0, 1, 1], [5, 5, 9, 9]]), [0, 0, 1, 1])
    stump = DecisionStump().fit(ds)
    assert stump.split_ == (0, "numeric", 0.5)
    assert np.allclose(stump.left_, [3 / 4, 1 / 4])


# --------------------------------------------------------------------------- naive Bayes


def test_naive_bayes_symmetric_midpoint():
    train = make_dataset([-1.0, -3.0, 1.0, 3.0], [0, 0, 1, 1])
    test = make_dataset([[0.0]], [0], classes=("0", "1"))
    assert np.allclose(train_predict_naive_bayes(train, test), [[0.5, 0.5]], atol=1e-9)


def test_naive_bayes_separated_gaussians():
    ds = _gaussians()
    assert auc_binary(train_predict_naive_bayes(ds, ds)[:, 1], ds.y) > 0.99


def test_naive_bayes_nominal_and_missing():
    ds = load_dataset_csv("x,c,class\n1,a,p\n2,a,p\n8,b,n\n9,?,n\n?,b,n\n", "class")
    scores = train_predict_naive_bayes(ds, ds)
    assert np.all(np.isfinite(scores))
    assert np.allclose(scores.sum(axis=1), 1, atol=1e-12)
    assert np.all(scores[:2, 1] > 0.5) and np.all(scores[2:, 0] > 0.5)


# --------------------------------------------------------------------------- HyperPipes


def test_hyperpipes_containment_and_tie():
    train = make_dataset(np.array([[0, 0], [1, 1], [5, 5], [6, 6]], float), [0, 0, 1, 1])
    test = make_dataset(np.array([[0.5, 0.5], [20, 20]]), [0, 1])
    hp = HyperPipes().fit(train)
    s = hp.scores(test)
    assert s[0].tolist() == [1.0, 0.0]
    assert s[1].tolist() == [0.0, 0.0]
    assert hp.predict(test).tolist() == [0, 0]


def test_hyperpipes_disjoint_boxes():
    rng = np.random.default_rng(1)
    X = np.concatenate([rng.uniform(0, 1, (30, 2)), rng.uniform(2, 3, (30, 2))])
    y = np.repeat([0, 1], 30)
    ds = make_dataset(X, y)
    assert auc_multiclass_ova(train_predict_hyperpipes(ds, ds), y) == 1.0


def test_hyperpipes_missing_attribute_not_counted():
    train = make_dataset(np.array([[0, 0], [1, 1], [5, 5]], float), [0, 0, 1])
    test = make_dataset(np.array([[0.5, np.nan]]), [0], classes=("0", "1"))
    assert HyperPipes().fit(train).scores(test).tolist() == [[1.0, 0.0]]


# --------------------------------------------------------------------------- properties


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 4))
def test_probabilistic_scores_sum_to_one(seed, k):
    rng = np.random.default_rng(seed)
    n = 30
    X = rng.standard_normal((n, 3))
    X[rng.random((n, 3)) < 0.1] = np.nan
    y = np.arange(n) % k
    ds = make_dataset(X, y)
    for learner in (ZeroR(), DecisionStump(), NaiveBayes()):
        s = learner.fit(ds).scores(ds)
        assert np.all(np.isfinite(s))
        assert np.allclose(s.sum(axis=1), 1, atol=1e-12)
    assert np.all(np.isfinite(HyperPipes().fit(ds).scores(ds)))


# --------------------------------------------------------------------------- evaluation


def test_stratified_folds_balanced():
    y = np.repeat([0, 1, 2], [20, 13, 10])
    fold = stratified_folds(y, 10, seed=3)
    for c in range(3):
        counts = np.bincount(fold[y == c], minlength=10)
        assert counts.max() - counts.min() <= 1


def test_metered_zeror_is_half():
    for seed in range(3):
        ds = _gaussians(n=57, seed=seed)
        assert metered_evaluate("zeror", ds, cross_validation(10), seed).auc == 0.5


def test_metered_stump_separable_ten_fold():
    x = np.concatenate([np.linspace(-2, -1, 50), np.linspace(1, 2, 50)])
    ds = make_dataset(x, np.repeat([0, 1], 50))
    ev = metered_evaluate("stump", ds, cross_validation(10), 0)
    assert ev.auc == 1.0 and ev.train_ms >= 0 and ev.test_ms >= 0


def test_metered_deterministic_auc_and_round_trip():
    ds = _gaussians(n=80, sep=0.5, seed=2)
    a = metered_evaluate("naive_bayes", ds, cross_validation(5), 7)
    b = metered_evaluate("naive_bayes", ds, cross_validation(5), 7)
    assert a.auc == b.auc
    rec = a.to_record()
    assert parse_eval_csv(format_eval_csv([rec]).encode()) == [rec]
    assert build_matrix([rec]).auc[0, 0] == a.auc


def test_fold_missing_class_suggests_fewer_folds():
    ds = make_dataset(np.arange(12.0), [0] * 9 + [1] * 3)
    with pytest.raises(ProtocolError, match="at most 3 folds"):
        metered_evaluate("zeror", ds, cross_validation(10))
    assert metered_evaluate("zeror", ds, cross_validation(3)).auc == 0.5


def test_holdout_protocol():
    ds = _gaussians(n=60)
    ev = metered_evaluate("hyperpipes", ds, holdout(0.3), 0)
    assert ev.auc > 0.9


# --------------------------------------------------------------------------- meta-features


def test_meta_features():
    rows = ["x,colour,class"] + [f"{i},{'abc'[i % 3]},{'A' if i < 60 else 'B'}" for i in range(100)]
    ds = load_dataset_csv("\n".join(rows), "class")
    m = extract_meta_features(ds)
    assert m.num_attributes == 2
    assert m.majority_class_size == 60
    assert m.max_nominal_att_distinct_values == 3
    assert 0.95 < m.decision_stump_auc <= 1.0
    assert m.class_entropy == pytest.approx(-(0.6 * np.log2(0.6) + 0.4 * np.log2(0.4)))


def test_meta_balanced_entropy_and_sentinel():
    m = extract_meta_features(_gaussians(n=40))
    assert m.class_entropy == 1.0
    assert m.max_nominal_att_distinct_values == -1


def test_meta_csv_round_trip():
    m = extract_meta_features(_gaussians(n=40))
    text = format_meta_csv([("ds", m)])
    assert text.splitlines()[0].startswith("dataset_id,")
    parsed = parse_meta_csv(text)["ds"]
    assert list(parsed.values()) == pytest.approx([float(v) for v in m.as_dict().values()])
