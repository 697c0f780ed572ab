import numpy as np
import pytest

from directed_share.classifier import (
    COARSE_ABLATION,
    DETAILED_ABLATION,
    DecisionTree,
    Leaf,
    Split,
    TreeParams,
    ablation,
    ablation_frame,
    cross_validate,
    dumps,
    fit_arrays,
    loads,
    metrics,
    predict,
    stratified_folds,
    train_tree,
)
from directed_share.errors import ContractError, ValidationError
from directed_share.features import (
    BalancedDataset,
    FeatureVector,
    TrainingInstance,
    read_features,
    write_features,
)
from directed_share.model import ShareRecord

TREE_SENDER = """\
sharer_sim <= 0.0101: Non-shared
sharer_sim > 0.0101
| sharer_prom <= 1: Non-shared
| sharer_prom > 1: Shared
"""

# trailing blanks and "<=1" are kept as printed
TREE_SENDER_RECIPIENT = """\
sharer_sim <= 0.0107: Non-shared 
sharer_sim > 0.0107 
| sharer_prom <= 3
| | sharer_prom <=1: Non-shared
| | sharer_prom > 1
| | | sharer_recip_sim <= 0.0754
| | | | sharer_sim <= 0.0601: Non-shared
| | | | sharer_sim > 0.0601: Shared
| | | sharer_recip_sim > 0.0754: Shared
| sharer_prom > 3: Shared
"""


def fv(sharer_sim=0.0, prom=0, sharer_recip_sim=0.0, recip_sim=0.0):
    return FeatureVector(sharer_sim, recip_sim, sharer_recip_sim, prom, 5.0, 10.0)


@pytest.mark.parametrize(
    "text, vector, expected",
    [
        (TREE_SENDER, fv(0.005, 10), False),
        (TREE_SENDER, fv(0.0101, 5), False),
        (TREE_SENDER, fv(0.02, 3), True),
        (TREE_SENDER, fv(0.02, 1), False),
        (TREE_SENDER, fv(0.0102, 2), True),
        (TREE_SENDER, fv(0.9, 0), False),
        (TREE_SENDER_RECIPIENT, fv(0.0107, 9), False),
        (TREE_SENDER_RECIPIENT, fv(0.02, 5), True),
        (TREE_SENDER_RECIPIENT, fv(0.02, 1), False),
        (TREE_SENDER_RECIPIENT, fv(0.02, 2, 0.05), False),
        (TREE_SENDER_RECIPIENT, fv(0.07, 2, 0.05), True),
        (TREE_SENDER_RECIPIENT, fv(0.02, 3, 0.08), True),
    ],
)
def test_printed_trees_truth_table(text, vector, expected):
    assert predict(loads(text), vector) is expected


def test_printed_tree_text_is_reproduced():
    tree = loads(TREE_SENDER)
    assert dumps(tree) == TREE_SENDER
    assert tree.features_used() == ["sharer_sim", "sharer_prom"]
    deep = loads(TREE_SENDER_RECIPIENT)
    assert deep.depth == 5
    assert loads(dumps(deep)) == deep


@pytest.mark.parametrize(
    "text",
    [
        "",
        "sharer_sim <= 0.1: Shared\n",
        "sharer_sim <= 0.1: Shared\nsharer_sim > 0.2: Shared\n",
        "nope <= 0.1: Shared\nnope > 0.1: Shared\n",
        "sharer_sim <= 0.1: Maybe\nsharer_sim > 0.1: Shared\n",
    ],
)
def test_loads_rejects_malformed(text):
    with pytest.raises(ValidationError):
        loads(text)


def test_single_leaf_text():
    assert dumps(DecisionTree(Leaf(True))) == "Shared\n"
    assert loads("Non-shared\n").root == Leaf(False)


# --------------------------------------------------------------------------- #
# Training
# --------------------------------------------------------------------------- #
def _matrix(column, values):
    X = np.zeros((len(values), 6))
    X[:, 4] = 5.0
    X[:, column] = values
    return X


def test_pure_data_is_one_leaf():
    tree = fit_arrays(_matrix(0, [0.1, 0.2, 0.3]), np.array([True, True, True]))
    assert tree.root == Leaf(True)


def test_midpoint_threshold():
    X = _matrix(0, [0.2, 0.4, 0.6, 0.8])
    y = np.array([False, False, True, True])
    tree = fit_arrays(X, y, TreeParams(min_leaf=1))
    assert isinstance(tree.root, Split)
    assert tree.root.feature == 0
    assert tree.root.threshold == pytest.approx(0.5)
    assert tree.predict_many(X).tolist() == y.tolist()


def test_identical_rows_with_mixed_labels_tie_to_non_shared():
    X = _matrix(0, [0.3, 0.3, 0.3, 0.3])
    tree = fit_arrays(X, np.array([True, False, True, False]), TreeParams(min_leaf=1))
    assert tree.root == Leaf(False)


def test_max_depth_and_min_leaf_respected():
    rng = np.random.default_rng(1)
    X = rng.random((200, 6))
    y = rng.random(200) < 0.5
    tree = fit_arrays(X, y, TreeParams(max_depth=3, min_leaf=10))
    assert tree.depth <= 3

    def leaf_sizes(node, rows):
        if isinstance(node, Leaf):
            return [len(rows)]
        mask = X[rows, node.feature] <= node.threshold
        return leaf_sizes(node.left, rows[mask]) + leaf_sizes(node.right, rows[~mask])

    assert min(leaf_sizes(tree.root, np.arange(200))) >= 10


def test_feature_subset_limits_splits():
    rng = np.random.default_rng(2)
    X = rng.random((100, 6))
    y = X[:, 0] > 0.5
    tree = fit_arrays(X, y, TreeParams(), features=["ext_pop", "recip_sim"])
    assert set(tree.features_used()) <= {"ext_pop", "recip_sim"}


def test_monotone_transform_keeps_predictions():
    rng = np.random.default_rng(3)
    X = rng.random((120, 6))
    y = (X[:, 0] + 0.3 * rng.random(120)) > 0.6
    warped = X.copy()
    warped[:, 0] = warped[:, 0] ** 3 + 2.0
    a = fit_arrays(X, y)
    b = fit_arrays(warped, y)
    assert a.predict_many(X).tolist() == b.predict_many(warped).tolist()


def test_training_is_deterministic_and_text_preserves_predictions():
    rng = np.random.default_rng(4)
    X = rng.random((150, 6)) * [1, 1, 1, 20, 10, 1000]
    y = rng.random(150) < 0.5
    tree = fit_arrays(X, y)
    assert fit_arrays(X, y) == tree
    assert loads(dumps(tree)).predict_many(X).tolist() == tree.predict_many(X).tolist()


def test_tree_params_contract():
    with pytest.raises(ContractError):
        TreeParams(max_depth=0)
    with pytest.raises(ContractError):
        TreeParams(min_leaf=0)
    with pytest.raises(ContractError):
        TreeParams(criterion="entropy")
    with pytest.raises(ContractError):
        train_tree([])


# --------------------------------------------------------------------------- #
# Metrics and cross-validation
# --------------------------------------------------------------------------- #
def test_metrics_confusion_counts():
    m = metrics([True, True, True, False, False, False], [True, True, False, True, False, False])
    assert (m.tp, m.fp, m.fn, m.tn) == (2, 1, 1, 2)
    assert m.precision == pytest.approx(2 / 3)
    assert m.recall == pytest.approx(2 / 3)
    assert m.accuracy == pytest.approx(4 / 6)


def test_metrics_edge_cases():
    balanced = [True, True, False, False]
    everything = metrics([True] * 4, balanced)
    assert (everything.precision, everything.recall, everything.accuracy) == (0.5, 1.0, 0.5)
    nothing = metrics([False] * 4, balanced)
    assert nothing.precision == 0.0 and not nothing.precision_defined
    with pytest.raises(ContractError):
        metrics([True], [True, False])
    with pytest.raises(ContractError):
        metrics([], [])


def test_stratified_folds_balance_positives():
    labels = np.array([True] * 23 + [False] * 23)
    fold_of = stratified_folds(labels, 10, np.random.default_rng(0))
    per_fold = [int(labels[fold_of == f].sum()) for f in range(10)]
    assert max(per_fold) - min(per_fold) <= 1
    assert sorted(set(fold_of.tolist())) == list(range(10))


def _record(k, label):
    return ShareRecord("s", "r", f"m{k}", label)


def _separable(n_pos, seed=0):
    rng = np.random.default_rng(seed)
    pos = [
        TrainingInstance(
            FeatureVector(0.9 + 0.1 * rng.random(), 0, 0, 0, 5, 0), True, _record(k, True)
        )
        for k in range(n_pos)
    ]
    neg = [
        TrainingInstance(
            FeatureVector(0.1 * rng.random(), 0, 0, 0, 5, 0), False, _record(n_pos + k, False)
        )
        for k in range(n_pos)
    ]
    return BalancedDataset(tuple(pos + neg))


def _noise(n_pos, seed):
    rng = np.random.default_rng(seed)
    rows = [
        TrainingInstance(
            FeatureVector(
                *rng.random(3),
                int(rng.integers(0, 5)),
                1 + 9 * rng.random(),
                1000 * rng.random(),
            ),
            k < n_pos,
            _record(k, k < n_pos),
        )
        for k in range(2 * n_pos)
    ]
    return BalancedDataset(tuple(rows))


def test_cross_validate_separable_data():
    report = cross_validate([_separable(30), _separable(30, 1)], TreeParams(), 5, seed=9)
    assert report.accuracy == 1.0
    assert report.precision == 1.0
    assert len(report.folds) == 10
    frame = report.folds_frame()
    assert list(frame.columns) == [
        "dataset",
        "fold",
        "precision",
        "recall",
        "accuracy",
        "precision_defined",
    ]
    assert report.summary_frame("sender").iloc[0]["group"] == "sender"


def test_cross_validate_is_deterministic_across_jobs():
    data = [_noise(40, 0), _noise(40, 1)]
    a = cross_validate(data, TreeParams(), 4, seed=5)
    b = cross_validate(data, TreeParams(), 4, seed=5, jobs=4)
    assert a == b
    assert a.grand.accuracy == pytest.approx(np.mean([s.accuracy for s in a.dataset_means]))


def test_cross_validate_contracts():
    with pytest.raises(ContractError):
        cross_validate([_separable(3)], TreeParams(), 10)
    with pytest.raises(ContractError):
        cross_validate([_separable(10)], TreeParams(), 1)
    with pytest.raises(ContractError):
        cross_validate([], TreeParams(), 2)
    with pytest.raises(ContractError):
        cross_validate([_separable(10)], TreeParams(), 2, promiscuity_scope="local")


def test_fold_scope_requires_senders():
    bare = BalancedDataset(
        tuple(TrainingInstance(x.features, x.label) for x in _separable(10).instances)
    )
    with pytest.raises(ContractError, match="no sender"):
        cross_validate([bare], TreeParams(), 2)
    assert cross_validate([bare], TreeParams(), 2, promiscuity_scope="global").accuracy == 1.0
    assert cross_validate([bare], TreeParams(), 2, features=["sharer_sim"]).accuracy == 1.0


def test_reloaded_features_recount_promiscuity_per_fold(tmp_path):
    data = _separable(15)
    path = write_features(tmp_path / "features.csv", data.instances)
    back = BalancedDataset(tuple(read_features(path)))
    assert [x.sender for x in back.instances] == [x.sender for x in data.instances]
    assert cross_validate([back], TreeParams(), 5, 0) == cross_validate([data], TreeParams(), 5, 0)


def test_fold_promiscuity_uses_training_labels_only():
    # the only signal is the sender; the stored promiscuity column is a label leak
    rows = []
    for k in range(40):
        label = k < 20
        sender = f"s{k % 4}"
        rec = ShareRecord(sender, "r", f"m{k}", label)
        leak = FeatureVector(0, 0, 0, 100 if label else 0, 5, 0)
        rows.append(TrainingInstance(leak, label, rec))
    data = [BalancedDataset(tuple(rows))]
    leaky = cross_validate(data, TreeParams(), 5, 0, promiscuity_scope="global")
    assert leaky.accuracy == 1.0
    honest = cross_validate(data, TreeParams(), 5, 0)
    assert honest.accuracy < 1.0


def test_ablation_rows_follow_group_order():
    data = [_separable(20)]
    rows = ablation(COARSE_ABLATION, data, TreeParams(), 4, 0)
    assert [r.group for r in rows] == ["item", "recipient", "sender", "sender+recipient"]
    frame = ablation_frame(rows)
    assert list(frame.columns) == ["group", "precision", "recall", "accuracy"]
    assert frame.set_index("group").loc["sender", "accuracy"] == 1.0
    assert len(DETAILED_ABLATION) == 10
    with pytest.raises(ContractError):
        ablation({"empty": ()}, data)


@pytest.mark.slow
def test_shuffled_labels_score_like_a_coin():
    accs = []
    for seed in range(10):
        datasets = [_noise(60, 100 * seed + d) for d in range(3)]
        accs.append(cross_validate(datasets, TreeParams(), 10, seed).accuracy)
    assert abs(np.mean(accs) - 0.5) <= 0.05
