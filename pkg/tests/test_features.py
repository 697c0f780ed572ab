import pytest

from directed_share.errors import ContractError, InsufficientNegativesError, ValidationError
from directed_share.features import (
    FEATURE_NAMES,
    BalancedDataset,
    FeatureVector,
    TrainingInstance,
    build_balanced_datasets,
    feature_indices,
    featurize,
    featurize_records,
    promiscuity,
    read_features,
    write_features,
)
from directed_share.model import LikesMatrix, ShareRecord
from directed_share.model.records import ItemMeta

LIKES = LikesMatrix({"s": ["a", "b"], "r": ["b", "c"], "x": ["a", "c"]})
META = {"a": ItemMeta("a", 8.0, 100), "b": ItemMeta("b", 6.5, 20)}
SHARES = [
    ShareRecord("s", "r", "a", True),
    ShareRecord("s", "r", "b", True),
    ShareRecord("s", "r", "c", False),
    ShareRecord("r", "s", "a", False),
]


def _instances(n_pos, n_neg):
    fv = FeatureVector(0.1, 0.2, 0.3, 1, 5.0, 10)
    pos = [TrainingInstance(fv, True, ShareRecord("s", "r", f"p{k}", True)) for k in range(n_pos)]
    neg = [TrainingInstance(fv, False, ShareRecord("s", "r", f"n{k}", False)) for k in range(n_neg)]
    return pos + neg


def test_featurize_values():
    fv = featurize("s", "r", "a", LIKES, META["a"], SHARES)
    # likers: a={s,x} b={s,r} c={r,x}; J(a,b)=1/3
    assert fv.sender_item_sim == pytest.approx((1 + 1 / 3) / 2)
    assert fv.recipient_item_sim == pytest.approx((1 / 3 + 1 / 3) / 2)
    assert fv.sender_recipient_sim == pytest.approx(1 / 3)
    assert fv.sender_promiscuity == 2
    assert fv.as_array().tolist()[4:] == [8.0, 100.0]


def test_featurize_requires_matching_meta():
    with pytest.raises(ContractError):
        featurize("s", "r", "a", LIKES, None, SHARES)
    with pytest.raises(ContractError):
        featurize("s", "r", "a", LIKES, META["b"], SHARES)


def test_featurize_records_skips_items_without_meta():
    out = featurize_records(SHARES, LIKES, META)
    assert [x.record.item for x in out] == ["a", "b", "a"]
    assert [x.label for x in out] == [True, True, False]
    assert out[2].features.sender_promiscuity == 0


def test_promiscuity_counts_only_shared():
    assert promiscuity("s", SHARES) == 2
    assert promiscuity("r", SHARES) == 0


def test_feature_vector_bounds():
    with pytest.raises(ContractError):
        FeatureVector(1.5, 0, 0, 0, 5, 0)
    with pytest.raises(ContractError):
        FeatureVector(0, 0, 0, -1, 5, 0)
    with pytest.raises(ContractError):
        FeatureVector(0, 0, 0, 0, 5, float("inf"))


def test_feature_indices():
    assert feature_indices(None) == list(range(6))
    assert feature_indices(["ext_pop", "sharer_sim", "ext_pop"]) == [0, 5]
    with pytest.raises(ContractError):
        feature_indices(["nope"])
    with pytest.raises(ContractError):
        feature_indices([])
    assert len(FEATURE_NAMES) == 6


def test_balanced_datasets_are_balanced_and_deterministic():
    data = _instances(5, 12)
    first = build_balanced_datasets(data, 4, seed=3)
    again = build_balanced_datasets(data, 4, seed=3, jobs=4)
    assert first == again
    for ds in first:
        assert len(ds) == 10
        assert ds.labels().sum() == 5
        negs = [x.record.item for x in ds.instances if not x.label]
        assert len(set(negs)) == 5
    assert len({tuple(x.record.item for x in ds.instances) for ds in first}) > 1


def test_matrix_width_matches_feature_names():
    assert BalancedDataset(()).matrix().shape == (0, len(FEATURE_NAMES))
    ds = BalancedDataset(tuple(_instances(2, 2)))
    assert ds.matrix().shape == (4, len(FEATURE_NAMES))


def test_balanced_datasets_contracts():
    with pytest.raises(InsufficientNegativesError):
        build_balanced_datasets(_instances(5, 4), 1)
    with pytest.raises(ContractError):
        build_balanced_datasets(_instances(0, 4), 1)
    with pytest.raises(ContractError):
        build_balanced_datasets(_instances(2, 4), 0)


def test_features_csv_reload(tmp_path):
    out = featurize_records(SHARES, LIKES, META)
    path = write_features(tmp_path / "features.csv", out)
    again = read_features(path)
    assert [x.record for x in again] == [x.record for x in out]
    for a, b in zip(again, out):
        assert a.features.as_array() == pytest.approx(b.features.as_array())


def test_features_csv_bad_label(tmp_path):
    out = featurize_records(SHARES, LIKES, META)
    path = write_features(tmp_path / "features.csv", out)
    text = path.read_text().replace(",1\n", ",7\n", 1)
    path.write_text(text)
    with pytest.raises(ValidationError, match="row 1"):
        read_features(path)
