from collections import Counter

import numpy as np
import pytest

from directed_share.classifier import COARSE_ABLATION, TreeParams, ablation
from directed_share.errors import ContractError
from directed_share.features import build_balanced_datasets, featurize_records
from directed_share.io.csvio import read_study
from directed_share.model.ratings import RATING_MAX, RATING_MIN
from directed_share.model.session import SINGLE_LIST_SIZE
from directed_share.stats import (
    ALL_USERS,
    promiscuity_correlations,
    sender_rating_table,
    sender_recipient_table,
)
from directed_share.synthgen import (
    TRUTH_DIR,
    TRUTH_FILE,
    StudyProfile,
    generate_study,
    planted_effect_ratings,
    read_ground_truth,
    write_synthetic,
)

PROFILE = StudyProfile(n_pairs=20)


@pytest.fixture(scope="module")
def synth():
    return generate_study(PROFILE, seed=11)


def test_same_seed_same_study(synth):
    again = generate_study(PROFILE, seed=11).study
    assert again.likes == synth.study.likes
    assert again.ratings == synth.study.ratings
    assert again.shares == synth.study.shares
    assert again.sessions == synth.study.sessions


def test_different_seed_differs(synth):
    assert generate_study(PROFILE, seed=12).study.ratings != synth.study.ratings


def test_totals_hit_exactly(synth):
    n = PROFILE.n_participants
    assert len(synth.study.positives) == round(PROFILE.shares_per_person * n)
    assert len(synth.study.ratings) == round(PROFILE.ratings_per_person * n)


def test_ratings_on_grid_near_target_mean(synth):
    values = [r for _, _, r in synth.study.ratings.rows()]
    assert all(RATING_MIN <= r <= RATING_MAX and (2 * r).is_integer() for r in values)
    assert sum(values) / len(values) == pytest.approx(PROFILE.mean_rating, abs=0.05)


def test_sessions_and_lists(synth):
    study = synth.study
    assert len(study.sessions) == PROFILE.n_pairs
    for s in study.sessions:
        assert 10 <= len(s.shown_items) <= 20
        for u in s.pair:
            own = s.own_recs_of(u)
            assert len(own) in (0, SINGLE_LIST_SIZE)
    shown = {u: set(s.shown_items) for s in study.sessions for u in s.pair}
    for rec in study.shares:
        assert rec.item in shown[rec.sender]
    for u, i, _ in study.ratings.rows():
        assert i in shown[u]


def test_partners_are_friends(synth):
    for s in synth.study.sessions:
        a, b = s.pair
        assert b in synth.study.friends[a]
        assert a in synth.study.friends[b]


def test_share_scores_follow_traits(synth):
    truth = synth.truth
    for (s, r, i), score in list(truth.share_scores.items())[:50]:
        expected = PROFILE.rho * truth.affinity(s, i) + truth.affinity(r, i)
        assert score == pytest.approx(expected, abs=1e-9)


def test_synthetic_study_on_disk(synth, tmp_path):
    write_synthetic(synth, tmp_path)
    assert (tmp_path / TRUTH_DIR / TRUTH_FILE).is_file()
    back = read_study(tmp_path)
    assert back.ratings == synth.study.ratings
    assert Counter(back.positives) == Counter(synth.study.positives)
    truth = read_ground_truth(tmp_path / TRUTH_DIR / TRUTH_FILE)
    assert truth.user_traits == synth.truth.user_traits
    assert truth.item_bias == synth.truth.item_bias
    assert truth.share_scores == synth.truth.share_scores


@pytest.mark.parametrize(
    "overrides",
    [
        {"n_pairs": 0},
        {"rho": 0.5},
        {"homophily": 1.0},
        {"mean_rating": 5.5},
        {"both_shown_fraction": 1.5},
        {"shares_per_person": 0.0},
        {"rating_noise": -1.0},
    ],
)
def test_profile_contract(overrides):
    with pytest.raises(ContractError):
        StudyProfile(**overrides)


def test_profile_kv():
    p = StudyProfile.from_kv({"n_pairs": "12", "rho": "2.5"})
    assert p.n_pairs == 12 and p.rho == 2.5
    assert p.n_participants == 24
    assert StudyProfile(**p.as_kv()) == p
    with pytest.raises(ContractError):
        StudyProfile.from_kv({"n_pairs": "many"})


def test_planted_grid_layout():
    rows = planted_effect_ratings(4, 5, 0.4, 0.3, 0.3, 1.0, seed=3)
    assert len(rows) == 20
    assert len({(r.participant, r.item) for r in rows}) == 20
    assert sum(r.condition for r in rows) == 10
    assert rows == planted_effect_ratings(4, 5, 0.4, 0.3, 0.3, 1.0, seed=3)


def test_planted_without_noise_is_exact():
    rows = planted_effect_ratings(3, 3, 0.5, 0.0, 0.0, 0.0, seed=0, intercept=3.0)
    assert {(r.condition, r.rating) for r in rows} <= {(0, 3.0), (1, 3.5)}
    assert sum(r.condition for r in rows) == 5


@pytest.mark.parametrize(
    "args",
    [(1, 5, 0.4, 0.3, 0.3, 1.0), (5, 1, 0.4, 0.3, 0.3, 1.0), (5, 5, 0.4, -0.1, 0.3, 1.0)],
)
def test_planted_contract(args):
    with pytest.raises(ContractError):
        planted_effect_ratings(*args, seed=0)


@pytest.mark.slow
def test_ablation_ranks_sender_features_first():
    accuracy = {group: [] for group in COARSE_ABLATION}
    for seed in range(20):
        study = generate_study(StudyProfile(), seed).study
        instances = featurize_records(
            list(study.shares), study.likes, study.items, study.positives
        )
        datasets = build_balanced_datasets(instances, 3, seed)
        for row in ablation(COARSE_ABLATION, datasets, TreeParams(), 5, seed):
            accuracy[row.group].append(row.report.accuracy)
    mean = {group: sum(v) / len(v) for group, v in accuracy.items()}
    assert mean["item"] <= 0.55
    assert mean["sender"] > mean["recipient"] > mean["item"]
    assert mean["sender+recipient"] >= max(mean.values())
    assert mean["sender+recipient"] >= 0.70


def _all_users(frame, column):
    return float(frame.set_index("group").loc[ALL_USERS, column])


def _signatures(rho, seeds=range(20)):
    rows = []
    for seed in seeds:
        study = generate_study(StudyProfile(rho=rho), seed).study
        pairs = sender_recipient_table(study)
        corr = promiscuity_correlations(study).set_index("rating_by")
        rows.append(
            {
                "shared_d": _all_users(sender_rating_table(study), "effect_size"),
                "sender_minus_recipient": _all_users(pairs, "mean_a")
                - _all_users(pairs, "mean_b"),
                "sender_recipient_d": _all_users(pairs, "effect_size"),
                "promiscuity_r": float(corr.loc["sender", "r"]),
                "shares_per_person": len(study.positives) / len(study.participants),
                "ratings_per_person": len(study.ratings) / len(study.participants),
            }
        )
    return {key: float(np.nanmean([r[key] for r in rows])) for key in rows[0]}


@pytest.fixture(scope="module")
def sender_dominant():
    return _signatures(3.0)


@pytest.fixture(scope="module")
def symmetric():
    return _signatures(1.0)


@pytest.mark.slow
def test_sender_dominance_signatures(sender_dominant):
    assert sender_dominant["shared_d"] > 0.3
    assert sender_dominant["sender_minus_recipient"] > 0.0
    assert sender_dominant["promiscuity_r"] < 0.0


@pytest.mark.slow
def test_equal_weights_give_symmetric_ratings(symmetric, sender_dominant):
    assert abs(symmetric["sender_recipient_d"]) < 0.1
    assert symmetric["sender_recipient_d"] < sender_dominant["sender_recipient_d"]


@pytest.mark.slow
@pytest.mark.parametrize(
    "key, target", [("shares_per_person", 2.66), ("ratings_per_person", 8.18)]
)
def test_per_person_counts_within_tolerance(sender_dominant, key, target):
    assert sender_dominant[key] == pytest.approx(target, rel=0.15)
