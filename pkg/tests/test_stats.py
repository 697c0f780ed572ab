import math

import numpy as np
import pytest

from directed_share.errors import ContractError, DegenerateSampleError
from directed_share.stats import (
    ALL_USERS,
    COMBINED,
    LmmObservation,
    SampleSummary,
    analyze,
    cohens_d,
    condition_lrt,
    fit_lmm,
    likelihood_ratio_test,
    observations_frame,
    paired_t,
    pearson_corr,
    pearson_test,
    pooled_t_from_summary,
    read_observations,
    welch_t,
    welch_t_from_summary,
)
from directed_share.synthgen import StudyProfile, generate_study, planted_effect_ratings

# group, shared (n, mean, sd), non-shared (n, mean, sd), printed t, printed df, printed d
SENDER_ROWS = [
    ("Both-Shown", (140, 4.20, 0.93), (469, 3.81, 1.07), 4.20, 258, 0.4),
    ("Own-Shown", (90, 4.16, 0.87), (89, 3.56, 1.05), 4.14, 170, 0.6),
    ("Other-Shown", (71, 4.18, 1.08), (107, 3.31, 1.24), 4.92, 164, 0.7),
    ("All users", (301, 4.18, 0.95), (665, 3.70, 1.11), 6.98, 671, 0.5),
]


@pytest.mark.parametrize("group, a, b, t, df, d", SENDER_ROWS)
def test_welch_reproduces_published_rows(group, a, b, t, df, d):
    sa, sb = SampleSummary(*a), SampleSummary(*b)
    res = welch_t_from_summary(sa, sb)
    assert res.t == pytest.approx(t, abs=0.15)
    assert res.df == pytest.approx(df, abs=10)
    assert res.p < 1e-4
    assert round(cohens_d(sa, sb), 1) == d


def test_all_users_row_range():
    res = welch_t_from_summary(SampleSummary(301, 4.18, 0.95), SampleSummary(665, 3.70, 1.11))
    assert 6.8 <= res.t <= 7.1
    assert res.variant == "welch"


def test_tails_are_consistent():
    res = welch_t_from_summary(SampleSummary(30, 3.0, 1.0), SampleSummary(30, 3.2, 1.0))
    assert res.t < 0
    assert res.p_greater + res.p_less == pytest.approx(1.0)
    assert res.p == pytest.approx(2 * min(res.p_greater, res.p_less))


def test_pooled_t_uses_summed_df():
    res = pooled_t_from_summary(SampleSummary(10, 1.0, 1.0), SampleSummary(12, 0.0, 1.0))
    assert res.df == 20
    assert res.t == pytest.approx(1.0 / math.sqrt(1 / 10 + 1 / 12))


def test_welch_on_raw_values():
    res = welch_t([1.0, 2.0, 3.0, 4.0], [1.0, 2.0, 3.0, 4.0])
    assert res.t == 0.0
    assert res.p == pytest.approx(1.0)


def test_degenerate_samples():
    zero = SampleSummary(5, 3.0, 0.0)
    with pytest.raises(DegenerateSampleError):
        welch_t_from_summary(zero, SampleSummary(5, 4.0, 0.0))
    with pytest.raises(DegenerateSampleError):
        cohens_d(zero, zero)
    with pytest.raises(ContractError):
        SampleSummary(1, 3.0, 1.0)
    with pytest.raises(ContractError):
        SampleSummary(5, 3.0, -1.0)


def test_paired_t_hand_example():
    res = paired_t([1, 1, 1, -1])
    assert res.t == pytest.approx(1.0)
    assert res.df == 3
    assert res.variant == "paired"


def test_paired_t_from_published_summary():
    rng = np.random.default_rng(0)
    z = rng.standard_normal(171)
    d = 0.31 + 1.398 * (z - z.mean()) / z.std(ddof=1)
    res = paired_t(d)
    assert res.t == pytest.approx(2.90, abs=0.01)
    assert res.df == 170
    assert res.p_greater == pytest.approx(0.002, abs=0.001)


def test_paired_t_constant_differences():
    assert paired_t([0.0, 0.0, 0.0]).t == 0.0
    res = paired_t([0.5, 0.5, 0.5])
    assert res.infinite and math.isinf(res.t) and res.p == 0.0
    with pytest.raises(ContractError):
        paired_t([1.0])


def test_pearson():
    assert pearson_corr([1, 2, 3], [2, 4, 7]) == pytest.approx(5 / math.sqrt(2 * 114 / 9))
    assert pearson_corr([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)
    res = pearson_test([1, 2, 3, 4, 5], [2, 1, 4, 3, 5])
    assert res.r == pytest.approx(0.8)
    assert 0.05 < res.p < 0.2
    with pytest.raises(DegenerateSampleError):
        pearson_corr([1, 1, 1], [1, 2, 3])
    with pytest.raises(ContractError):
        pearson_corr([1, 2], [1, 2, 3])


# --------------------------------------------------------------------------- #
# Mixed model
# --------------------------------------------------------------------------- #
def _orthogonal_noise_grid(n_p=8, n_m=9, b0=3.0, b1=0.5, seed=0):
    """Full grid whose residuals are exactly orthogonal to every participant,
    item and condition column, so the OLS corner is the ML optimum."""
    rng = np.random.default_rng(seed)
    cond = (rng.permutation(n_p * n_m) % 2).reshape(n_p, n_m).astype(float)

    def center(m):
        return m - m.mean(axis=1, keepdims=True) - m.mean(axis=0, keepdims=True) + m.mean()

    e = center(rng.standard_normal((n_p, n_m)))
    c = center(cond)
    e -= (e * c).sum() / (c * c).sum() * c
    y = b0 + b1 * cond + e
    rows = [
        LmmObservation(float(y[p, m]), f"p{p}", f"m{m}", int(cond[p, m]))
        for p in range(n_p)
        for m in range(n_m)
    ]
    return rows, float((e * e).mean())


def test_zero_variance_components_match_ols():
    rows, resid_var = _orthogonal_noise_grid()
    fit = fit_lmm(rows)
    assert fit.var_participant == 0.0
    assert fit.var_item == 0.0
    assert fit.intercept == pytest.approx(3.0, abs=1e-4)
    assert fit.condition_effect == pytest.approx(0.5, abs=1e-4)
    assert fit.var_residual == pytest.approx(resid_var, abs=1e-4)
    assert not fit.degenerate


def test_exactly_fitted_sample_is_degenerate():
    rows = [LmmObservation(4.0, p, m, 0) for p in ("a", "b") for m in ("x", "y")]
    fit = fit_lmm(rows, include_condition=False)
    assert fit.degenerate and math.isinf(fit.loglik)
    with pytest.raises(DegenerateSampleError):
        likelihood_ratio_test(fit, fit)


def test_lmm_contracts():
    few = [LmmObservation(3.0, "a", m, k % 2) for k, m in enumerate("xyz")]
    with pytest.raises(ContractError):
        fit_lmm(few)
    cells = [("a", "x"), ("b", "y"), ("a", "y")]
    constant = [LmmObservation(float(k), p, m, 1) for k, (p, m) in enumerate(cells)]
    with pytest.raises(ContractError):
        fit_lmm(constant)
    with pytest.raises(ContractError):
        LmmObservation(3.0, "a", "x", 2)


def test_lrt_rejects_fits_on_different_data():
    a = planted_effect_ratings(6, 6, 0.4, 0.3, 0.3, 1.0, seed=1)
    b = planted_effect_ratings(6, 6, 0.4, 0.3, 0.3, 1.0, seed=2)
    with pytest.raises(ContractError):
        likelihood_ratio_test(fit_lmm(a), fit_lmm(b, False))
    full, null = fit_lmm(a), fit_lmm(a, False)
    with pytest.raises(ContractError):
        likelihood_ratio_test(null, full)


def test_condition_lrt_statistic():
    data = planted_effect_ratings(15, 15, 0.8, 0.3, 0.3, 1.0, seed=4)
    cmp = condition_lrt(data)
    assert cmp.full.loglik >= cmp.null.loglik - 1e-6
    assert cmp.lrt.chi_square == pytest.approx(2 * (cmp.full.loglik - cmp.null.loglik), abs=1e-6)
    assert cmp.lrt.df == 1
    assert cmp.lrt.p < 0.05
    assert cmp.full.n_obs == 225
    assert set(cmp.full.as_dict()) >= {"intercept", "condition", "var_item", "loglik"}


def test_observations_csv(tmp_path):
    data = planted_effect_ratings(3, 4, 0.4, 0.3, 0.3, 1.0, seed=0)
    path = tmp_path / "ratings.csv"
    observations_frame(data).to_csv(path, index=False)
    back = read_observations(path)
    assert [(o.participant, o.item, o.condition) for o in back] == [
        (o.participant, o.item, o.condition) for o in data
    ]
    assert [o.rating for o in back] == pytest.approx([o.rating for o in data])


@pytest.mark.slow
def test_planted_effect_is_recovered_and_detected():
    estimates, rejections = [], 0
    for seed in range(50):
        cmp = condition_lrt(planted_effect_ratings(30, 30, 0.4, 0.3, 0.3, 1.0, seed))
        estimates.append(cmp.full.condition_effect)
        rejections += cmp.lrt.p < 0.05
    assert abs(np.mean(estimates) - 0.4) <= 0.1
    assert rejections >= 45


@pytest.mark.slow
def test_null_effect_keeps_the_type_one_error_rate():
    rejections = sum(
        condition_lrt(planted_effect_ratings(30, 30, 0.0, 0.3, 0.3, 1.0, seed)).lrt.p < 0.05
        for seed in range(100)
    )
    assert rejections <= 10


# --------------------------------------------------------------------------- #
# Study tables
# --------------------------------------------------------------------------- #
@pytest.fixture(scope="module")
def study():
    profile = StudyProfile(n_pairs=30)
    return generate_study(profile, seed=5).study


def test_analyze_table_layout(study):
    tables = analyze(study, lmm=True)
    assert set(tables) == {
        "sender_ratings",
        "sender_recipient",
        "recipient_shared_vs_recommended",
        "promiscuity_correlation",
        "lmm_shared_or_not",
        "lmm_recipient",
    }
    assert tables["sender_ratings"]["group"].tolist() == [
        "Both-Shown",
        "Own-Shown",
        "Other-Shown",
        ALL_USERS,
    ]
    assert tables["sender_recipient"]["group"].tolist() == [
        "Both-Shown",
        "Both-Shown: Own Algorithm",
        "Both-Shown: Other Algorithm",
        "Own-Shown",
        "Other-Shown",
        ALL_USERS,
    ]
    assert tables["recipient_shared_vs_recommended"]["group"].tolist() == [
        "Both-Shown",
        "Own-Shown",
        COMBINED,
    ]
    assert tables["promiscuity_correlation"]["rating_by"].tolist() == ["sender", "recipient"]
    assert tables["lmm_shared_or_not"]["group"].tolist()[-1] == ALL_USERS
    assert tables["lmm_recipient"]["group"].tolist()[-1] == COMBINED


def test_pooled_rows_add_up(study):
    tables = analyze(study, lmm=False)
    sender = tables["sender_ratings"].set_index("group")
    groups = ["Both-Shown", "Own-Shown", "Other-Shown"]
    assert sender.loc[ALL_USERS, "n_a"] == sender.loc[groups, "n_a"].sum()
    assert sender.loc[ALL_USERS, "n_b"] == sender.loc[groups, "n_b"].sum()
    rated_shares = sum(
        1 for r in study.positives if study.ratings.get(r.sender, r.item) is not None
    )
    assert sender.loc[ALL_USERS, "n_a"] == rated_shares

    paired = tables["sender_recipient"].set_index("group")
    split = paired.loc[["Both-Shown: Own Algorithm", "Both-Shown: Other Algorithm"], "n_a"].sum()
    assert split == paired.loc["Both-Shown", "n_a"]
    assert (paired["n_a"] == paired["n_b"]).all()
    assert "lmm_shared_or_not" not in tables
