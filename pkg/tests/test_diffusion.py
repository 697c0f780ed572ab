import math

import networkx as nx
import numpy as np
import pytest

from directed_share.diffusion import (
    CascadeConfig,
    PreferenceOracle,
    SocialGraph,
    baseline_ic,
    initial_state,
    read_graph_csv,
    read_seeds_csv,
    run,
    share_probability,
    step,
)
from directed_share.errors import ContractError, ValidationError
from directed_share.model import LikesMatrix
from directed_share.util.rng import KeyedUniform

# every user likes the single item, so every preference is 1
ALL_LIKE = LikesMatrix({u: ["i"] for u in ("a", "b", "c")})


def _random_world(seed, n=30, n_items=25):
    rng = np.random.default_rng(seed)
    g = nx.gnp_random_graph(n, 0.15, seed=seed, directed=True)
    graph = SocialGraph.from_networkx(nx.relabel_nodes(g, {k: f"u{k:02d}" for k in g.nodes}))
    items = [f"m{k:02d}" for k in range(n_items)]
    likes = LikesMatrix(
        {
            u: rng.choice(items, size=int(rng.integers(1, 8)), replace=False).tolist()
            for u in graph.nodes
        }
    )
    seeds = {u: [items[k]] for k, u in enumerate(graph.nodes[:5])}
    return graph, likes, seeds


def test_graph_rejects_self_loops_and_reads_csv(tmp_path):
    with pytest.raises(ValidationError):
        SocialGraph([("a", "a")])
    (tmp_path / "graph.csv").write_text("src,dst\na,b\nb,c\n")
    (tmp_path / "seeds.csv").write_text("user_id,item_id\na,i\na,j\n")
    g = read_graph_csv(tmp_path / "graph.csv")
    assert g.out_neighbors("a") == ("b",)
    assert not g.has_edge("b", "a")
    assert read_seeds_csv(tmp_path / "seeds.csv") == {"a": frozenset({"i", "j"})}


def test_from_friends_adds_both_directions():
    g = SocialGraph.from_friends({"a": ["b"], "c": []})
    assert g.has_edge("a", "b") and g.has_edge("b", "a")
    assert g.nodes == ["a", "b", "c"]


def test_share_probability_gates():
    config = CascadeConfig(pref_threshold=0.5, a=2.0, b=1.0, c=-1.0)
    likes = LikesMatrix({"u": ["i"], "v": ["j"]})
    graph = SocialGraph([("u", "v")])
    # pref(u, i) = 1, pref(v, i) = 0
    assert share_probability("u", "v", "i", likes, config, graph=graph) == pytest.approx(
        1 / (1 + math.exp(-1.0))
    )
    assert share_probability("v", "u", "i", likes, config, graph=graph) == 0.0
    assert share_probability("u", "v", "j", likes, config) == 0.0
    state = initial_state(graph, {"u": ["j"]}, config)
    assert share_probability("u", "v", "i", likes, config, state=state) == 0.0


def test_config_contract_and_kv():
    with pytest.raises(ContractError):
        CascadeConfig(a=1.0, b=2.0)
    with pytest.raises(ContractError):
        CascadeConfig(a=1.0, b=-0.5)
    with pytest.raises(ContractError):
        CascadeConfig(pref_threshold=1.5)
    with pytest.raises(ContractError):
        CascadeConfig(salience_window=0)
    config = CascadeConfig.from_kv({"quota": "2", "quota.alice": "5", "quota_mode": "lifetime"})
    assert config.quota_for("alice") == 5
    assert config.quota_for("bob") == 2
    assert config.as_kv()["quota.alice"] == 5
    assert CascadeConfig.from_kv({k: str(v) for k, v in config.as_kv().items()}) == config


def test_seed_outside_graph_rejected():
    with pytest.raises(ContractError):
        run(SocialGraph([("a", "b")]), {"z": ["i"]}, CascadeConfig(), 0, ALL_LIKE)
    with pytest.raises(ContractError):
        baseline_ic(SocialGraph([("a", "b")]), ["z"], 0.5, 5, 0)


def test_empty_graph_yields_empty_result():
    result = run(SocialGraph(), {}, CascadeConfig(), 0)
    assert result.steps == 0 and result.total_accepted == 0


def test_salience_window_limits_forwarding():
    graph = SocialGraph([("a", "b"), ("b", "c")])
    config = CascadeConfig(
        pref_threshold=0.0, a=50.0, b=0.0, c=0.0, adoption="always", salience_window=1
    )
    result = run(graph, {"a": ["i"]}, config, 1, ALL_LIKE)
    assert result.final_adopters["i"] == frozenset({"a", "b", "c"})
    assert result.timeseries["i"][:3] == (1, 2, 3)


def test_step_quota_caps_accepted_shares():
    graph = SocialGraph([("a", "b"), ("a", "c")])
    config = CascadeConfig(pref_threshold=0.0, a=50.0, b=0.0, c=0.0, quota=1)
    state = initial_state(graph, {"a": ["i"]}, config)
    after = step(state, graph, ALL_LIKE, config, KeyedUniform(3))
    received = [u for u in ("b", "c") if "i" in after.salient.get(u, {})]
    assert received == ["b"]
    assert after.sent == {"a": 1}


def test_lifetime_quota_is_spent_once():
    graph = SocialGraph([("a", "b"), ("a", "c")])
    config = CascadeConfig(
        pref_threshold=0.0, a=50.0, b=0.0, c=0.0, quota=1, quota_mode="lifetime", salience_window=5
    )
    result = run(graph, {"a": ["i"]}, config, 0, ALL_LIKE)
    assert result.accepted["i"] == 1


def test_zero_quota_blocks_spread():
    graph = SocialGraph([("a", "b")])
    config = CascadeConfig(pref_threshold=0.0, quotas={"a": 0})
    result = run(graph, {"a": ["i"]}, config, 0, ALL_LIKE)
    assert result.final_adopters["i"] == frozenset({"a"})
    assert result.total_attempted == 0


def test_run_is_deterministic_and_frames_line_up():
    graph, likes, seeds = _random_world(1)
    config = CascadeConfig(pref_threshold=0.05, quota=2)
    a = run(graph, seeds, config, 11, likes)
    b = run(graph, seeds, config, 11, likes)
    assert a == b
    ts = a.timeseries_frame()
    assert list(ts.columns) == ["step", "item_id", "adopters"]
    assert len(ts) == len(a.timeseries) * (a.steps + 1)
    summary = a.summary_frame().set_index("item_id")
    for item, adopters in a.final_adopters.items():
        assert summary.loc[item, "final_adopters"] == len(adopters)
        assert a.timeseries[item][-1] == len(adopters)


def _received(state, window):
    return {(v, i) for v, items in state.salient.items() for i, c in items.items() if c == window}


@pytest.mark.parametrize("seed", range(100))
def test_raising_the_threshold_shrinks_the_cascade(seed):
    graph, likes, seeds = _random_world(seed)
    big = run(graph, seeds, CascadeConfig(pref_threshold=0.02, max_steps=20), seed, likes)
    small = run(graph, seeds, CascadeConfig(pref_threshold=0.2, max_steps=20), seed, likes)
    assert small.adopter_pairs() <= big.adopter_pairs()


@pytest.mark.parametrize("seed", range(100))
def test_lowering_c_shrinks_the_cascade_when_quotas_do_not_bind(seed):
    graph, likes, seeds = _random_world(seed)
    big = run(graph, seeds, CascadeConfig(c=-1.0, quota=1000, max_steps=20), seed, likes)
    small = run(graph, seeds, CascadeConfig(c=-3.0, quota=1000, max_steps=20), seed, likes)
    assert small.adopter_pairs() <= big.adopter_pairs()


@pytest.mark.parametrize("seed", range(100))
def test_lowering_the_quota_shrinks_one_step(seed):
    graph, likes, seeds = _random_world(seed)
    loose = CascadeConfig(pref_threshold=0.02, quota=3)
    tight = CascadeConfig(pref_threshold=0.02, quota=1)
    state = initial_state(graph, seeds, loose)
    prefs = PreferenceOracle(likes)
    big = step(state, graph, likes, loose, KeyedUniform(seed), prefs=prefs)
    small = step(state, graph, likes, tight, KeyedUniform(seed), prefs=prefs)
    assert _received(small, tight.salience_window) <= _received(big, loose.salience_window)
    for u, n in small.sent.items():
        assert n <= big.sent[u]
    for u, items in small.adopted.items():
        assert items <= big.adopted[u]


def test_preference_oracle_memoizes():
    oracle = PreferenceOracle(ALL_LIKE)
    assert oracle("a", "i") == 1.0
    assert oracle("z", "i") == 0.0


# --------------------------------------------------------------------------- #
# Independent cascade
# --------------------------------------------------------------------------- #
def test_ic_full_cascade_probability_on_a_line():
    graph = SocialGraph([("a", "b"), ("b", "c")])
    full = sum(
        len(baseline_ic(graph, ["a"], 0.5, 10, seed).final_adopters["item"]) == 3
        for seed in range(10_000)
    )
    assert abs(full / 10_000 - 0.25) <= 0.02


def test_ic_extremes():
    graph = SocialGraph([("a", "b"), ("b", "c"), ("c", "a")])
    assert baseline_ic(graph, ["a"], 1.0, 10, 0).final_adopters["item"] == {"a", "b", "c"}
    none = baseline_ic(graph, {"a": ["x", "y"]}, 0.0, 10, 0)
    assert none.final_adopters == {"x": frozenset({"a"}), "y": frozenset({"a"})}
    assert none.total_attempted == 2
    with pytest.raises(ContractError):
        baseline_ic(graph, ["a"], 1.5, 10, 0)
