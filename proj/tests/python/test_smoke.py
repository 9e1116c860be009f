"""Smoke tests for the _relsamp extension module."""

import math

import pytest

import _relsamp as rs


@pytest.fixture(scope="module")
def tiny_graph():
    return rs.Graph.from_edges(
        5, 2, [(0, 0, 1), (1, 0, 2), (2, 0, 3), (0, 1, 3), (1, 1, 4)]
    )


def test_graph_queries(tiny_graph):
    g = tiny_graph
    assert g.num_nodes == 5
    assert g.num_relations == 2
    assert g.relation_counts == [3, 2]
    assert g.neighbors(1, 0) == [0, 2]
    assert g.has_edge(0, 0, 1)
    assert g.has_edge(1, 0, 0)
    assert not g.has_edge(0, 0, 3)
    assert len(g.edges()) == 5
    assert "nodes=5" in repr(g)


def test_tsv_round_trip(tmp_path, tiny_graph):
    synth = rs.generate_synthetic(
        num_nodes=60,
        num_noise_relations=2,
        edges_per_noise_relation=40,
        informative_edges=20,
        hub_degree=2,
        target_edges=5,
        seed=3,
    )
    path = tmp_path / "edges.tsv"
    path.write_text(synth["edges_tsv"])
    g = rs.Graph.load_tsv(str(path))
    assert g.num_relations == 4  # informative + 2 noise + target
    assert g.relation_counts[synth["target_relation_id"]] == synth["num_target_edges"]
    assert g.relation_names[synth["informative_relation_id"]] == "informative"


def test_hop_probabilities():
    p = rs.hop_probabilities([0.0, 0.0], [3, 1])
    assert p == pytest.approx([0.25, 0.25], abs=1e-15)
    p = rs.hop_probabilities([math.log(2.0), 0.0], [1, 1])
    assert p == pytest.approx([2 / 3, 1 / 3], abs=1e-12)


def test_inverse_frequency_logits(tiny_graph):
    logits = rs.inverse_frequency_logits(tiny_graph)
    assert logits == pytest.approx([-math.log(3.0), -math.log(2.0)], abs=1e-12)


def test_sampling_is_deterministic(tiny_graph):
    kwargs = dict(
        targets=[(0, 0, 1)], mode="uniform", fanouts=[2, 2], batch_size=1, seed=11
    )
    a = rs.sample_neighborhood(tiny_graph, **kwargs)
    b = rs.sample_neighborhood(tiny_graph, **kwargs)
    assert a == b
    assert not a["degenerate"]
    assert a["log_prob"] <= 0.0
    assert len(a["hops"]) == 2
    first = a["hops"][0]
    assert sum(first["sampled_type_counts"]) == len(first["sampled_edges"])


def test_metrics():
    assert rs.roc_auc([0.9, 0.8, 0.7, 0.6], [1, 0, 1, 0]) == pytest.approx(0.75)
    assert rs.pr_auc([0.9, 0.8, 0.7], [1, 1, 0]) == pytest.approx(1.0)


def test_train_end_to_end(tmp_path):
    synth = rs.generate_synthetic(
        num_nodes=80,
        num_noise_relations=1,
        edges_per_noise_relation=120,
        informative_edges=60,
        hub_degree=3,
        target_edges=20,
        seed=5,
    )
    path = tmp_path / "edges.tsv"
    path.write_text(synth["edges_tsv"])
    g = rs.Graph.load_tsv(str(path))

    options = {
        "hidden_dim": 4,
        "batch_size": 8,
        "max_epochs": 2,
        "patience": 2,
        "sampler": "learned",
        "decoder": "distmult",
        "target_relation": synth["target_relation_id"],
        "full_graph_eval": True,
        "seed": 7,
    }
    result = rs.train(g, options)
    assert len(result["history"]) == 2
    assert 0.0 <= result["test_pr_auc"] <= 1.0
    assert 0.0 <= result["test_roc_auc"] <= 1.0
    assert len(result["logits"]) == g.num_relations
    assert all(math.isfinite(row["train_loss"]) for row in result["history"])

    again = rs.train(g, options)
    assert again["history"] == result["history"]  # seeded determinism


def test_bad_options_raise(tiny_graph):
    with pytest.raises(ValueError):
        rs.train(tiny_graph, {"no_such_key": 1})
