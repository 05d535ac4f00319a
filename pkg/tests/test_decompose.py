import random

import pytest

from conftest import random_graph
from oneway.decompose import (
    GHZ,
    LINEAR,
    DecompositionPlan,
    Fusion,
    Subgraph,
    decompose,
    decompose_graph,
    plan_fidelity,
    reconstruction_errors,
    verify_plan,
    verify_plan_graph,
)
from oneway.frontend import CZ, HRZ, NativeSeq
from oneway.mgraph import build_mgraph

# the ten-node example: two chains and two stars sharing nodes 5, 7, 9
TEN_NODE_EDGES = [(0, 1), (1, 3), (3, 4), (8, 9), (2, 0), (2, 5), (2, 7), (2, 9), (6, 5), (6, 7), (6, 9)]


def kinds(plan):
    return [(s.kind, s.nodes) for s in plan.subgraphs]


def test_star_is_one_ghz():
    p = decompose_graph(range(4), [(0, 1), (0, 2), (0, 3)])
    assert kinds(p) == [(GHZ, (0, 1, 2, 3))]
    assert p.fusion_count == 0


def test_path_is_one_linear():
    p = decompose_graph(range(4), [(0, 1), (1, 2), (2, 3)])
    assert (p.ghz_count, p.linear_count, p.fusion_count) == (0, 1, 0)
    assert kinds(p) == [(LINEAR, (0, 1, 2, 3))]


def test_ten_node_plan():
    p = decompose_graph(range(10), TEN_NODE_EDGES)
    assert sorted(kinds(p)) == sorted(
        [(GHZ, (2, 0, 5, 7, 9)), (GHZ, (6, 5, 7, 9)), (LINEAR, (0, 1, 3, 4)), (LINEAR, (8, 9))]
    )
    assert sorted({f.node for f in p.fusions}) == [0, 5, 7, 9]
    assert p.photon_count == 15
    assert p.fusion_count == 5
    assert verify_plan_graph(p, range(10), TEN_NODE_EDGES)
    assert plan_fidelity(p, range(10), TEN_NODE_EDGES) == pytest.approx(1.0, abs=1e-9)


def test_deleted_fusion_detected():
    p = decompose_graph(range(10), TEN_NODE_EDGES)
    bad = DecompositionPlan(p.subgraphs, p.fusions[1:])
    assert reconstruction_errors(bad, range(10), TEN_NODE_EDGES)
    assert not verify_plan_graph(bad, range(10), TEN_NODE_EDGES)


def test_wrong_edge_detected_by_reconstruction():
    p = DecompositionPlan([Subgraph(LINEAR, (0, 1, 2))])
    assert not verify_plan_graph(p, range(3), [(0, 1), (0, 2)])


def test_wrong_keep_detected():
    p = decompose_graph(range(4), [(0, 1), (1, 2), (2, 0), (2, 3), (0, 3), (1, 3)])
    f = p.fusions[0]
    swapped = DecompositionPlan(p.subgraphs, [Fusion(f.node, f.consume, f.keep)] + p.fusions[1:])
    assert reconstruction_errors(swapped, range(4), [(0, 1), (1, 2), (2, 0), (2, 3), (0, 3), (1, 3)])


def test_six_node_fidelity():
    rng = random.Random(30)
    edges = random_graph(rng, 6)
    p = decompose_graph(range(6), edges)
    assert plan_fidelity(p, range(6), edges) == pytest.approx(1.0, abs=1e-9)


def test_cycle_and_isolated_nodes():
    p = decompose_graph(range(5), [(0, 1), (1, 2), (2, 0)])
    assert kinds(p) == [(LINEAR, (0, 1, 2, 0)), (LINEAR, (3,)), (LINEAR, (4,))]
    assert p.fusion_count == 1
    assert verify_plan_graph(p, range(5), [(0, 1), (1, 2), (2, 0)])


def test_random_connected_graphs():
    rng = random.Random(31)
    for _ in range(300):
        n = rng.randint(1, 10)
        edges = random_graph(rng, n, p=rng.choice([0.15, 0.35, 0.6]))
        p = decompose_graph(range(n), edges)
        assert verify_plan_graph(p, range(n), edges), edges
        for s in p.subgraphs:
            if s.kind == LINEAR:
                inner = s.nodes[:-1] if len(s.nodes) > 2 and s.nodes[0] == s.nodes[-1] else s.nodes
                assert len(set(inner)) == len(inner)
            else:
                # roots are only taken while their degree exceeds two
                assert len(s.nodes) >= 4


def test_deterministic():
    rng = random.Random(32)
    edges = random_graph(rng, 9, p=0.5)
    a = decompose_graph(range(9), edges).to_json()
    b = decompose_graph(range(9), list(reversed(edges))).to_json()
    assert a == b


def test_json_round_trip():
    p = decompose_graph(range(10), TEN_NODE_EDGES)
    assert DecompositionPlan.from_dict(p.to_dict()) == p


def test_decompose_mgraph():
    m = build_mgraph(NativeSeq(2, [HRZ(0, 0.3), CZ(0, 1), HRZ(1, 0.5), HRZ(0, 0.1)]))
    p = decompose(m)
    assert verify_plan(p, m)
    assert p.photon_count == sum(len(s.nodes) for s in p.subgraphs)


def test_self_loop_rejected():
    with pytest.raises(ValueError):
        decompose_graph([0], [(0, 0)])
