import pytest

from botlab.graph import (
    COMM,
    FRIENDSHIP,
    NEIGHBORHOOD,
    SOCIAL,
    GraphError,
    SocialGraph,
    compute_stats,
    distance2_out_candidates,
    load_edgelist,
    reciprocation,
    save_edgelist,
)
from conftest import graph_from
from oracles import scc_sizes_networkx


def test_single_arc_then_reverse():
    g = SocialGraph([1, 2])
    g.add_social_arc(1, 2, FRIENDSHIP)
    assert g.arc_count() == 1
    assert reciprocation(g) == 0
    g.add_social_arc(2, 1, NEIGHBORHOOD)
    assert reciprocation(g) == 1.0


def test_self_arc_and_unknown_node_rejected():
    g = SocialGraph([1, 2])
    with pytest.raises(GraphError):
        g.add_social_arc(1, 1, FRIENDSHIP)
    with pytest.raises(GraphError):
        g.add_social_arc(1, 9)
    with pytest.raises(GraphError):
        g.add_message(2, 2)


def test_retyping_keeps_one_arc():
    g = SocialGraph([1, 2])
    g.add_social_arc(1, 2, FRIENDSHIP)
    g.add_social_arc(1, 2, NEIGHBORHOOD)
    assert g.arc_count() == 1
    assert g.tie_type(1, 2) == NEIGHBORHOOD


def test_message_counter():
    g = SocialGraph([1, 2])
    for _ in range(3):
        g.add_message(1, 2)
    assert g.weight(1, 2) == 3
    assert g.msg_in(2) == 3
    assert g.msg_out(2) == 0
    assert g.arc_count(COMM) == 1


def test_distance2_candidates():
    path = graph_from([(1, 2), (2, 3)])
    assert distance2_out_candidates(path, 1) == {3}
    tri = graph_from([(1, 2), (2, 3), (1, 3)])
    assert distance2_out_candidates(tri, 1) == set()
    lone = SocialGraph([5])
    assert distance2_out_candidates(lone, 5) == set()


def test_distance2_excludes_self():
    g = graph_from([(1, 2), (2, 1)])
    assert distance2_out_candidates(g, 1) == set()


def test_stats_cycles():
    s = compute_stats(graph_from([(1, 2), (2, 3), (3, 1)]))
    assert s.gscc_size == 3 and s.reciprocation == 0
    s = compute_stats(graph_from([(1, 2), (2, 1)]))
    assert s.reciprocation == 1.0 and s.mean_out_degree == 1.0


def test_stats_empty_graph():
    s = compute_stats(SocialGraph())
    assert (s.node_count, s.arc_count, s.mean_out_degree, s.reciprocation, s.gscc_size) == (0, 0, 0, 0, 0)


def test_gscc_matches_networkx():
    arcs = [(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 4), (6, 1)]
    g = graph_from(arcs)
    assert compute_stats(g).gscc_size == scc_sizes_networkx(g.nodes, arcs) == 3


def test_comm_stats_use_layer_nodes():
    g = SocialGraph(range(5))
    g.add_message(0, 1, 4)
    g.add_message(1, 0)
    s = compute_stats(g, COMM)
    assert s.node_count == 2 and s.arc_count == 2 and s.reciprocation == 1.0


def test_edgelist_roundtrip(tmp_path):
    g = SocialGraph(range(4))
    g.add_social_arc(0, 1, FRIENDSHIP)
    g.add_social_arc(1, 2)
    g.add_message(2, 0, 5)
    path = tmp_path / "g.tsv"
    save_edgelist(g, path)
    back = load_edgelist(path, nodes=[3])
    assert back == g
    assert back.tie_type(0, 1) == FRIENDSHIP and back.weight(2, 0) == 5


def test_edgelist_duplicate_reports_line(tmp_path):
    path = tmp_path / "g.tsv"
    path.write_text("1\t2\tsocial\tneighborhood\n1\t2\tsocial\tfriendship\n")
    with pytest.raises(GraphError, match=":2:"):
        load_edgelist(path)


def test_subgraph_and_adjacency():
    g = graph_from([(1, 2), (2, 3), (3, 1)])
    sub = g.subgraph([1, 2])
    assert list(sub.social_arcs()) == [(1, 2, NEIGHBORHOOD)]
    nodes, adj = g.adjacency(SOCIAL)
    assert nodes == [1, 2, 3] and adj.nnz == 3
