from __future__ import annotations

import numpy as np
import pytest

from relstate import (
    EdgeListError,
    diameter,
    from_edge_list,
    gen_binary_tree_plus,
    gen_circulant,
    gen_complete,
    gen_small_world,
    gen_star,
    graph_digest,
    is_bipartite,
    is_connected,
    operators,
    spectrum_normalized_laplacian,
    summarize,
    to_edge_list,
)
from relstate.graph import Graph

from randnets import random_connected_graph


# ---------------------------------------------------------------------------
# edge-list parsing
# ---------------------------------------------------------------------------

def test_parse_path_graph():
    g = from_edge_list("0 1\n1 2")
    assert g.n == 3
    assert g.edges == ((0, 1), (1, 2))
    assert g.neighbors == ((1,), (0, 2), (1,))


def test_parse_dedups_reversed_duplicate():
    g = from_edge_list("0 1\n1 0")
    assert g.edges == ((0, 1),)


def test_parse_rejects_self_loop_with_line_number():
    with pytest.raises(EdgeListError, match="line 1"):
        from_edge_list("0 0")


def test_parse_rejects_malformed_token_with_line_number():
    with pytest.raises(EdgeListError, match="line 2"):
        from_edge_list("0 1\n1 x")
    with pytest.raises(EdgeListError, match="line 1"):
        from_edge_list("0 1 2\n0 1")


def test_parse_rejects_empty_edge_set():
    with pytest.raises(EdgeListError, match="empty"):
        from_edge_list("# just a comment\n")


def test_parse_header_and_comments():
    g = from_edge_list("# comment\nn 5\n0 1\n# another\n1 2\n")
    assert g.n == 5
    assert g.edge_count == 2


def test_parse_header_too_small_rejected():
    with pytest.raises(EdgeListError):
        from_edge_list("n 2\n0 3\n")


def test_round_trip_all_generators():
    graphs = [
        gen_complete(7),
        gen_circulant(9, (1, 2)),
        gen_star(6),
        gen_small_world(3, 4),
        gen_binary_tree_plus(12),
    ]
    for g in graphs:
        assert from_edge_list(to_edge_list(g)) == g


def test_serializer_format():
    text = to_edge_list(gen_star(3))
    lines = text.splitlines()
    assert lines[0].startswith("# generated by")
    assert lines[1] == "n 3"
    assert lines[2:] == ["0 1", "0 2"]


def test_digest_is_stable_and_structure_only():
    assert graph_digest(gen_star(4)) == graph_digest(from_edge_list("0 1\n0 2\n0 3"))
    assert graph_digest(gen_star(4)) != graph_digest(gen_star(5))


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def test_complete_36():
    g = gen_complete(36)
    s = summarize(g)
    assert g.edge_count == 630
    assert s.density == 1.0
    assert s.diameter == 1
    assert s.d_avg == 35


def test_complete_small():
    assert gen_complete(2).edges == ((0, 1),)
    assert gen_complete(3).degrees == (2, 2, 2)
    with pytest.raises(ValueError):
        gen_complete(1)


def test_circulant_36_1_2():
    g = gen_circulant(36, (1, 2))
    assert g.degrees == (4,) * 36
    assert diameter(g) == 9
    assert g.edge_count == 72


def test_circulant_ring_even_is_bipartite():
    g = gen_circulant(36, (1,))
    assert g.degrees == (2,) * 36
    assert is_bipartite(g)


def test_circulant_covers_complete():
    assert gen_circulant(5, (1, 2)).edges == gen_complete(5).edges


def test_circulant_rejects_bad_offsets():
    with pytest.raises(ValueError):
        gen_circulant(36, (0,))
    with pytest.raises(ValueError):
        gen_circulant(36, (19,))
    with pytest.raises(ValueError):
        gen_circulant(36, (1, 1))


def test_star_36():
    s = summarize(gen_star(36))
    assert (s.d_min, s.d_max) == (1, 35)
    assert s.bipartite and not s.regular
    assert s.diameter == 2


def test_star_small():
    assert gen_star(2).edges == ((0, 1),)
    assert gen_star(4).degree(0) == 3
    assert gen_star(4).degrees[1:] == (1, 1, 1)


def test_small_world_9_27():
    g = gen_small_world(9, 27)
    s = summarize(g)
    assert g.n == 36
    assert (s.d_min, s.d_max, s.diameter) == (8, 27, 3)
    assert not s.bipartite and not s.regular
    assert round(s.density, 4) == 0.6159


def test_small_world_small():
    assert gen_small_world(2, 2).edges == ((0, 1), (1, 2), (2, 3))
    s = summarize(gen_small_world(3, 3))
    assert (s.d_min, s.d_max) == (2, 3)


def test_binary_tree_plus_table_rows():
    g32 = gen_binary_tree_plus(32)
    s32 = summarize(g32)
    assert (s32.d_min, s32.d_max, s32.diameter) == (1, 3, 8)
    assert not s32.bipartite
    assert summarize(gen_binary_tree_plus(128)).diameter == 12
    assert not is_bipartite(gen_binary_tree_plus(128))


def test_binary_tree_plus_smallest_is_triangle():
    assert gen_binary_tree_plus(3).edges == ((0, 1), (0, 2), (1, 2))
    with pytest.raises(ValueError):
        gen_binary_tree_plus(2)


def test_binary_tree_plus_never_bipartite():
    for n in range(3, 70):
        g = gen_binary_tree_plus(n)
        assert is_connected(g) and not is_bipartite(g), f"n={n}"


# ---------------------------------------------------------------------------
# operators and summary
# ---------------------------------------------------------------------------

def test_path_laplacian():
    ops = operators(from_edge_list("0 1\n1 2"))
    expected = np.array([[1, -1, 0], [-1, 2, -1], [0, -1, 1]], dtype=float)
    assert np.array_equal(ops.laplacian, expected)


def test_k2_normalized_laplacian():
    ops = operators(gen_complete(2))
    assert np.allclose(ops.normalized_laplacian, [[1, -1], [-1, 1]])


def test_k3_normalized_laplacian_spectrum():
    # 3x3 solved by hand: adjacency eigenvalues {2, -1, -1}, so I - A/2
    # has eigenvalues {0, 1.5, 1.5}
    vals = np.linalg.eigvalsh(operators(gen_complete(3)).normalized_laplacian)
    assert np.allclose(np.sort(vals), [0.0, 1.5, 1.5], atol=1e-12)


def test_operators_reject_isolated_vertex():
    with pytest.raises(ValueError, match="isolated"):
        operators(Graph.from_edges(3, [(0, 1)]))


def test_operator_invariants_on_generators_and_random():
    rng = np.random.default_rng(7)
    graphs = [gen_complete(6), gen_circulant(10, (1, 3)), gen_star(8),
              gen_small_world(4, 5), gen_binary_tree_plus(20)]
    graphs += [random_connected_graph(rng) for _ in range(10)]
    for g in graphs:
        a, d, lap, norm_lap = operators(g)
        assert np.array_equal(a, a.T)
        assert np.all(np.diag(a) == 0)
        assert np.allclose(a.sum(axis=1), np.diag(d))
        assert np.max(np.abs(lap.sum(axis=1))) == 0.0
        assert np.max(np.abs(lap - lap.T)) <= 1e-12
        assert np.max(np.abs(norm_lap - norm_lap.T)) <= 1e-12
        assert is_connected(g)


def test_summary_star4():
    s = summarize(gen_star(4))
    assert s.bipartite and not s.regular and s.diameter == 2


def test_summary_c36_density():
    s = summarize(gen_circulant(36, (1, 2)))
    assert round(s.density, 4) == 0.1143
    assert s.diameter == 9
    assert s.d_avg == 4


def test_summary_disconnected_has_no_diameter():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    s = summarize(g)
    assert not s.connected
    assert s.diameter is None


def test_summary_degree_ordering_invariant():
    rng = np.random.default_rng(11)
    for _ in range(20):
        s = summarize(random_connected_graph(rng))
        assert s.d_min <= s.d_avg <= s.d_max
        assert s.regular == (s.d_min == s.d_max)
        assert 0 < s.density <= 1


def test_bipartite_iff_top_normalized_laplacian_eigenvalue_is_2():
    rng = np.random.default_rng(23)
    graphs = [gen_star(9), gen_circulant(8, (1,)), gen_complete(5),
              gen_binary_tree_plus(10)]
    graphs += [random_connected_graph(rng, 4, 16) for _ in range(40)]
    for g in graphs:
        top = spectrum_normalized_laplacian(g).values[-1]
        assert is_bipartite(g) == (abs(top - 2.0) < 1e-9)
