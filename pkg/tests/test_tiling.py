import random
import pytest

from mptile.constructions import (ConstructionSpec, build_block_construction, gcd_lower_bound_spec,
                                  sigma_lower_bound_spec)
from mptile.copies import HCopy, count_H_subgraphs, enumerate_H_copies, independence_number
from mptile.errors import ContractError, ResourceError
from mptile.graph import Graph, MultipartiteGraph
from mptile.tiling import (Status, Tiling, max_H_tiling, pattern_solution_to_tiling,
                           pattern_tiling_complete_multipartite, perfect_H_tiling, row_tiling_upper_bound,
                           verify_tiling)
from oracles import brute_copy_sets, brute_max_tiling, random_multipartite


def test_copies_examples(C5, K3, complete):
    assert [c.image for c in enumerate_H_copies(C5, C5)] == [(0, 1, 2, 3, 4)]
    assert len(enumerate_H_copies(complete([2, 2, 2]), K3)) == 8
    K221 = complete([2, 2, 1])
    assert len(enumerate_H_copies(K221, C5)) == 1
    assert count_H_subgraphs(K221, C5) == 4
    assert count_H_subgraphs(complete([1, 1, 1, 1, 1]), C5) == 12


def test_copies_match_brute_force(C5, K3, K113):
    rng = random.Random(13)
    for k in range(24):
        H = (C5, K3, K113)[k % 3]
        G = random_multipartite(rng, 3, rng.randint(2, 3), 0.4 + 0.6 * rng.random())
        copies = enumerate_H_copies(G, H)
        assert [c.image for c in copies] == brute_copy_sets(G, H)
        for c in copies:
            assert all(G.has_edge(c.witness[u], c.witness[v]) for u, v in H.edges)


def test_copies_on_plain_graph(K3):
    G = Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3), (1, 3)])
    assert [c.image for c in enumerate_H_copies(G, K3)] == [(0, 1, 2), (1, 2, 3)]


def test_copy_cap(K3, complete):
    with pytest.raises(ResourceError):
        enumerate_H_copies(complete([3, 3, 3]), K3, cap=5)


def test_independence_number(C5, K113, K3):
    assert (independence_number(C5), independence_number(K113), independence_number(K3)) == (2, 3, 1)


def test_perfect_examples(C5, complete):
    G = complete([4, 3, 3])
    res = perfect_H_tiling(G, C5)
    assert res.status == Status.FOUND and len(res.tiling) == 2
    vectors = sorted(tuple(sum(1 for v in c.image if G.class_of[v] == i) for i in range(3)) for c in res.tiling.copies)
    assert vectors == [(2, 1, 2), (2, 2, 1)]
    assert perfect_H_tiling(complete([5, 4, 1]), C5).status == Status.NONE
    assert perfect_H_tiling(complete([5, 4, 1]), C5, use_lp=False, use_profiles=False).status == Status.NONE
    assert perfect_H_tiling(complete([2, 2, 2]), C5).status == Status.NONE


def test_perfect_status_unknown_is_not_none(K113):
    G, _ = build_block_construction(gcd_lower_bound_spec(K113, 10))
    res = perfect_H_tiling(G, K113, budget=3, use_lp=False, use_profiles=False)
    assert res.status == Status.UNKNOWN
    assert res.to_json()["status"] == "unknown"


def test_max_examples(C5, complete):
    res = max_H_tiling(complete([5, 5, 5]), C5)
    assert len(res.tiling) == 3 and res.optimal
    assert verify_tiling(complete([5, 5, 5]), C5, res.tiling, perfect=True)
    empty = max_H_tiling(complete([1, 1, 1]), C5)
    assert len(empty.tiling) == 0 and empty.optimal


def test_max_matches_brute_force(C5, K3, K113):
    rng = random.Random(14)
    for k in range(18):
        H = (C5, K3, K113)[k % 3]
        G = random_multipartite(rng, 3, 3, 0.5 + 0.5 * rng.random())
        res = max_H_tiling(G, H)
        assert res.optimal
        assert len(res.tiling) == brute_max_tiling(G, H)
        full = perfect_H_tiling(G, H)
        assert (full.status == Status.FOUND) == (len(res.tiling) * H.vertex_count == G.vertex_count)


def test_verify_tiling_rejects(C5, complete):
    G = complete([2, 2, 1])
    good = enumerate_H_copies(G, C5)[0]
    assert verify_tiling(G, C5, Tiling([good]), perfect=True)
    assert not verify_tiling(G, C5, Tiling([good, good]))
    bad = HCopy(good.image, tuple(sorted(good.image)))
    assert not verify_tiling(G, C5, Tiling([bad]))


def test_row_bound_examples(C5, K3):
    G, B = build_block_construction(sigma_lower_bound_spec(C5, 10))
    assert row_tiling_upper_bound(B, C5) == 3
    G, B = build_block_construction(ConstructionSpec(3, 6, ((2, 2, 2),) * 3))
    assert row_tiling_upper_bound(B, K3) == 6
    G, B = build_block_construction(ConstructionSpec(3, 4, ((0, 2, 2),) * 3))
    assert row_tiling_upper_bound(B, C5) == 0


def test_row_bound_dominates(C5, K3):
    rng = random.Random(15)
    for _ in range(8):
        cols = []
        for _ in range(3):
            x = rng.randint(0, 4)
            y = rng.randint(0, 4 - x)
            cols.append((x, y, 4 - x - y))
        G, B = build_block_construction(ConstructionSpec(3, 4, tuple(cols)))
        for H in (C5, K3):
            res = max_H_tiling(G, H, blocks=B)
            assert res.optimal
            assert len(res.tiling) <= row_tiling_upper_bound(B, H)
            assert len(res.tiling) == brute_max_tiling(G, H)


def test_divisibility_obstruction(K113):
    for n in (5, 10):
        G, B = build_block_construction(gcd_lower_bound_spec(K113, n))
        assert B.row_sizes[0] - B.row_sizes[1] == 1
        assert perfect_H_tiling(G, K113, blocks=B).status == Status.NONE


def test_pattern_examples(C5, K3, K113):
    sol = pattern_tiling_complete_multipartite((16, 15, 14), C5)
    assert sol.counts == {(1, 2, 2): 2, (2, 1, 2): 3, (2, 2, 1): 4}
    assert pattern_tiling_complete_multipartite((4, 4, 4), K3).counts == {(1, 1, 1): 4}
    assert pattern_tiling_complete_multipartite((6, 5, 4), K113) is None
    assert pattern_tiling_complete_multipartite((2, 2, 2), C5) is None


def test_pattern_solution_realises(C5, K113):
    for sizes, H in (((16, 15, 14), C5), ((5, 5, 5), C5), ((7, 5, 3), K113)):
        sol = pattern_tiling_complete_multipartite(sizes, H)
        G, T = pattern_solution_to_tiling(sol, sizes, H)
        assert verify_tiling(G, H, T, perfect=True)


def test_pattern_matches_search_small(C5, K3, K113):
    for H in (C5, K3, K113):
        for sizes in ((3, 3, 4), (5, 3, 2), (4, 4, 2), (6, 2, 2), (3, 3, 3)):
            pat = pattern_tiling_complete_multipartite(sizes, H) is not None
            res = perfect_H_tiling(MultipartiteGraph.complete(sizes), H)
            assert pat == (res.status == Status.FOUND)


def test_block_structure_validation():
    with pytest.raises(ContractError):
        ConstructionSpec(3, 4, ((1, 1, 1), (2, 1, 1), (1, 2, 1)))
