from fractions import Fraction

import numpy as np
import pytest

import qwalk as q
from qwalk.walkalg import invert_exact, walk_matrix

from conftest import random_connected_graphs


class TestWalkMatrix:
    def test_p2_identity(self):
        assert np.array_equal(walk_matrix(q.path(2), 0).astype(int), np.eye(2, dtype=int))

    def test_p3_center(self):
        w = walk_matrix(q.path(3), 1)
        assert w[:, 0].tolist() == [0, 1, 0]
        assert w[:, 1].tolist() == [1, 0, 1]
        assert w[:, 2].tolist() == [0, 2, 0]

    def test_entries_count_walks(self):
        g = q.petersen()
        w = walk_matrix(g, 0, cap=64)
        a = np.asarray(g.adjacency, dtype=object)
        power = np.eye(10, dtype=object)
        for k in range(10):
            assert w[:, k].tolist() == (power @ np.eye(10, dtype=object)[:, 0]).tolist()
            power = a @ power

    def test_cap(self):
        with pytest.raises(ValueError):
            walk_matrix(q.path(5), 0, cap=4)


class TestRankExact:
    def test_identity(self):
        assert q.rank_exact(np.eye(6, dtype=int)) == 6

    def test_p3_center_rank_two(self):
        assert q.rank_exact(walk_matrix(q.path(3), 1)) == 2

    def test_p4_end_full_rank(self):
        assert q.rank_exact(walk_matrix(q.path(4), 0)) == 4

    def test_zero_and_rectangular(self):
        assert q.rank_exact(np.zeros((3, 3), dtype=int)) == 0
        assert q.rank_exact(np.array([[1, 2, 3], [2, 4, 6]], dtype=object)) == 1

    def test_matches_numpy_on_random(self):
        rng = np.random.default_rng(97)
        for _ in range(50):
            m = rng.integers(-3, 4, size=(6, 6))
            assert q.rank_exact(m) == np.linalg.matrix_rank(m.astype(float))


class TestControllability:
    def test_p4_end_controllable(self):
        assert q.is_controllable(q.path(4), 0)

    def test_p3_center_not(self):
        assert not q.is_controllable(q.path(3), 1)

    def test_complete_graphs_never(self):
        # repeated eigenvalue -1 rules out a full support
        for n in (3, 4, 5):
            assert not q.is_controllable(q.complete(n), 0)

    def test_controllable_implies_distinct_spectrum(self):
        for g in random_connected_graphs(60, 8, seed=101):
            sd = q.decompose(g)
            for u in range(g.n):
                if q.is_controllable(g, u):
                    assert sd.num_distinct == g.n


class TestCospectrality:
    def test_p3_ends(self):
        assert q.cospectral_via_charpoly(q.path(3), 0, 2)
        assert q.cospectral_via_gram(q.path(3), 0, 2)

    def test_p4_end_vs_interior(self):
        # P4 - end = P3 (t^3 - 2t) but P4 - interior = K2 + K1 (t^3 - t)
        assert not q.cospectral_via_charpoly(q.path(4), 0, 1)
        assert not q.cospectral_via_gram(q.path(4), 0, 1)

    def test_complete_any_pair(self):
        assert q.cospectral_via_charpoly(q.complete(5), 1, 3)

    def test_gram_entries_are_walk_numbers(self):
        g = q.petersen()
        w = walk_matrix(g, 0)
        gram = w.T @ w
        a = np.asarray(g.adjacency, dtype=object)
        power = np.eye(10, dtype=object)
        diag = []
        for k in range(2 * 10 - 1):
            diag.append(power[0, 0])
            power = a @ power
        for r in range(10):
            for s in range(10):
                assert gram[r, s] == diag[r + s]

    def test_gram_charpoly_agreement_random(self):
        # the Gram and deleted-charpoly definitions of cospectrality coincide
        for g in random_connected_graphs(60, 8, seed=103):
            for u in range(g.n):
                for v in range(u + 1, g.n):
                    assert q.cospectral_via_gram(g, u, v) == \
                        q.cospectral_via_charpoly(g, u, v)


class TestSupportCrosscheck:
    @pytest.mark.parametrize("g,u,expected", [
        (q.path(3), 1, (2, 2, 2)),
        (q.path(4), 0, (4, 4, 4)),
        (q.Graph.from_edges(1, []), 0, (1, 1, 1)),
    ])
    def test_examples(self, g, u, expected):
        assert q.support_size_crosscheck(g, u) == expected

    def test_three_way_agreement_random(self):
        for g in random_connected_graphs(40, 8, seed=107):
            for u in range(g.n):
                rank, support, poles = q.support_size_crosscheck(g, u)
                assert rank == support == poles


class TestTransferSimilarity:
    def test_p4_ends_is_reversal(self):
        ts = q.transfer_similarity(q.path(4), 0, 3)
        reversal = np.eye(4, dtype=int)[::-1]
        assert np.array_equal(ts.matrix.astype(int), reversal)
        assert ts.commutes_with_adjacency and ts.maps_u_to_v and ts.orthogonal

    def test_same_vertex_gives_identity(self):
        ts = q.transfer_similarity(q.path(4), 0, 0)
        assert np.array_equal(ts.matrix.astype(int), np.eye(4, dtype=int))

    def test_non_controllable_rejected(self):
        with pytest.raises(ValueError):
            q.transfer_similarity(q.path(3), 1, 0)

    def test_discovered_cospectral_pair(self):
        # smallest brute-force hit from the n <= 9 catalog search: cospectral,
        # controllable, and no automorphism maps one endpoint to the other
        g = q.parse_graph6("GSv~Sc")
        assert q.cospectral_via_charpoly(g, 1, 7)
        assert q.is_controllable(g, 1) and q.is_controllable(g, 7)
        from qwalk.partitions import automorphisms
        assert not any(p[1] == 7 for p in automorphisms(g))
        ts = q.transfer_similarity(g, 1, 7)
        assert ts.orthogonal and ts.commutes_with_adjacency and ts.maps_u_to_v
        entries = {abs(x) for row in ts.matrix for x in row}
        assert not entries <= {0, 1}  # orthogonal but not a permutation

    def test_exact_inverse(self):
        m = [[2, 1], [7, 4]]
        inv = invert_exact(m)
        assert inv.tolist() == [[Fraction(4), Fraction(-1)], [Fraction(-7), Fraction(2)]]
        with pytest.raises(ValueError):
            invert_exact([[1, 2], [2, 4]])
