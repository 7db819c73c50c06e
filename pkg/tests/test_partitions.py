import numpy as np
import pytest

import qwalk as q
from qwalk.partitions import (
    Partition,
    automorphisms,
    characteristic_matrix,
    equitable_quotient_checks,
    normalized_char_matrix,
    stabilizers_equal,
)

from conftest import random_graphs


class TestPartitionType:
    def test_cell_order_is_min_vertex(self):
        pi = Partition.from_cells([[3, 1], [0, 2]], 4)
        assert pi.cells == ((0, 2), (1, 3))

    def test_invalid_cover(self):
        with pytest.raises(ValueError):
            Partition.from_cells([[0, 1]], 3)
        with pytest.raises(ValueError):
            Partition.from_cells([[0], [0, 1]], 2)


class TestRefinement:
    def test_regular_graph_trivial_stays(self):
        g = q.cycle(5)
        pi = q.coarsest_equitable_refinement(g, Partition.trivial(5))
        assert pi == Partition.trivial(5)

    def test_discrete_stays(self):
        g = q.path(4)
        pi = q.coarsest_equitable_refinement(g, Partition.discrete(4))
        assert pi == Partition.discrete(4)

    def test_star_center_leaves_stays(self):
        g = q.star(3)
        pi0 = Partition.from_cells([[0], [1, 2, 3]], 4)
        assert q.coarsest_equitable_refinement(g, pi0) == pi0

    def test_idempotent_and_refines(self):
        for g in random_graphs(50, 10, seed=61, n_min=2):
            pi0 = Partition.from_cells([[0], range(1, g.n)], g.n)
            pi = q.coarsest_equitable_refinement(g, pi0)
            assert pi.refines(pi0)
            assert q.coarsest_equitable_refinement(g, pi) == pi

    def test_isomorphism_equivariance(self):
        rng = np.random.default_rng(5)
        for g in random_graphs(20, 8, seed=67, n_min=3):
            perm = rng.permutation(g.n)
            a = np.asarray(g.adjacency)[np.ix_(perm, perm)]
            h = q.Graph(a)
            # relabeled graph: vertex i of h corresponds to perm[i] of g
            pi_g = q.delta_u(g, int(perm[0]))
            pi_h = q.delta_u(h, 0)
            inv = np.argsort(perm)
            mapped = Partition.from_cells(
                [[int(inv[v]) for v in cell] for cell in pi_g.cells], g.n
            )
            assert mapped == pi_h


class TestDeltaU:
    def test_hypercube_distance_partition(self):
        pi = q.delta_u(q.hypercube(3), 0)
        assert [len(c) for c in pi.cells] == [1, 3, 3, 1]
        # cells are exactly the Hamming-distance classes
        assert pi.cells[0] == (0,)
        assert set(pi.cells[1]) == {1, 2, 4}
        assert set(pi.cells[3]) == {7}

    def test_p4_end_is_discrete(self):
        assert q.delta_u(q.path(4), 0) == Partition.discrete(4)

    def test_k1(self):
        assert q.delta_u(q.Graph.from_edges(1, []), 0) == Partition.discrete(1)


class TestIsEquitable:
    def test_star_quotient(self):
        ok, b = q.is_equitable(q.star(3), Partition.from_cells([[0], [1, 2, 3]], 4))
        assert ok
        assert b.tolist() == [[0, 3], [1, 0]]

    def test_p3_unbalanced_split(self):
        ok, b = q.is_equitable(q.path(3), Partition.from_cells([[0], [1, 2]], 3))
        assert not ok and b is None

    def test_discrete_gives_adjacency(self):
        g = q.cycle(4)
        ok, b = q.is_equitable(g, Partition.discrete(4))
        assert ok
        assert np.array_equal(np.asarray(b, dtype=int), np.asarray(g.adjacency))

    def test_quotient_identities_exact(self):
        for g in random_graphs(30, 10, seed=71, n_min=2):
            pi = q.coarsest_equitable_refinement(g, Partition.trivial(g.n))
            checks = equitable_quotient_checks(g, pi)
            assert checks["equitable"]
            assert checks["AP_eq_PB"]
            assert checks["A_commutes_QQt"]


class TestNormalizedCharMatrix:
    def test_discrete_is_identity(self):
        assert np.array_equal(normalized_char_matrix(Partition.discrete(4)), np.eye(4))

    def test_single_cell(self):
        qm = normalized_char_matrix(Partition.trivial(4))
        assert np.allclose(qm, np.full((4, 1), 0.5))

    def test_orthonormal_columns(self):
        pi = Partition.from_cells([[0, 2], [1], [3, 4, 5]], 6)
        qm = normalized_char_matrix(pi)
        assert np.allclose(qm.T @ qm, np.eye(3), atol=1e-12)

    def test_char_matrix_gram_is_cell_sizes(self):
        pi = Partition.from_cells([[0, 2], [1], [3, 4, 5]], 6)
        p = characteristic_matrix(pi)
        assert np.array_equal((p.T @ p).astype(int), np.diag([2, 1, 3]))

    def test_singleton_cell_fixes_basis_vector(self):
        pi = Partition.from_cells([[0, 2], [1], [3]], 4)
        qm = normalized_char_matrix(pi)
        proj = qm @ qm.T
        for u in range(4):
            fixed = np.allclose(proj[:, u], np.eye(4)[:, u])
            assert fixed == ((u,) in pi.cells)


class TestDeltaEquality:
    def test_hypercube_antipodal(self):
        assert q.check_delta_equality(q.hypercube(3), 0, 7)

    def test_p4_end_vs_interior_both_discrete(self):
        # direct computation: refining either {{0}, rest} or {{1}, rest}
        # splits P4 all the way down, so the two partitions coincide
        assert q.delta_u(q.path(4), 0) == Partition.discrete(4)
        assert q.delta_u(q.path(4), 1) == Partition.discrete(4)
        assert q.check_delta_equality(q.path(4), 0, 1)

    def test_star_center_vs_leaf(self):
        assert not q.check_delta_equality(q.star(3), 0, 1)

    def test_p3_ends(self):
        assert q.check_delta_equality(q.path(3), 0, 2)

    def test_same_vertex_rejected(self):
        with pytest.raises(ValueError):
            q.check_delta_equality(q.path(3), 1, 1)


class TestAutomorphisms:
    def test_p3_end_stabilizer_trivial(self):
        pi = q.stabilizer_orbits_bruteforce(q.path(3), 0)
        assert pi == Partition.discrete(3)

    def test_star_center_orbits(self):
        pi = q.stabilizer_orbits_bruteforce(q.star(3), 0)
        assert pi.cells == ((0,), (1, 2, 3))

    def test_cap(self):
        with pytest.raises(ValueError):
            q.stabilizer_orbits_bruteforce(q.petersen(), 0, n_cap=9)

    def test_orbits_refine_delta_u(self):
        for g in random_graphs(100, 8, seed=83, n_min=2):
            u = g.n - 1
            orbits = q.stabilizer_orbits_bruteforce(g, u)
            assert orbits.refines(q.delta_u(g, u))

    def test_automorphism_count_examples(self):
        assert len(automorphisms(q.complete(4))) == 24
        assert len(automorphisms(q.cycle(5))) == 10
        assert len(automorphisms(q.petersen())) == 120

    def test_stabilizers_equal_examples(self):
        assert stabilizers_equal(q.path(3), 0, 2)
        assert stabilizers_equal(q.hypercube(3), 0, 7)
        # swapping an end of P4 with an interior vertex is not stabilizer-safe
        assert not stabilizers_equal(q.star(3), 0, 1)
