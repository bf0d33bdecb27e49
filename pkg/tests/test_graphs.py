import itertools
import math

import numpy as np
import pytest

from ripcert import (
    clique_number,
    clique_ric_identity,
    coherence,
    expander_mixing_check,
    flip_canonical,
    fro_constant,
    gaussian_matrix,
    graph_from_seidel,
    join_decompose,
    legendre,
    negate_columns,
    paley_graph,
    predicted_srg,
    seidel_from_gram,
    seidel_trace_expansion,
    srg_check,
    steiner_etf,
    verify_etf,
)
from ripcert.constructions import Frame, hadamard
from ripcert.errors import (
    AmbiguousSignError,
    CongruenceError,
    EnumerationBudgetError,
    InfeasibleSizeError,
    InvalidParameterError,
    NotEtfError,
    NotJoinError,
    NotRegularError,
)
from ripcert.graphs import SimpleGraph, SrgParams
from ripcert.linalg import DenseMatrix
from ripcert.modular import quadratic_residues


def realify_paley(p):
    from ripcert import paley_etf, realify

    return realify(paley_etf(p))


def complete_graph(n):
    return SimpleGraph(~np.eye(n, dtype=bool))


def empty_graph(n):
    return SimpleGraph(np.zeros((n, n), dtype=bool))


@pytest.fixture(scope="module")
def paley13_pipeline(paley13_real):
    anchor = paley13_real.n - 1
    flipped = flip_canonical(paley13_real, anchor)
    seidel, mu = seidel_from_gram(flipped)
    join_graph = graph_from_seidel(seidel)
    descendant = join_decompose(join_graph, anchor)
    return flipped, seidel, mu, join_graph, descendant


class TestLegendre:
    def test_zero_one_two(self):
        assert legendre(0, 5) == 0
        assert legendre(1, 13) == 1
        assert legendre(2, 5) == -1

    def test_matches_square_enumeration(self):
        p = 13
        squares = set(quadratic_residues(p)) - {0}
        for k in range(1, p):
            assert legendre(k, p) == (1 if k in squares else -1)

    def test_rejects_even_or_composite(self):
        with pytest.raises(InvalidParameterError):
            legendre(3, 2)
        with pytest.raises(InvalidParameterError):
            legendre(3, 9)


class TestPaleyGraph:
    def test_p5_is_pentagon(self):
        g = paley_graph(5)
        assert np.all(g.degrees == 2)
        # residues mod 5 are {1, 4}: neighbors are n +/- 1
        for a in range(5):
            assert g.adjacency[a, (a + 1) % 5]

    def test_p13_is_six_regular(self):
        assert np.all(paley_graph(13).degrees == 6)

    def test_rejects_composite_and_congruence(self):
        with pytest.raises(InvalidParameterError):
            paley_graph(9)
        with pytest.raises(CongruenceError):
            paley_graph(7)

    @pytest.mark.parametrize("p", [5, 13, 17, 29])
    def test_strongly_regular_parameters(self, p):
        result = srg_check(paley_graph(p))
        assert result.is_srg
        assert result.params == SrgParams(p, (p - 1) // 2, (p - 5) // 4, (p - 1) // 4)


class TestSeidelFromGram:
    def test_two_column_frame(self):
        frame = Frame(DenseMatrix(np.array([[1.0, -1.0]])))
        seidel, mu = seidel_from_gram(frame)
        assert np.array_equal(seidel.entries, [[0, -1], [-1, 0]])
        assert math.isclose(mu, 1.0, rel_tol=1e-12)

    def test_paley5_matches_residue_signs(self, paley5_real):
        seidel, mu = seidel_from_gram(paley5_real)
        assert math.isclose(mu, 1 / math.sqrt(5), abs_tol=1e-10)
        assert np.all(np.diagonal(seidel.entries) == 0)
        for a in range(5):
            for b in range(5):
                if a != b:
                    assert seidel.entries[a, b] == legendre(b - a, 5)

    def test_steiner_simplex_block_is_all_negative(self, steiner_6x16):
        seidel, _ = seidel_from_gram(steiner_6x16)
        block = seidel.entries[:4, :4]
        assert np.all(block[~np.eye(4, dtype=bool)] == -1)

    def test_rejects_non_etf(self):
        with pytest.raises(NotEtfError):
            seidel_from_gram(gaussian_matrix(8, 12, 1))

    def test_rejects_orthonormal_signs(self):
        with pytest.raises(AmbiguousSignError):
            seidel_from_gram(Frame(DenseMatrix(np.eye(3))))


class TestFlipCanonical:
    def test_already_canonical_unchanged(self):
        frame = Frame(DenseMatrix(np.array([[1.0, -1.0]])))
        assert np.array_equal(flip_canonical(frame, 0).matrix.data, frame.matrix.data)

    def test_anchor_row_all_negative(self, paley13_real):
        anchor = paley13_real.n - 1
        flipped = flip_canonical(paley13_real, anchor)
        row = np.delete(flipped.gram_array[anchor].real, anchor)
        assert np.all(row < 0)
        assert verify_etf(flipped, 1e-12).all_ok

    def test_preserves_gram_magnitudes(self, paley13_real):
        flipped = flip_canonical(paley13_real, 0)
        assert np.allclose(
            np.abs(flipped.gram_array), np.abs(paley13_real.gram_array), atol=1e-12
        )

    def test_double_negation_is_identity(self, paley5_real):
        once = negate_columns(paley5_real, [1, 3])
        twice = negate_columns(once, [1, 3])
        assert np.array_equal(twice.matrix.data, paley5_real.matrix.data)

    def test_idempotent(self, paley13_real):
        flipped = flip_canonical(paley13_real, 2)
        again = flip_canonical(flipped, 2)
        assert np.array_equal(flipped.matrix.data, again.matrix.data)


class TestGraphFromSeidel:
    def test_all_positive_gives_empty(self):
        from ripcert.graphs import SeidelMatrix

        s = SeidelMatrix(np.ones((4, 4), dtype=np.int8) - np.eye(4, dtype=np.int8))
        assert graph_from_seidel(s).adjacency.sum() == 0

    def test_all_negative_gives_complete(self):
        from ripcert.graphs import SeidelMatrix

        s = SeidelMatrix(np.eye(4, dtype=np.int8) - np.ones((4, 4), dtype=np.int8))
        g = graph_from_seidel(s)
        assert np.all(g.degrees == 3)

    def test_paley13_descendant_is_paley_graph_up_to_residue_relabeling(
        self, paley13_pipeline
    ):
        # the descendant joins n ~ n' when n' - n is a nonresidue; scaling
        # vertices by a nonresidue maps it onto the residue graph exactly
        _, _, _, _, descendant = paley13_pipeline
        p = 13
        nonresidue = next(
            k for k in range(2, p) if k not in set(quadratic_residues(p))
        )
        perm = [(nonresidue * v) % p for v in range(p)]
        relabeled = np.zeros((p, p), dtype=bool)
        for a in range(p):
            for b in range(p):
                relabeled[perm[a], perm[b]] = descendant.adjacency[a, b]
        assert np.array_equal(relabeled, paley_graph(p).adjacency)


class TestSrgCheck:
    def test_complete_graph_degenerate(self):
        result = srg_check(complete_graph(5))
        assert result.status == "degenerate"
        assert "mu" in result.reason

    def test_empty_graph_degenerate(self):
        result = srg_check(empty_graph(4))
        assert result.status == "degenerate"
        assert "lambda" in result.reason

    def test_pentagon(self):
        result = srg_check(paley_graph(5))
        assert result.params == SrgParams(5, 2, 0, 1)

    def test_paley13(self):
        assert srg_check(paley_graph(13)).params == SrgParams(13, 6, 2, 3)

    def test_irregular_graph(self):
        g = SimpleGraph.from_edges(4, [(0, 1), (1, 2)])
        assert srg_check(g).status == "not-srg"

    def test_regular_but_not_srg(self):
        # 6-cycle: adjacent pairs share 0 neighbors, non-adjacent 0 or 2
        g = SimpleGraph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])
        assert srg_check(g).status == "not-srg"


class TestPredictedSrg:
    def test_known_sizes(self):
        assert predicted_srg(7, 14) == SrgParams(13, 6, 2, 3)
        assert predicted_srg(3, 6) == SrgParams(5, 2, 0, 1)
        assert predicted_srg(6, 16) == SrgParams(15, 6, 1, 3)

    def test_infeasible_size(self):
        with pytest.raises(InfeasibleSizeError):
            predicted_srg(5, 11)

    def test_requires_overcompleteness(self):
        with pytest.raises(InvalidParameterError):
            predicted_srg(6, 7)


class TestJoinDecompose:
    def test_star_center_leaves_empty_graph(self):
        star = SimpleGraph.from_edges(5, [(0, i) for i in range(1, 5)])
        rest = join_decompose(star, 0)
        assert rest.n == 4 and rest.adjacency.sum() == 0

    def test_non_universal_vertex_rejected(self):
        star = SimpleGraph.from_edges(5, [(0, i) for i in range(1, 5)])
        with pytest.raises(NotJoinError):
            join_decompose(star, 1)

    def test_paley_pipeline_matches_prediction(self, paley13_pipeline):
        _, _, _, _, descendant = paley13_pipeline
        assert srg_check(descendant).params == predicted_srg(7, 14)

    def test_steiner_pipeline_regression(self, steiner_6x16):
        anchor = steiner_6x16.n - 1
        flipped = flip_canonical(steiner_6x16, anchor)
        seidel, _ = seidel_from_gram(flipped)
        descendant = join_decompose(graph_from_seidel(seidel), anchor)
        assert srg_check(descendant).params == predicted_srg(6, 16)

    def test_triple_system_pipeline_regression(self):
        from ripcert import steiner_triple

        frame = steiner_etf(steiner_triple(7), hadamard(4, "sylvester"))
        anchor = frame.n - 1
        flipped = flip_canonical(frame, anchor)
        seidel, _ = seidel_from_gram(flipped)
        descendant = join_decompose(graph_from_seidel(seidel), anchor)
        assert srg_check(descendant).params == predicted_srg(7, 28)


class TestCliqueNumber:
    def test_complete(self):
        result = clique_number(complete_graph(6))
        assert result.size == 6 and result.exact

    def test_pentagon_is_triangle_free(self):
        assert clique_number(paley_graph(5)).size == 2

    def test_paley13(self):
        result = clique_number(paley_graph(13))
        assert result.size == 3
        assert result.size < math.sqrt(13)
        # the witness really is a clique
        adj = paley_graph(13).adjacency
        for a, b in itertools.combinations(result.clique, 2):
            assert adj[a, b]

    @pytest.mark.parametrize("p", [5, 13, 17, 29, 37, 41])
    def test_below_sqrt_p(self, p):
        result = clique_number(paley_graph(p))
        assert result.exact
        assert result.size < math.sqrt(p)

    def test_budget_exhaustion_flags_inexact(self):
        result = clique_number(paley_graph(29), budget=3)
        assert not result.exact
        assert result.size <= clique_number(paley_graph(29)).size


class TestCliqueRicIdentity:
    def test_k2_on_any_real_etf(self, steiner_6x16):
        anchor = steiner_6x16.n - 1
        flipped = flip_canonical(steiner_6x16, anchor)
        seidel, _ = seidel_from_gram(flipped)
        descendant = join_decompose(graph_from_seidel(seidel), anchor)
        report = clique_ric_identity(flipped, descendant, 2, anchor)
        assert report.ok
        assert math.isclose(report.exact.value, coherence(steiner_6x16), abs_tol=1e-9)

    def test_full_range_on_every_constructed_real_etf(self, steiner_6x16, paley5_real):
        frames = [steiner_6x16, paley5_real, realify_paley(17)]
        for frame in frames:
            anchor = frame.n - 1
            flipped = flip_canonical(frame, anchor)
            seidel, mu = seidel_from_gram(flipped)
            descendant = join_decompose(graph_from_seidel(seidel), anchor)
            omega = clique_number(descendant).size
            for k in range(2, omega + 2):
                report = clique_ric_identity(flipped, descendant, k, anchor)
                assert report.ok, (frame.label, k)

    def test_paley13_all_k(self, paley13_pipeline):
        flipped, _, mu, _, descendant = paley13_pipeline
        omega = clique_number(descendant).size
        for k in range(2, omega + 2):
            report = clique_ric_identity(flipped, descendant, k, flipped.n - 1)
            assert report.ok
            assert math.isclose(report.exact.value, (k - 1) * mu, abs_tol=1e-9)
            assert math.isclose(report.clique_value, (k - 1) * mu, abs_tol=1e-9)

    def test_k_beyond_omega_rejected(self, paley13_pipeline):
        flipped, _, _, _, descendant = paley13_pipeline
        omega = clique_number(descendant).size
        from ripcert.errors import PreconditionError

        with pytest.raises(PreconditionError):
            clique_ric_identity(flipped, descendant, omega + 2, flipped.n - 1)


class TestExpanderMixing:
    def test_empty_sets(self):
        check = expander_mixing_check(paley_graph(13), [], [])
        assert check.lhs == 0.0 and check.rhs == 0.0 and check.ok

    def test_complete_graph(self):
        check = expander_mixing_check(complete_graph(6), [0, 1, 2], [3, 4])
        assert math.isclose(check.second_eigenvalue, 1.0, abs_tol=1e-9)
        assert check.ok

    def test_irregular_rejected(self):
        g = SimpleGraph.from_edges(4, [(0, 1), (1, 2)])
        with pytest.raises(NotRegularError):
            expander_mixing_check(g, [0], [1])

    def test_paley13_random_draws(self):
        g = paley_graph(13)
        rng = np.random.Generator(np.random.Philox(key=123))
        for _ in range(200):
            si = int(rng.integers(1, 14))
            sj = int(rng.integers(1, 14))
            i_set = sorted(int(x) for x in rng.choice(13, si, replace=False))
            j_set = sorted(int(x) for x in rng.choice(13, sj, replace=False))
            assert expander_mixing_check(g, i_set, j_set).ok

    def test_edge_count_convention_is_quadratic_form(self):
        g = paley_graph(5)
        check = expander_mixing_check(g, [0, 1], [0, 1])
        # edge {0,1} exists and is counted once per orientation
        assert check.edge_count == 2.0


class TestSeidelTraceExpansion:
    def test_two_columns_q1(self, paley5_real):
        mu = coherence(paley5_real)
        result = seidel_trace_expansion(paley5_real, (0, 1), 1)
        assert math.isclose(result.direct, 2 * mu * mu, rel_tol=1e-10)
        assert result.tuple_sum == 2
        assert result.ok

    def test_paley13_q2(self, paley13_real):
        result = seidel_trace_expansion(paley13_real, (0, 1, 2, 3), 2)
        assert result.ok
        assert result.q2_first_term == 4 * 3 * 3
        assert result.q2_first_term + result.q2_residual == result.tuple_sum

    def test_multiple_subsets_agree(self, paley13_real):
        for kset in [(0, 2, 5, 9), (1, 3, 7, 13), (0, 1, 2)]:
            for q in (1, 2):
                assert seidel_trace_expansion(paley13_real, kset, q).ok

    def test_budget(self, paley13_real):
        with pytest.raises(EnumerationBudgetError):
            seidel_trace_expansion(paley13_real, (0, 1, 2, 3), 2, budget=10)


class TestGramRoundTrip:
    def test_identity_plus_mu_seidel_reproduces_gram(self, paley13_real, steiner_6x16):
        for frame in (paley13_real, steiner_6x16):
            seidel, mu = seidel_from_gram(frame)
            rebuilt = np.eye(frame.n) + mu * seidel.entries
            from ripcert.linalg import spectral_norm

            assert spectral_norm((rebuilt - frame.gram_array).astype(complex)) < 1e-9


class TestFroEdgeCountIdentity:
    def test_paley13_k_up_to_three(self, paley13_real):
        seidel, mu = seidel_from_gram(paley13_real)
        adj = graph_from_seidel(seidel).adjacency.astype(int)
        n = paley13_real.n
        k = 3
        subs = [
            c for size in range(1, k + 1) for c in itertools.combinations(range(n), size)
        ]
        best_graph = 0.0
        for first in subs:
            for second in subs:
                if set(first) & set(second):
                    continue
                edges = sum(adj[i, j] for i in first for j in second)
                value = (
                    2
                    * mu
                    * abs(edges - len(first) * len(second) / 2)
                    / math.sqrt(len(first) * len(second))
                )
                best_graph = max(best_graph, value)
        assert math.isclose(fro_constant(paley13_real, k), best_graph, abs_tol=1e-9)
