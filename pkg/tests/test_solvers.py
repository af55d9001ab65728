import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIG_EDGES, make_graph
from ncmatch.errors import ContractViolation, ResourceLimitError
from ncmatch.blocks import split_into_blocks
from ncmatch.graphs import HyperGraph, reduce_degree_one
from ncmatch.samplers import ModelSpec, sample_binomial, sample_instance
from ncmatch.seeds import Seed
from ncmatch.solvers import (
    brute_force_lnm,
    lis_permutation,
    lis_strict_2d,
    longest_chain_dd,
    longest_chain_points,
    longest_noncrossing_matching,
    validate_witness,
)
from ncmatch.suites import random_small_instance


class TestLisStrict2d:
    def test_identity_chain(self):
        assert lis_strict_2d([(1, 1), (2, 2), (3, 3)]) == 3

    def test_two_word_array(self):
        assert lis_strict_2d(FIG_EDGES) == 4

    def test_incomparable(self):
        assert lis_strict_2d([(1, 2), (2, 1)]) == 1

    def test_empty(self):
        assert lis_strict_2d([]) == 0

    def test_duplicates_cannot_chain(self):
        assert lis_strict_2d([(1, 1), (1, 1), (2, 2)]) == 2


class TestChainDd:
    def test_three_points(self):
        pts = [(0.1, 0.2, 0.3), (0.2, 0.3, 0.4), (0.3, 0.1, 0.5)]
        assert longest_chain_dd(pts) == 2

    def test_identical_tuples(self):
        assert longest_chain_dd([(2, 2, 2)] * 5) == 1

    def test_diagonal_reals(self):
        vals = np.sort(np.random.default_rng(0).random(40))
        pts = np.stack([vals] * 4, axis=1)
        assert longest_chain_dd(pts) == 40

    def test_rejects_1d(self):
        with pytest.raises(ContractViolation):
            longest_chain_dd(np.ones((3, 1)))


class TestLisPermutation:
    def test_identity(self):
        assert lis_permutation(list(range(1, 20))) == 19

    def test_reversal(self):
        assert lis_permutation(list(range(19, 0, -1))) == 1

    def test_hand_case(self):
        assert lis_permutation([3, 4, 1, 2]) == 2

    def test_rejects_non_permutation(self):
        with pytest.raises(ContractViolation, match="permutation"):
            lis_permutation([1, 2, 2])


class TestBruteForce:
    def test_empty(self):
        assert brute_force_lnm(HyperGraph((3, 3), np.empty((0, 2), dtype=np.int64))) == 0

    def test_complete_k33(self):
        g = make_graph((3, 3), [(i, j) for i in (1, 2, 3) for j in (1, 2, 3)])
        assert brute_force_lnm(g) == 3

    def test_cap(self):
        edges = [(i, j) for i in range(1, 6) for j in range(1, 6)]
        with pytest.raises(ResourceLimitError):
            brute_force_lnm(make_graph((5, 5), edges))


class TestDispatch:
    def test_two_word_array(self, fig_graph):
        assert longest_noncrossing_matching(fig_graph).length == 4

    def test_empty_and_single(self):
        assert longest_noncrossing_matching(HyperGraph((2, 2), np.empty((0, 2), dtype=np.int64))).length == 0
        assert longest_noncrossing_matching(make_graph((2, 2), [(1, 1)])).length == 1

    def test_three_dimensional(self):
        g = make_graph((3, 3, 5), [(1, 1, 1), (2, 2, 2), (3, 3, 1)])
        assert longest_noncrossing_matching(g).length == 2

    def test_witness_valid_2d(self, fig_graph):
        res = longest_noncrossing_matching(fig_graph, want_witness=True)
        assert res.length == 4 and len(res.witness) == 4
        validate_witness(fig_graph, res)

    def test_witness_valid_random(self):
        seed = Seed(41)
        for r in range(60):
            g = random_small_instance(seed.generator(r))
            res = longest_noncrossing_matching(g, want_witness=True)
            validate_witness(g, res)
            assert res.length == brute_force_lnm(g)

    def test_witness_empty_graph(self):
        g = HyperGraph((2, 2), np.empty((0, 2), dtype=np.int64))
        res = longest_noncrossing_matching(g, want_witness=True)
        assert res.length == 0 and res.witness == []


class TestPointChains:
    def test_d1_distinct_count(self):
        assert longest_chain_points(np.array([[0.5], [0.25], [0.5]])) == 2

    def test_cap_for_high_dim(self):
        with pytest.raises(ResourceLimitError):
            longest_chain_points(np.zeros((40_000, 3)))

    def test_rejects_non_finite(self):
        with pytest.raises(ContractViolation, match="finite"):
            longest_chain_points(np.array([[0.1, 0.2], [np.nan, 0.4]]))


@st.composite
def small_edge_sets(draw):
    d = draw(st.integers(2, 3))
    m = draw(st.integers(0, 8))
    edges = draw(
        st.lists(
            st.tuples(*[st.integers(1, 5)] * d),
            min_size=m,
            max_size=m,
            unique=True,
        )
    )
    return d, edges


class TestOracleAgreement:
    @given(small_edge_sets())
    @settings(max_examples=250, deadline=None)
    def test_all_paths_match_brute_force(self, case):
        d, edges = case
        g = HyperGraph.from_edges((5,) * d, edges)
        oracle = brute_force_lnm(g)
        assert longest_noncrossing_matching(g).length == oracle
        if g.num_edges:
            assert longest_chain_dd(g.edges) == oracle
            if d == 2:
                assert lis_strict_2d(g.edges) == oracle

    def test_2d_crosscheck_lis_vs_dp(self):
        seed = Seed(42)
        for r in range(500):
            g = sample_binomial((15, 12), 0.25, seed.generator(r))
            assert lis_strict_2d(g.edges) == longest_chain_dd(g.edges)


class TestStructuralInvariants:
    def test_adding_edge_never_decreases(self):
        seed = Seed(43)
        for r in range(80):
            rng = seed.generator(r)
            g = sample_binomial((8, 8), 0.2, rng)
            before = longest_noncrossing_matching(g).length
            present = set(map(tuple, g.edges.tolist()))
            free = [(i, j) for i in range(1, 9) for j in range(1, 9) if (i, j) not in present]
            if not free:
                continue
            extra = free[int(rng.integers(len(free)))]
            bigger = HyperGraph.from_edges((8, 8), list(present) + [extra])
            assert longest_noncrossing_matching(bigger).length >= before

    def test_length_bounded_by_smallest_class(self):
        seed = Seed(44)
        for r in range(40):
            g = sample_binomial((5, 9, 7), 0.2, seed.generator(r))
            assert longest_noncrossing_matching(g).length <= min(g.dims)

    def test_reduction_never_increases_length(self):
        seed = Seed(45)
        for r in range(60):
            g = sample_binomial((10, 10), 0.25, seed.generator(r))
            assert (
                longest_noncrossing_matching(reduce_degree_one(g)).length
                <= longest_noncrossing_matching(g).length
            )

    def test_superadditive_over_block_split(self):
        seed = Seed(46)
        for r in range(40):
            spec = ModelSpec.binomial((12, 12), 0.3)
            g = sample_instance(spec, seed.generator(r))
            split = split_into_blocks(g, 3)
            total = sum(longest_noncrossing_matching(b).length for b in split.blocks)
            assert longest_noncrossing_matching(g).length >= total
