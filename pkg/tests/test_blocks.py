import numpy as np
import pytest

from conftest import make_graph
from ncmatch.blocks import (
    bounds_from_type,
    partition_matching,
    partition_type,
    product_inequalities_check,
    split_into_blocks,
    verify_partition_bounds,
)
from ncmatch.errors import ContractViolation
from ncmatch.samplers import sample_binomial
from ncmatch.seeds import Seed
from ncmatch.solvers import longest_noncrossing_matching
from ncmatch.suites import _check_partition, random_chain


class TestSplitIntoBlocks:
    def test_single_block(self):
        g = make_graph((5, 5), [(1, 1), (3, 4), (5, 5)])
        split = split_into_blocks(g, 1)
        assert split.q == 1 and split.block_dims == (5, 5)
        assert split.blocks[0] == g

    def test_hand_split(self):
        g = make_graph((4, 4), [(1, 1), (2, 2), (3, 3), (4, 4)])
        split = split_into_blocks(g, 2)
        assert split.block_dims == (2, 2)
        assert split.blocks[0].edge_tuples() == [(1, 1), (2, 2)]
        assert split.blocks[1].edge_tuples() == [(1, 1), (2, 2)]  # re-indexed

    def test_remainder_vertices_dropped(self):
        g = make_graph((5, 5), [(5, 5)])
        split = split_into_blocks(g, 2)
        # blocks cover vertices 1..4 only; (5, 5) is in no block
        assert all(b.num_edges == 0 for b in split.blocks)

    def test_q_bounds(self):
        g = make_graph((3, 3), [(1, 1)])
        with pytest.raises(ContractViolation):
            split_into_blocks(g, 4)

    def test_blocks_vertex_disjoint_and_superadditive(self):
        seed = Seed(61)
        for r in range(40):
            g = sample_binomial((10, 13), 0.3, seed.generator(r))
            q = 1 + r % 5
            split = split_into_blocks(g, q)
            for j in range(2):
                seen = set()
                for subsets in split.ranges:
                    block_set = set(subsets[j].tolist())
                    assert not (seen & block_set)
                    seen |= block_set
            total = sum(longest_noncrossing_matching(b).length for b in split.blocks)
            assert longest_noncrossing_matching(g).length >= total


class TestPartitionMatching:
    def test_hand_simulation(self):
        p = partition_matching([(1, 1), (2, 2), (3, 3), (4, 4)], s_max=2, span_cap=10)
        assert p.bounds == [(0, 1), (2, 3)]
        assert p.first_edges() == [(1, 1), (3, 3)]
        assert p.last_edges() == [(2, 2), (4, 4)]

    def test_single_block_when_caps_are_loose(self):
        chain = [(1, 2), (3, 5), (6, 9)]
        p = partition_matching(chain, s_max=3, span_cap=100)
        assert p.bounds == [(0, 2)]

    def test_span_forces_cut(self):
        p = partition_matching([(1, 1), (2, 50)], s_max=10, span_cap=5)
        assert p.bounds == [(0, 0), (1, 1)]

    def test_rejects_non_chain(self):
        with pytest.raises(ContractViolation, match="chain"):
            partition_matching([(1, 2), (2, 1)], s_max=3, span_cap=10)

    def test_empty_chain(self):
        p = partition_matching(np.empty((0, 2), dtype=np.int64), s_max=2, span_cap=3)
        assert p.q == 0

    def test_fuzz_invariants(self):
        seed = Seed(62)
        rng = seed.generator(0)
        for _ in range(200):
            d = int(rng.integers(2, 5))
            chain = random_chain(rng, d, int(rng.integers(1, 30)))
            problems = _check_partition(chain, int(rng.integers(1, 7)), int(rng.integers(0, 25)))
            assert not problems, problems

    def test_type_round_trip(self):
        chain = random_chain(Seed(63).generator(0), 3, 25)
        p = partition_matching(chain, s_max=4, span_cap=14)
        t = partition_type(p)
        assert len(t) == 3 * p.q
        assert bounds_from_type(t, chain) == p.bounds


class TestVerifyPartitionBounds:
    def test_single_block_trivial(self):
        p = partition_matching([(1, 1), (2, 2)], s_max=5, span_cap=100)
        rep = verify_partition_bounds(p, n_mean=0.5, l=1.0)
        assert rep["q"] == 1 and rep["ok"]

    def test_conforming_regime_instance(self):
        # a chain built to sit inside the band's regime: parameter t = 100,
        # growth exponent 0.6 (l = 100**0.6 ~ 15.85), classes of size 1000,
        # 200 diagonal edges at stride 5, caps s_max = 3 and span 31
        t, alpha = 100.0, 0.6
        l = t**alpha
        n = 1000
        chain = np.stack([np.arange(5, 1001, 5)] * 2, axis=1)
        assert chain.shape[0] == 200
        m_max = chain.shape[0]
        s_max = int(l * m_max / n)  # floor(l * m / N) = 3
        assert s_max == 3
        span_cap = int(2 * l)  # C_g = 2 covers the vertex-sum balance
        p = partition_matching(chain, s_max=s_max, span_cap=span_cap)
        rep = verify_partition_bounds(p, n_mean=n, l=l)
        assert rep["ok"], rep
        assert rep["q"] == 67

    def test_out_of_regime_report_only(self):
        # caps chosen freely: the function still reports, never raises
        p = partition_matching([(1, 1), (2, 2), (3, 3)], s_max=1, span_cap=0)
        rep = verify_partition_bounds(p, n_mean=100.0, l=1.0)
        assert rep["q"] == 3 and not rep["ok"]


class TestProductInequalities:
    def test_direct_arithmetic(self):
        assert product_inequalities_check([2.0, 2.0])

    def test_fails_below_one_for_d3(self):
        # the vector inequality is genuinely false for small entries
        assert not product_inequalities_check([0.01, 0.01, 0.01])

    def test_holder_single_row_equality(self):
        assert product_inequalities_check(np.array([[2.0, 3.0, 4.0]]))

    def test_near_equality_is_exact(self):
        # floats would wobble here; rational arithmetic must not
        assert product_inequalities_check([1000.0, 1000.0])
        assert product_inequalities_check([10.0**8, 10.0**8])

    def test_rejects_nonpositive(self):
        with pytest.raises(ContractViolation):
            product_inequalities_check([1.0, 0.0])

    def test_fuzz(self):
        rng = Seed(64).generator(0)
        for _ in range(2000):
            d = int(rng.integers(1, 7))
            assert product_inequalities_check(rng.integers(1, 50, size=d))
            assert product_inequalities_check(1.0 + rng.random(d) * 40)
            q = int(rng.integers(1, 5))
            assert product_inequalities_check(rng.integers(1, 20, size=(q, d)))
            assert product_inequalities_check(0.1 + rng.random((q, d)) * 5)  # hoelder holds everywhere
