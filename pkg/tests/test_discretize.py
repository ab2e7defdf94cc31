from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clustercert.discretize import (
    best_rational_leq,
    discretize_space,
    epsilon_partition,
    inflated_params,
    lift_structure,
    quotient_space,
    replicate_quotient,
)
from clustercert.errors import DenominatorBoundTooSmall, InvalidParams, StructureViolation
from clustercert.generators import gen_blobs, gen_random
from clustercert.greedy import ClusterStructure, greedy_structure
from clustercert.space import ScaleParams, space_from_points
from clustercert.stats import alpha_min, beta_min

from .conftest import make_space, space_from_1d

P12 = ScaleParams(r=1.0, k=2)


def blob_space(seed=0, blobs=3, pts=12, spread=0.3, separation=5.0):
    return space_from_points(gen_blobs(blobs, pts, 2, spread, separation, seed))


def check_cells(space, cells, epsilon):
    flat = sorted(i for c in cells for i in c)
    assert flat == list(range(space.n))
    for c in cells:
        assert c == sorted(c)
        sub = space.dist[np.ix_(c, c)]
        assert float(sub.max()) <= epsilon + 1e-12
    assert cells == sorted(cells, key=lambda c: c[0])


class TestEpsilonPartition:
    def test_partition_properties_metric(self):
        s = blob_space()
        for eps in (0.1, 0.5, 2.0):
            check_cells(s, epsilon_partition(s, eps), eps)

    def test_partition_properties_semimetric(self):
        # no triangle inequality: the split path must still cap diameters
        s = gen_random(30, seed=4, style="random_semimetric")
        for eps in (0.15, 0.4):
            check_cells(s, epsilon_partition(s, eps), eps)

    def test_extremes(self):
        s = space_from_1d([0.0, 0.1, 0.2, 5.0])
        assert epsilon_partition(s, 100.0) == [[0, 1, 2, 3]]
        assert epsilon_partition(s, 1e-6) == [[0], [1], [2], [3]]

    def test_deterministic(self):
        s = blob_space(seed=2)
        assert epsilon_partition(s, 0.3) == epsilon_partition(s, 0.3)

    def test_rejects_bad_epsilon(self):
        s = space_from_1d([0.0, 1.0])
        with pytest.raises(InvalidParams):
            epsilon_partition(s, 0.0)

    @given(
        xs=st.lists(st.floats(min_value=0, max_value=10), min_size=2, max_size=15),
        eps=st.floats(min_value=0.05, max_value=3.0),
    )
    @settings(max_examples=50, deadline=None)
    def test_random_line_spaces(self, xs, eps):
        s = space_from_1d(xs)
        check_cells(s, epsilon_partition(s, eps), eps)


class TestBestRationalLeq:
    def test_exact_when_representable(self):
        assert best_rational_leq(Fraction(1, 3), 10) == Fraction(1, 3)
        assert best_rational_leq(Fraction(7, 2), 2) == Fraction(7, 2)

    def test_truncates_when_not(self):
        got = best_rational_leq(Fraction(355, 113), 50)
        assert got <= Fraction(355, 113)
        assert got.denominator <= 50

    def test_rejects_bad_bound(self):
        with pytest.raises(InvalidParams):
            best_rational_leq(Fraction(1, 2), 0)

    @given(
        num=st.integers(0, 10**6),
        den=st.integers(1, 10**6),
        bound=st.integers(1, 40),
    )
    @settings(max_examples=150, deadline=None)
    def test_optimal_vs_brute_force(self, num, den, bound):
        x = Fraction(num, den)
        got = best_rational_leq(x, bound)
        assert got <= x and got.denominator <= bound
        want = max(Fraction((x.numerator * q) // x.denominator, q) for q in range(1, bound + 1))
        assert got == want


class TestQuotientSpace:
    def test_integer_masses_exact(self):
        s = blob_space(seed=1, blobs=2, pts=6)
        cells = epsilon_partition(s, 0.4)
        quot, q = quotient_space(s, cells, 0.1)
        assert all(f.denominator == 1 for f in q)
        assert quot.total_measure == s.total_measure
        assert quot.n == len(cells)

    def test_distances_are_set_distances(self):
        s = space_from_1d([0.0, 0.1, 3.0, 3.05])
        cells = [[0, 1], [2, 3]]
        quot, _ = quotient_space(s, cells, 0.2)
        assert quot.dist[0, 1] == 2.9

    def test_weighted_masses_within_band(self):
        rng = np.random.default_rng(0)
        xs = np.concatenate([rng.random(3), 10 + rng.random(3)])
        s = space_from_1d(xs, weights=rng.uniform(0.3, 1.7, 6))
        cells = epsilon_partition(s, 1.5)
        eps = 0.05
        quot, q = quotient_space(s, cells, eps)
        for f, cell in zip(q, cells):
            mass = float(s.weights[cell].sum())
            assert (1 - eps) * mass - 1e-12 <= float(f) <= mass + 1e-12

    def test_denominator_bound_too_small(self):
        s = space_from_1d([0.0, 5.0], )
        s = make_space(s.dist, weights=[0.123456789, 1.0])
        with pytest.raises(DenominatorBoundTooSmall) as ei:
            quotient_space(s, [[0], [1]], 0.01, denominator_bound=1)
        assert ei.value.details()["cell"] == 0

    def test_bad_partition(self):
        s = space_from_1d([0.0, 1.0, 2.0])
        for bad in ([[0, 1]], [[0, 1], [1, 2]], [[0], [1], [2], []]):
            with pytest.raises(InvalidParams):
                quotient_space(s, bad, 0.1)

    def test_bad_epsilon(self):
        s = space_from_1d([0.0, 1.0])
        with pytest.raises(InvalidParams):
            quotient_space(s, [[0], [1]], 1.0)


class TestInflatedParams:
    def test_dominate_quotient_parameters(self):
        for seed in range(4):
            s = blob_space(seed=seed, blobs=3, pts=8, spread=0.4, separation=5.0)
            for eps in (0.1, 0.3):
                cells = epsilon_partition(s, eps)
                quot, _ = quotient_space(s, cells, eps)
                a_eps, b_eps = inflated_params(s, cells, P12, eps)
                assert alpha_min(quot, P12) <= a_eps + 1e-12
                assert beta_min(quot, P12) <= b_eps + 1e-12

    def test_beta_ratio_exact(self):
        s = blob_space(seed=5)
        cells = epsilon_partition(s, 0.2)
        _, b_eps = inflated_params(s, cells, P12, 0.2)
        assert b_eps == pytest.approx(beta_min(s, P12) / 0.8**3, rel=1e-12)

    def test_alpha_inflation_vanishes_with_epsilon(self):
        s = blob_space(seed=6)
        a = alpha_min(s, P12)
        gaps = []
        for eps in (0.4, 0.1, 0.02):
            cells = epsilon_partition(s, eps)
            a_eps, _ = inflated_params(s, cells, P12, eps)
            assert a_eps >= a
            gaps.append(a_eps - a)
        assert gaps[0] >= gaps[-1]
        assert gaps[-1] <= 0.05


class TestLiftStructure:
    def test_round_trip_certifies(self):
        s = blob_space(seed=7, blobs=3, pts=10, spread=0.2, separation=6.0)
        eps = 0.2
        disc = discretize_space(s, P12, eps)
        qstruct = greedy_structure(disc.quotient, P12)
        lifted = lift_structure(s, disc.partition, qstruct, P12, eps)
        assert lifted.measure >= qstruct.measure - 1e-9
        sizes = [len(c) for c in lifted.clusters]
        assert sum(sizes) >= qstruct.measure  # uniform original weights

    def test_rejects_bad_cell_index(self):
        s = blob_space(seed=8, blobs=2, pts=4)
        disc = discretize_space(s, P12, 0.3)
        bogus = ClusterStructure(clusters=((len(disc.partition),),), measure=1.0)
        with pytest.raises(InvalidParams):
            lift_structure(s, disc.partition, bogus, P12, 0.3)

    def test_infeasible_lift_raises(self):
        s = space_from_1d([0.0, 0.4, 5.0])
        # cells {0,1} and {2}: claiming both cells as separate clusters with
        # separation >= r fails once r exceeds their truedistance
        bogus = ClusterStructure(clusters=((0,), (1,)), measure=3.0)
        with pytest.raises(StructureViolation):
            lift_structure(s, [[0, 1], [2]], bogus, ScaleParams(r=6.0, k=2), 0.5)


class TestReplicateQuotient:
    def test_integer_weights_unfold(self):
        s = make_space([[0.0, 2.0], [2.0, 0.0]], weights=[2.0, 3.0])
        quot, q = quotient_space(s, [[0], [1]], 0.1)
        repl, counts = replicate_quotient(quot, q)
        assert counts == [2, 3]
        assert repl.n == 5
        assert repl.uniform_weights
        # parameters agree between the weighted quotient and its unfolding
        assert alpha_min(repl, P12) == pytest.approx(alpha_min(quot, P12), rel=1e-12)
        assert beta_min(repl, P12) == pytest.approx(beta_min(quot, P12), rel=1e-12)

    def test_copies_at_distance_zero(self):
        s = make_space([[0.0, 2.0], [2.0, 0.0]], weights=[2.0, 2.0])
        quot, q = quotient_space(s, [[0], [1]], 0.1)
        repl, _ = replicate_quotient(quot, q)
        assert repl.dist[0, 1] == 0.0  # two copies of cell 0
        assert repl.dist[0, 2] == 2.0

    def test_point_limit(self):
        s = make_space([[0.0, 2.0], [2.0, 0.0]], weights=[2000.0, 3000.0])
        quot, q = quotient_space(s, [[0], [1]], 0.1)
        with pytest.raises(InvalidParams):
            replicate_quotient(quot, q, max_points=100)

    def test_q_length_checked(self):
        s = make_space([[0.0, 2.0], [2.0, 0.0]])
        quot, q = quotient_space(s, [[0], [1]], 0.1)
        with pytest.raises(InvalidParams):
            replicate_quotient(quot, q[:1])


class TestDiscretizeSpace:
    def test_pipeline_consistency(self):
        s = blob_space(seed=9)
        disc = discretize_space(s, P12, 0.25)
        assert disc.epsilon == 0.25
        assert [list(c) for c in disc.partition] == epsilon_partition(s, 0.25)
        assert disc.quotient.n == len(disc.partition)
        assert disc.alpha_eps >= alpha_min(s, P12)
        assert disc.beta_eps >= beta_min(s, P12)
