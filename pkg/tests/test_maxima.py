import numpy as np
import pytest

from maxstream import _rng
from maxstream.cadlag import StepFunction
from maxstream.maxima import (PointMeasure, max_functional,
                              partial_max_process, time_space_measure,
                              truncated_max_process)
from maxstream.skorokhod import osc_m1


class TestPartialMax:
    def test_running_max(self):
        f = partial_max_process([1.0, 3.0, 2.0], 1.0)
        assert f.initial_value == 0.0
        assert f.times.tolist() == [1 / 3, 2 / 3]
        assert f.values.tolist() == [1.0, 3.0]
        assert f.eval(1.0) == 3.0

    def test_single_point(self):
        f = partial_max_process([5.0], 5.0)
        assert f.eval(0.5) == 0.0
        assert f.eval(1.0) == 1.0
        assert f.n_jumps == 1

    def test_constant_sequence_single_jump(self):
        f = partial_max_process([4.0, 4.0, 4.0, 4.0], 4.0)
        assert f.n_jumps == 1
        assert f.times.tolist() == [0.25]
        assert f.eval(0.1) == 0.0
        assert f.eval(0.25) == 1.0

    def test_value_at_one_is_global_max(self):
        rng = _rng.rng_from_seed(0)
        for _ in range(20):
            xs = _rng.frechet(rng, 1.0, 1.0, 30)
            a = 2.0
            f = partial_max_process(xs, a)
            assert f.eval(1.0) == np.max(xs) / a

    def test_validation(self):
        with pytest.raises(ValueError):
            partial_max_process([], 1.0)
        with pytest.raises(ValueError):
            partial_max_process([1.0], 0.0)


class TestTruncatedMax:
    def test_truncation(self):
        f = truncated_max_process([1.0, 3.0, 2.0], 1.0, 2.0)
        assert f.eval(0.5) == 0.0
        assert f.eval(2 / 3) == 3.0

    def test_all_below_threshold(self):
        f = truncated_max_process([1.0, 2.0], 1.0, 5.0)
        assert f == StepFunction(0.0)

    def test_small_u_equals_full(self):
        rng = _rng.rng_from_seed(1)
        xs = _rng.frechet(rng, 1.0, 1.0, 50)
        assert truncated_max_process(xs, 1.5, 1e-12) == \
            partial_max_process(xs, 1.5)


class TestTimeSpaceMeasure:
    def test_atoms(self):
        eta = time_space_measure([1.0, 3.0], 1.0)
        assert eta.times.tolist() == [0.5, 1.0]
        assert eta.marks.tolist() == [1.0, 3.0]

    def test_zero_marks_dropped(self):
        eta = time_space_measure([0.0, 2.0], 2.0)
        assert len(eta) == 1
        assert eta.times.tolist() == [1.0]
        assert eta.marks.tolist() == [1.0]

    def test_counting(self):
        rng = _rng.rng_from_seed(2)
        xs = _rng.frechet(rng, 1.0, 1.0, 64)
        assert len(time_space_measure(xs, 1.0)) == 64


class TestMaxFunctional:
    def test_two_atoms_same_time(self):
        u = 0.3
        eta = PointMeasure([(0.5, 2 * u), (0.5, 3 * u)])
        f = max_functional(eta, u)
        assert f.eval(0.25) == 0.0
        assert f.eval(0.5) == 3 * u
        assert f.eval(1.0) == 3 * u
        assert f.n_jumps == 1

    def test_empty_measure(self):
        assert max_functional(PointMeasure([]), 1.0) == StepFunction(0.0)

    def test_all_marks_below_u(self):
        eta = PointMeasure([(0.2, 0.5), (0.7, 0.9)])
        assert max_functional(eta, 1.0) == StepFunction(0.0)

    def test_atom_at_time_zero_enters_initial_value(self):
        eta = PointMeasure([(0.0, 2.0), (0.5, 3.0)])
        f = max_functional(eta, 1.0)
        assert f.eval(0.0) == 2.0
        assert f.eval(0.75) == 3.0

    def test_infinite_marks_excluded(self):
        eta = PointMeasure([(0.4, np.inf), (0.6, 2.0)])
        f = max_functional(eta, 1.0)
        assert f.eval(1.0) == 2.0


class TestConsistencyIdentity:
    def test_functional_equals_truncated_path(self):
        rng = _rng.rng_from_seed(3)
        for _ in range(200):
            n = int(rng.integers(1, 60))
            xs = _rng.frechet(rng, 1.0, 1.0, n)
            a_n = float(_rng.frechet(rng, 1.0, 2.0))
            u = float(_rng.frechet(rng, 1.0, 0.5))
            lhs = max_functional(time_space_measure(xs, a_n), u)
            rhs = truncated_max_process(xs, a_n, u)
            assert lhs == rhs


class TestPathProperties:
    def test_monotone_and_zero_m1_oscillation(self):
        rng = _rng.rng_from_seed(4)
        for _ in range(30):
            xs = _rng.frechet(rng, 1.0, 1.0, 40)
            f = partial_max_process(xs, 1.0)
            assert np.all(np.diff(f.values) > 0)
            for delta in (0.05, 0.5):
                assert osc_m1(f, delta) == 0.0

    def test_max_inequality(self):
        # |max x - max y| <= max |x - y| transfers to the paths.
        rng = _rng.rng_from_seed(5)
        for _ in range(50):
            n = 30
            xs = _rng.frechet(rng, 1.0, 1.0, n)
            ys = _rng.frechet(rng, 1.0, 1.0, n)
            a_n = 2.0
            fx = partial_max_process(xs, a_n)
            fy = partial_max_process(ys, a_n)
            assert fx.sup_distance(fy) <= np.max(np.abs(xs - ys)) / a_n + 1e-15

    def test_truncation_sandwich(self):
        rng = _rng.rng_from_seed(6)
        for _ in range(50):
            xs = _rng.frechet(rng, 1.0, 1.0, 25)
            u = float(_rng.frechet(rng, 1.0, 1.0))
            full = partial_max_process(xs, 1.0)
            trunc = truncated_max_process(xs, 1.0, u)
            grid = np.linspace(0, 1, 101)
            fv = np.array([full.eval(t) for t in grid])
            tv = np.array([trunc.eval(t) for t in grid])
            assert np.all(tv <= fv)
            assert full.sup_distance(trunc) <= u + 1e-15


class TestPointMeasure:
    def test_sorted_storage(self):
        eta = PointMeasure([(0.9, 1.0), (0.1, 2.0), (0.9, 0.5)])
        assert eta.times.tolist() == [0.1, 0.9, 0.9]
        assert eta.marks.tolist() == [2.0, 0.5, 1.0]

    def test_multiplicities_kept(self):
        eta = PointMeasure([(0.5, 1.0), (0.5, 1.0)])
        assert len(eta) == 2

    def test_validation(self):
        with pytest.raises(ValueError):
            PointMeasure([(1.5, 1.0)])
        with pytest.raises(ValueError):
            PointMeasure([(0.5, 0.0)])
        with pytest.raises(ValueError):
            PointMeasure([(0.5, -1.0)])

    def test_json_round_trip(self):
        eta = PointMeasure([(0.9, 1.0), (0.1, 2.0), (0.5, 0.25)])
        back = PointMeasure.from_json(eta.to_json())
        assert back == eta

    def test_json_sorted_by_time_then_mark(self):
        eta = PointMeasure([(0.5, 3.0), (0.5, 1.0)])
        assert eta.to_json() == '{"atoms": [[0.5, 1.0], [0.5, 3.0]]}'
