import numpy as np
import pytest

from maxstream.cadlag import GraphPolyline, StepFunction

from _helpers import random_step_function


def indicator_half():
    return StepFunction(0.0, [(0.5, 1.0)])


class TestEval:
    def test_before_jump(self):
        assert indicator_half().eval(0.25) == 0.0

    def test_right_continuity_at_jump(self):
        assert indicator_half().eval(0.5) == 1.0

    def test_endpoint(self):
        assert indicator_half().eval(1.0) == 1.0

    def test_call_alias(self):
        f = indicator_half()
        assert f(0.75) == f.eval(0.75)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            indicator_half().eval(-0.1)
        with pytest.raises(ValueError):
            indicator_half().eval(1.1)


class TestLeftLimit:
    def test_pre_jump_value(self):
        assert indicator_half().left_limit(0.5) == 0.0

    def test_interior_of_constancy_interval(self):
        assert indicator_half().left_limit(0.75) == 1.0

    def test_constant(self):
        f = StepFunction(3.5)
        for t in (0.1, 0.5, 1.0):
            assert f.left_limit(t) == 3.5

    def test_no_left_limit_at_zero(self):
        with pytest.raises(ValueError):
            indicator_half().left_limit(0.0)

    def test_matches_eval_just_before(self, seed=5):
        rng = np.random.default_rng(seed)
        for _ in range(50):
            f = random_step_function(rng)
            for t in f.times:
                h = 1e-12
                assert f.left_limit(t) == f.eval(t - h)


class TestSupDistance:
    def test_identical(self):
        f = indicator_half()
        assert f.sup_distance(f) == 0.0

    def test_indicator_vs_zero(self):
        assert indicator_half().sup_distance(StepFunction(0.0)) == 1.0

    def test_shifted_indicators_merged_grid(self):
        # Gap region [0.5, 0.6) realizes |1 - 0| on the merged grid.
        f = indicator_half()
        g = StepFunction(0.0, [(0.6, 1.0)])
        assert f.sup_distance(g) == 1.0

    def test_metric_axioms(self):
        rng = np.random.default_rng(7)
        for _ in range(60):
            f = random_step_function(rng)
            g = random_step_function(rng)
            h = random_step_function(rng)
            dfg = f.sup_distance(g)
            assert dfg == g.sup_distance(f)
            assert dfg >= 0.0
            assert f.sup_distance(f) == 0.0
            assert dfg <= f.sup_distance(h) + h.sup_distance(g) + 1e-12


class TestNormalization:
    def test_zero_size_jumps_dropped(self):
        f = StepFunction(1.0, [(0.3, 1.0), (0.6, 2.0), (0.8, 2.0)])
        assert f.n_jumps == 1
        assert f.times[0] == 0.6

    def test_nonincreasing_times_rejected(self):
        with pytest.raises(ValueError):
            StepFunction(0.0, [(0.5, 1.0), (0.5, 2.0)])
        with pytest.raises(ValueError):
            StepFunction(0.0, [(0.6, 1.0), (0.5, 2.0)])

    def test_jump_at_zero_rejected(self):
        with pytest.raises(ValueError):
            StepFunction(0.0, [(0.0, 1.0)])

    def test_jump_after_one_rejected(self):
        with pytest.raises(ValueError):
            StepFunction(0.0, [(1.5, 1.0)])

    def test_equality_after_normalization(self):
        f = StepFunction(0.0, [(0.5, 1.0), (0.7, 1.0)])
        assert f == indicator_half()


class TestCompletedGraph:
    def test_constant(self):
        g = StepFunction(1.0).completed_graph()
        assert g.points.tolist() == [[0.0, 1.0], [1.0, 1.0]]

    def test_indicator(self):
        g = indicator_half().completed_graph()
        assert g.points.tolist() == [
            [0.0, 0.0], [0.5, 0.0], [0.5, 1.0], [1.0, 1.0]]

    def test_two_jump_segment_count(self):
        f = StepFunction(0.0, [(1 / 3, 1.0), (2 / 3, 2.0)])
        g = f.completed_graph()
        # 2 jumps -> 2*2 + 1 = 5 segments = 6 vertices.
        assert len(g) == 6

    def test_connected_and_time_monotone(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            pts = random_step_function(rng).completed_graph().points
            assert np.all(np.diff(pts[:, 0]) >= 0)

    def test_endpoints(self):
        rng = np.random.default_rng(4)
        for _ in range(30):
            f = random_step_function(rng)
            pts = f.completed_graph().points
            assert pts[0].tolist() == [0.0, f.initial_value]
            assert pts[-1].tolist() == [1.0, f.eval(1.0)]

    def test_round_trip(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            f = random_step_function(rng)
            assert f.completed_graph().to_step_function() == f


class TestSerialization:
    def test_json_round_trip_bit_exact(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            f = random_step_function(rng)
            g = StepFunction.from_json(f.to_json())
            assert g == f
            assert np.all(g.times == f.times)

    def test_json_shape(self):
        f = indicator_half()
        assert f.to_json() == '{"initial": 0.0, "jumps": [[0.5, 1.0]]}'

    def test_csv_round_trip_bit_exact(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            f = random_step_function(rng)
            assert StepFunction.from_csv(f.to_csv()) == f

    def test_csv_has_initial_row(self):
        lines = indicator_half().to_csv().splitlines()
        assert lines[0] == "0.0,0.0"
        assert lines[1] == "0.5,1.0"

    def test_csv_requires_initial_row(self):
        with pytest.raises(ValueError):
            StepFunction.from_csv("0.5,1.0\n")


class TestPolylineValidation:
    def test_rejects_time_reversal(self):
        with pytest.raises(ValueError):
            GraphPolyline(np.array([[0.0, 0.0], [0.5, 1.0], [0.4, 1.0]]))

    def test_rejects_bad_shape(self):
        with pytest.raises(ValueError):
            GraphPolyline(np.zeros((3,)))
