import numpy as np
import pytest

from maxstream.cadlag import StepFunction
from maxstream.errors import ResourceLimitError
from maxstream.skorokhod import d_j1, d_m1, osc_j1, osc_m1, segment_gap

from _helpers import osc_bruteforce, random_monotone_step_function, \
    random_step_function


class TestSegmentGap:
    def test_inside(self):
        assert segment_gap(0.0, 0.5, 1.0) == 0.0

    def test_outside(self):
        assert segment_gap(0.0, 2.0, 1.0) == 1.0

    def test_unordered_interval(self):
        assert segment_gap(1.0, 0.5, 0.0) == 0.0

    def test_endpoint_membership(self):
        assert segment_gap(0.0, 1.0, 1.0) == 0.0
        assert segment_gap(2.0, 2.0, 0.0) == 0.0


class TestOscillations:
    def test_monotone_m1_zero(self):
        rng = np.random.default_rng(0)
        for _ in range(40):
            f = random_monotone_step_function(rng)
            for delta in (0.05, 0.3, 1.0):
                assert osc_m1(f, delta) == 0.0

    def test_up_down_indicator(self):
        f = StepFunction(0.0, [(1 / 3, 1.0), (2 / 3, 0.0)])
        assert osc_m1(f, 1.0) == 1.0

    def test_two_up_jumps_far_apart(self):
        f = StepFunction(0.0, [(0.25, 1.0), (0.75, 2.0)])
        assert osc_m1(f, 0.1) == 0.0
        assert osc_j1(f, 0.1) == 0.0

    def test_single_jump_j1_zero(self):
        f = StepFunction(0.0, [(0.5, 1.0)])
        for delta in (0.01, 0.5, 1.0):
            assert osc_j1(f, delta) == 0.0

    def test_two_jumps_within_delta(self):
        # Jump sizes 0.7 then 1.2 at dyadic times 2^-2 and 3*2^-3.
        f = StepFunction(0.0, [(0.25, 0.7), (0.375, 1.9)])
        assert osc_j1(f, 0.2) == pytest.approx(0.7)
        # Window equal to the gap is infeasible (t1 must sit strictly
        # before the first jump).
        assert osc_j1(f, 0.125) == 0.0

    def test_constant_zero(self):
        f = StepFunction(2.0)
        assert osc_m1(f, 0.5) == 0.0
        assert osc_j1(f, 0.5) == 0.0

    def test_delta_must_be_positive(self):
        with pytest.raises(ValueError):
            osc_m1(StepFunction(0.0), 0.0)

    def test_matches_bruteforce_oracle(self):
        rng = np.random.default_rng(23)
        for _ in range(25):
            f = random_step_function(rng, max_jumps=5)
            for delta in (0.07, 0.31):
                for kind, fn in (("m1", osc_m1), ("j1", osc_j1)):
                    exact = fn(f, delta)
                    brute = osc_bruteforce(f, delta, kind)
                    assert exact == pytest.approx(brute, abs=1e-9), \
                        (kind, delta, f.to_json())

    def test_nondecreasing_in_delta(self):
        rng = np.random.default_rng(29)
        deltas = (0.02, 0.1, 0.3, 0.7, 1.0)
        for _ in range(30):
            f = random_step_function(rng)
            for fn in (osc_m1, osc_j1):
                vals = [fn(f, d) for d in deltas]
                assert all(a <= b + 1e-15 for a, b in zip(vals, vals[1:]))

    def test_m1_below_j1(self):
        rng = np.random.default_rng(31)
        for _ in range(40):
            f = random_step_function(rng)
            for delta in (0.05, 0.4):
                assert osc_m1(f, delta) <= osc_j1(f, delta) + 1e-15


def shifted_family(n: int):
    xn = StepFunction(0.0, [(0.5 - 1.0 / n, 0.5), (0.5, 1.0)])
    x = StepFunction(0.0, [(0.5, 1.0)])
    return xn, x


class TestM1Distance:
    def test_identity(self):
        f = StepFunction(0.0, [(0.5, 1.0)])
        assert d_m1(f, f, 1e-6) == 0.0

    def test_indicator_vs_zero(self):
        f = StepFunction(0.0, [(0.5, 1.0)])
        assert d_m1(f, StepFunction(0.0), 1e-6) == pytest.approx(1.0, abs=1e-6)

    def test_shifted_family_upper(self):
        for n in (8, 16, 64):
            xn, x = shifted_family(n)
            assert d_m1(xn, x, 1e-6) <= 1.0 / n + 1e-6

    def test_bounded_by_uniform_metric(self):
        rng = np.random.default_rng(37)
        for _ in range(100):
            f = random_step_function(rng)
            g = random_step_function(rng)
            assert d_m1(f, g, 1e-3) <= f.sup_distance(g) + 1e-3

    def test_symmetry(self):
        rng = np.random.default_rng(41)
        for _ in range(40):
            f = random_step_function(rng)
            g = random_step_function(rng)
            assert d_m1(f, g, 1e-3) == pytest.approx(d_m1(g, f, 1e-3),
                                                     abs=2e-3)

    def test_tol_validation(self):
        f = StepFunction(0.0)
        with pytest.raises(ValueError):
            d_m1(f, f, 0.0)

    def test_resource_error_carries_bracket(self):
        f = StepFunction(0.0, [(0.3, 0.77), (0.55, 0.21)])
        g = StepFunction(0.1, [(0.4, 1.3)])
        with pytest.raises(ResourceLimitError) as exc:
            d_m1(f, g, 1e-9, max_points=24)
        assert exc.value.upper is not None
        assert exc.value.lower is not None
        assert exc.value.lower <= exc.value.upper


class TestJ1Distance:
    def test_identity(self):
        f = StepFunction(0.0, [(0.25, 1.0), (0.5, 0.3)])
        assert d_j1(f, f, 1e-6) == 0.0

    def test_two_indicators_time_shift(self):
        for h in (0.1, 0.37):
            f = StepFunction(0.0, [(0.3, 1.0)])
            g = StepFunction(0.0, [(0.3 + h, 1.0)])
            assert d_j1(f, g, 1e-6) == pytest.approx(min(h, 1.0), abs=1e-6)

    def test_shifted_family_lower(self):
        for n in (8, 16, 64):
            xn, x = shifted_family(n)
            assert d_j1(xn, x, 1e-6) >= 0.25

    def test_m1_j1_separation(self):
        # d_m1 -> 0 along the family while d_j1 stays bounded away from 0.
        for n in (8, 16, 64):
            xn, x = shifted_family(n)
            assert d_m1(xn, x, 1e-6) <= 1.0 / n + 1e-6
            assert d_j1(xn, x, 1e-6) >= 0.25

    def test_symmetric_by_construction(self):
        rng = np.random.default_rng(43)
        for _ in range(20):
            f = random_step_function(rng, max_jumps=4)
            g = random_step_function(rng, max_jumps=4)
            assert d_j1(f, g, 2e-2) == pytest.approx(d_j1(g, f, 2e-2),
                                                     abs=4e-2)

    def test_bounded_by_uniform_metric(self):
        # lambda = identity is always an admissible time change.
        rng = np.random.default_rng(47)
        for _ in range(30):
            f = random_step_function(rng, max_jumps=4)
            g = random_step_function(rng, max_jumps=4)
            assert d_j1(f, g, 1e-2) <= f.sup_distance(g) + 1e-2

    def test_dominates_m1(self):
        # The J1 topology is finer; the approximants keep the order.
        rng = np.random.default_rng(53)
        for _ in range(20):
            f = random_step_function(rng, max_jumps=4)
            g = random_step_function(rng, max_jumps=4)
            assert d_m1(f, g, 1e-3) <= d_j1(f, g, 1e-3) + 2e-3
