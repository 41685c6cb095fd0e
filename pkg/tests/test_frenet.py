"""Reference-route frame, quintic merge paths, curvature speed bounds."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stplanner import (
    PathGenerationError,
    PlannerConfig,
    PoseState,
    ProjectionError,
    Route,
    compose_path,
    curvature_speed_limit,
    generate_merge_path,
    project_to_frenet,
    quintic_coefficients,
    quintic_eval,
)

bc = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False)


class TestQuintic:
    @given(st.tuples(bc, bc, bc), st.tuples(bc, bc, bc),
           st.floats(min_value=0.5, max_value=80.0))
    @settings(max_examples=300, deadline=None)
    def test_boundary_conditions(self, d0, df, s_f):
        coeffs = quintic_coefficients(d0, df, s_f)
        for order, (want0, wantf) in enumerate(zip(d0, df)):
            got0 = quintic_eval(coeffs, 0.0, order=order)
            gotf = quintic_eval(coeffs, s_f, order=order)
            tol0 = 1e-9 * max(1.0, abs(want0))
            tolf = 1e-8 * max(1.0, abs(wantf), abs(s_f) ** (5 - order))
            assert abs(got0 - want0) <= tol0
            assert abs(gotf - wantf) <= tolf

    def test_rejects_nonpositive_span(self):
        with pytest.raises(ValueError):
            quintic_coefficients((1.0, 0.0, 0.0), (0.0, 0.0, 0.0), 0.0)

    def test_straight_boundary_gives_zero_polynomial(self):
        coeffs = quintic_coefficients((0.0, 0.0, 0.0), (0.0, 0.0, 0.0), 10.0)
        np.testing.assert_allclose(coeffs, 0.0, atol=1e-12)

    def test_derivative_evaluation_matches_numpy(self):
        coeffs = quintic_coefficients((2.0, -0.3, 0.1), (0.0, 0.0, 0.0), 15.0)
        p = np.polynomial.Polynomial(coeffs)
        xs = np.linspace(0.0, 15.0, 7)
        np.testing.assert_allclose(quintic_eval(coeffs, xs, order=1), p.deriv()(xs))
        np.testing.assert_allclose(quintic_eval(coeffs, xs, order=2), p.deriv(2)(xs))


class TestRouteProjection:
    def test_signed_lateral_left_positive(self):
        route = Route([(0.0, 0.0), (100.0, 0.0)])
        s, d = route.project(30.0, 2.0)
        assert s == pytest.approx(30.0, abs=1e-6)
        assert d == pytest.approx(2.0, abs=1e-6)
        _, d_right = route.project(30.0, -2.0)
        assert d_right == pytest.approx(-2.0, abs=1e-6)

    def test_projection_extends_beyond_ends(self):
        route = Route([(0.0, 0.0), (100.0, 0.0)])
        s_before, _ = route.project(-7.0, 0.0)
        assert s_before == pytest.approx(-7.0, abs=1e-6)
        s_after, _ = route.project(104.0, 0.5)
        assert s_after == pytest.approx(104.0, abs=1e-6)

    def test_point_at_extrapolates_linearly(self):
        route = Route([(0.0, 0.0), (10.0, 0.0)])
        np.testing.assert_allclose(route.point_at(-3.0), [-3.0, 0.0])
        np.testing.assert_allclose(route.point_at(13.0), [13.0, 0.0])

    def test_frenet_projection_limit(self):
        route = Route([(0.0, 0.0), (100.0, 0.0)])
        with pytest.raises(ProjectionError):
            project_to_frenet(route, PoseState(30.0, 25.0, 0.0))
        fr = project_to_frenet(route, PoseState(30.0, 1.5, 0.2))
        assert fr.d == pytest.approx(1.5, abs=1e-6)
        assert fr.d_p == pytest.approx(math.tan(0.2))


class TestComposedPath:
    def setup_method(self):
        self.cfg = PlannerConfig()
        self.route = Route([(0.0, 0.0), (200.0, 0.0)])

    def test_merge_section_blends_to_route(self):
        fr = project_to_frenet(self.route, PoseState(0.0, 1.2, 0.0))
        path = compose_path(self.route, fr, s_f=20.0, cfg=self.cfg)
        # starts at the lateral offset, ends on the route
        assert path.xy[0][1] == pytest.approx(1.2, abs=1e-6)
        tail = path.xy[path.s > 25.0]
        np.testing.assert_allclose(tail[:, 1], 0.0, atol=1e-9)

    def test_candidate_selection_prefers_feasible_short(self):
        fr = project_to_frenet(self.route, PoseState(0.0, 0.5, 0.0))
        path = generate_merge_path(self.route, fr, (10.0, 20.0, 50.0), self.cfg)
        assert path.max_abs_curvature() <= self.cfg.curvature_cap

    def test_all_candidates_infeasible(self):
        fr = project_to_frenet(self.route, PoseState(0.0, 8.0, 0.0))
        with pytest.raises(PathGenerationError):
            generate_merge_path(self.route, fr, (1.0,), self.cfg)

    def test_invalid_candidates_rejected(self):
        fr = project_to_frenet(self.route, PoseState(0.0, 0.0, 0.0))
        with pytest.raises(ValueError):
            generate_merge_path(self.route, fr, (), self.cfg)
        with pytest.raises(ValueError):
            generate_merge_path(self.route, fr, (-5.0,), self.cfg)


class TestCurvatureSpeed:
    def test_straight_path_unbounded(self):
        cfg = PlannerConfig()
        route = Route([(0.0, 0.0), (200.0, 0.0)])
        fr = project_to_frenet(route, PoseState(0.0, 0.0, 0.0))
        path = compose_path(route, fr, s_f=10.0, cfg=cfg)
        assert curvature_speed_limit(path, 50.0, cfg) == cfg.v_limit

    def test_circular_arc_matches_lateral_accel_bound(self):
        cfg = PlannerConfig()
        radius = 30.0
        theta = np.linspace(0.0, math.pi / 2, 200)
        pts = np.column_stack([radius * np.sin(theta), radius * (1 - np.cos(theta))])
        route = Route(pts)
        fr = project_to_frenet(route, PoseState(0.0, 0.0, 0.0))
        path = compose_path(route, fr, s_f=5.0, cfg=cfg)
        # v = sqrt(a_lat_max * R) away from the path ends
        expected = math.sqrt(cfg.a_lat_max * radius)
        got = curvature_speed_limit(path, 20.0, cfg)
        assert got == pytest.approx(min(cfg.v_limit, expected), rel=0.05)
