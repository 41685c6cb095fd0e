"""Synthetic predictor tests: constant-acceleration kinematics and degradation."""

import math

import numpy as np
import pytest

from stplanner import (
    PoseState,
    PredictionSet,
    Route,
    degrade_predictions,
    predict_constant_velocity,
    predict_route_following,
)


class TestConstantVelocity:
    def test_states_march_along_heading(self):
        pose = PoseState(1.0, 2.0, math.pi / 2)
        traj = predict_constant_velocity(pose, v=4.0, horizon=6.0, interval=0.5)
        assert len(traj.states) == 13
        st = traj.states[3]  # t = 1.5
        assert st.t == pytest.approx(1.5)
        assert st.s_along == pytest.approx(6.0)
        assert st.pose.x == pytest.approx(1.0)
        assert st.pose.y == pytest.approx(2.0 + 6.0)

    def test_invalid_horizon_rejected(self):
        pose = PoseState(0.0, 0.0, 0.0)
        with pytest.raises(ValueError):
            predict_constant_velocity(pose, 4.0, horizon=0.0, interval=0.5)
        with pytest.raises(ValueError):
            predict_constant_velocity(pose, 4.0, horizon=6.0, interval=-0.5)


class TestRouteFollowing:
    def setup_method(self):
        self.route = Route([(0.0, 0.0), (100.0, 0.0)])

    def test_mode_accelerations_applied(self):
        trajs = predict_route_following(self.route, 0.0, v0=8.0, k_modes=3,
                                        horizon=4.0, interval=1.0,
                                        accel_set=(0.0, -1.0, 1.0))
        assert [t.mode_index for t in trajs] == [0, 1, 2]
        # s(t) = v0 t + a t^2 / 2 per mode
        for traj, a in zip(trajs, (0.0, -1.0, 1.0)):
            for st in traj.states:
                assert st.s_along == pytest.approx(8.0 * st.t + 0.5 * a * st.t ** 2)

    def test_decelerating_mode_clips_at_stop(self):
        (traj,) = predict_route_following(self.route, 0.0, v0=4.0, k_modes=1,
                                          horizon=6.0, interval=0.5, accel_set=(-2.0,))
        # stops at t = 2 having covered v0^2 / (2|a|) = 4 m
        final = traj.states[-1]
        assert final.s_along == pytest.approx(4.0)
        at_3s = [st for st in traj.states if st.t == pytest.approx(3.0)][0]
        assert at_3s.s_along == pytest.approx(4.0)

    def test_k_exceeding_hypothesis_set(self):
        with pytest.raises(ValueError):
            predict_route_following(self.route, 0.0, 5.0, k_modes=4,
                                    horizon=2.0, interval=0.5, accel_set=(0.0, -1.0, 1.0))

    def test_missing_route(self):
        with pytest.raises(ValueError):
            predict_route_following(None, 0.0, 5.0, 1, 2.0, 0.5)

    def test_truncated_drops_late_states(self):
        (traj,) = predict_route_following(self.route, 0.0, 5.0, 1, 6.0, 0.5)
        short = traj.truncated(2.0)
        assert max(st.t for st in short.states) <= 2.0 + 1e-9
        assert len(short.states) == 5

    def test_by_agent_grouping(self):
        trajs = predict_route_following(self.route, 0.0, 5.0, 2, 2.0, 0.5,
                                        agent_id=7)
        trajs += predict_route_following(self.route, 10.0, 5.0, 1, 2.0, 0.5,
                                         agent_id=3)
        pset = PredictionSet(trajectories=tuple(trajs), horizon=2.0, interval=0.5)
        grouped = pset.by_agent()
        assert sorted(grouped) == [3, 7]
        assert len(grouped[7]) == 2


class TestDegradation:
    def make_pset(self):
        route = Route([(0.0, 0.0), (100.0, 0.0)])
        trajs = predict_route_following(route, 0.0, 6.0, 2, 4.0, 0.5)
        return PredictionSet(trajectories=tuple(trajs), horizon=4.0, interval=0.5)

    def test_zero_sigma_is_identity(self):
        pset = self.make_pset()
        assert degrade_predictions(pset, 0.0, 0.0, seed=1) is pset

    def test_negative_sigma_rejected(self):
        with pytest.raises(ValueError):
            degrade_predictions(self.make_pset(), -0.1, 0.0, seed=1)

    def test_seeded_and_deterministic(self):
        pset = self.make_pset()
        a = degrade_predictions(pset, 0.5, 0.2, seed=42)
        b = degrade_predictions(pset, 0.5, 0.2, seed=42)
        c = degrade_predictions(pset, 0.5, 0.2, seed=43)
        for ta, tb in zip(a.trajectories, b.trajectories):
            assert ta.states == tb.states
        assert any(ta.states != tc.states
                   for ta, tc in zip(a.trajectories, c.trajectories))

    def test_times_sorted_and_nonnegative(self):
        noisy = degrade_predictions(self.make_pset(), 0.0, 1.5, seed=3)
        for traj in noisy.trajectories:
            ts = [st.t for st in traj.states]
            assert ts == sorted(ts)
            assert min(ts) >= 0.0

    def test_lateral_noise_orthogonal_to_heading(self):
        noisy = degrade_predictions(self.make_pset(), 1.0, 0.0, seed=5)
        for traj, base in zip(noisy.trajectories, self.make_pset().trajectories):
            for st, st0 in zip(traj.states, base.states):
                # along-route coordinate preserved, offset purely lateral
                assert st.pose.x == pytest.approx(st0.pose.x, abs=1e-9)
                assert st.s_along == st0.s_along
