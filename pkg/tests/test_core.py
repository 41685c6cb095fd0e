"""Data model, configuration and scenario serialization tests."""

import json
import math

import pytest

from stplanner import (
    AgentDescriptor,
    AgentShape,
    PlannerConfig,
    PoseState,
    Scenario,
    ScenarioError,
    TimedPose,
    apply_overrides,
    load_config,
    load_scenario,
    parse_scenario,
    save_scenario,
    scenario_to_dict,
)


def make_reactive_agent(**kw):
    base = dict(id=1, shape=AgentShape(4.5, 2.0), behavior="reactive",
                route=((0.0, 0.0), (50.0, 0.0)), speed=8.0)
    base.update(kw)
    return AgentDescriptor(**base)


class TestPoseState:
    def test_heading_wrapped_into_half_open_interval(self):
        # 2.5 pi wraps to 0.5 pi; -pi maps to +pi (interval is (-pi, pi])
        assert PoseState(0.0, 0.0, 2.5 * math.pi).heading == pytest.approx(0.5 * math.pi)
        assert PoseState(0.0, 0.0, -math.pi).heading == pytest.approx(math.pi)
        assert PoseState(0.0, 0.0, math.pi).heading == pytest.approx(math.pi)

    def test_non_finite_rejected(self):
        with pytest.raises(ScenarioError):
            PoseState(math.nan, 0.0, 0.0)
        with pytest.raises(ScenarioError):
            PoseState(0.0, math.inf, 0.0)
        with pytest.raises(ScenarioError):
            PoseState(0.0, 0.0, -math.inf)


class TestAgentValidation:
    def test_shape_must_be_positive(self):
        with pytest.raises(ScenarioError):
            AgentShape(0.0, 2.0)
        with pytest.raises(ScenarioError):
            AgentShape(4.5, -1.0)

    def test_scripted_needs_trajectory(self):
        with pytest.raises(ScenarioError):
            AgentDescriptor(id=1, shape=AgentShape(4.5, 2.0), behavior="scripted")

    def test_scripted_timestamps_strictly_increasing(self):
        traj = (TimedPose(0.0, 0.0, 0.0, 0.0), TimedPose(0.0, 1.0, 0.0, 0.0))
        with pytest.raises(ScenarioError):
            AgentDescriptor(id=1, shape=AgentShape(4.5, 2.0), behavior="scripted",
                            scripted_trajectory=traj)

    def test_reactive_needs_route(self):
        with pytest.raises(ScenarioError):
            AgentDescriptor(id=1, shape=AgentShape(4.5, 2.0), behavior="reactive")

    def test_reactive_bounds(self):
        with pytest.raises(ScenarioError):
            make_reactive_agent(a_lo=0.0)
        with pytest.raises(ScenarioError):
            make_reactive_agent(a_hi=-0.5)
        with pytest.raises(ScenarioError):
            make_reactive_agent(speed=-1.0)

    def test_unknown_behavior(self):
        with pytest.raises(ScenarioError):
            AgentDescriptor(id=1, shape=AgentShape(4.5, 2.0), behavior="idle")


class TestPlannerConfig:
    def test_reference_defaults(self):
        cfg = PlannerConfig()
        assert cfg.c_T == 6.0
        assert cfg.c_v == 0.1
        assert cfg.c_s == 100.0
        assert cfg.c_t == 0.5
        assert cfg.c_z1 == 5.0
        assert cfg.c_z2 == 5.0
        assert cfg.w_v == 5.0
        assert cfg.w_a == 0.5
        assert cfg.w_j == 0.8
        assert cfg.a_min == -4.0
        assert cfg.a_max == 3.0
        assert cfg.j_min == -8.0
        assert cfg.j_max == 8.0
        assert cfg.a_i_judge == -0.01
        assert cfg.a_i_check == -15.0
        assert cfg.c_f1 == 1.0
        assert cfg.c_f2 == 3.0

    def test_validation(self):
        with pytest.raises(ScenarioError):
            PlannerConfig(c_t=0.0)
        with pytest.raises(ScenarioError):
            PlannerConfig(a_min=1.0)
        with pytest.raises(ScenarioError):
            PlannerConfig(w_v=-1.0)
        # judging must not be laxer than checking
        with pytest.raises(ScenarioError):
            PlannerConfig(a_i_judge=-20.0, a_i_check=-15.0)

    def test_replace_returns_new_instance(self):
        cfg = PlannerConfig()
        cfg2 = cfg.replace(c_t=0.7)
        assert cfg.c_t == 0.5
        assert cfg2.c_t == 0.7


class TestOverrides:
    def test_float_int_and_tuple_coercion(self):
        cfg = apply_overrides(PlannerConfig(), {
            "c_t": "0.75",
            "control_count": "9",
            "merge_candidates": "15,25",
        })
        assert cfg.c_t == 0.75
        assert cfg.control_count == 9
        assert cfg.merge_candidates == (15.0, 25.0)

    def test_unknown_key_rejected(self):
        with pytest.raises(ScenarioError):
            apply_overrides(PlannerConfig(), {"c_q": "1"})

    def test_load_config(self, tmp_path):
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps({"w_v": 2.5, "pred_accel_set": [0.0, -2.0]}))
        cfg = load_config(p)
        assert cfg.w_v == 2.5
        assert cfg.pred_accel_set == (0.0, -2.0)


def sample_scenario():
    return Scenario(
        name="roundtrip",
        route=((-10.0, 0.0), (100.0, 0.0), (150.0, 20.0)),
        av_pose=PoseState(0.0, 0.0, 0.1),
        av_v=7.0, av_a=0.5,
        task_length=90.0,
        agents=(
            make_reactive_agent(),
            AgentDescriptor(
                id=2, shape=AgentShape(4.0, 1.8), behavior="scripted",
                scripted_trajectory=(TimedPose(0.0, 5.0, 3.0, 0.2),
                                     TimedPose(2.0, 9.0, 3.0, 0.2)),
            ),
        ),
        duration=12.0, sim_dt=0.1, v_limit=9.0,
    )


class TestScenarioSerialization:
    def test_roundtrip_through_file(self, tmp_path):
        sc = sample_scenario()
        path = tmp_path / "sc.json"
        save_scenario(sc, path)
        back = load_scenario(path)
        assert scenario_to_dict(back) == scenario_to_dict(sc)

    def test_missing_key_reported(self):
        with pytest.raises(ScenarioError, match="missing key"):
            parse_scenario({"route": [[0, 0], [1, 0]]})

    def test_json_error_carries_position(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"name": "x",\n  "route": [[0,0], [1,0]\n}')
        with pytest.raises(ScenarioError, match="line"):
            load_scenario(path)

    def test_scenario_validation(self):
        with pytest.raises(ScenarioError):
            Scenario(name="x", route=((0.0, 0.0),), av_pose=PoseState(0, 0, 0),
                     av_v=5.0, av_a=0.0, task_length=10.0, agents=())
        with pytest.raises(ScenarioError):
            Scenario(name="x", route=((0.0, 0.0), (1.0, 0.0)), av_pose=PoseState(0, 0, 0),
                     av_v=5.0, av_a=0.0, task_length=10.0, agents=(), duration=-1.0)

    def test_agent_error_names_index(self):
        data = scenario_to_dict(sample_scenario())
        del data["agents"][0]["route"]
        with pytest.raises(ScenarioError, match=r"agents\[0\]"):
            parse_scenario(data)
