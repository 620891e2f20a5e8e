#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aggdef/scenario.hpp"
#include "test_util.hpp"

using namespace aggdef;

TEST_CASE("trajectory sampling: constant, linear, clamped") {
  TrajectorySpec constant;
  constant.waypoints = {{0.0, Vec3(1, 2, 3)}};
  for (double t : {-1.0, 0.0, 5.0, 100.0}) {
    const Kinematics kin = sample_trajectory(constant, t);
    CHECK(kin.position == Vec3(1, 2, 3));
    CHECK(kin.velocity == Vec3::Zero());
  }

  TrajectorySpec line;
  line.waypoints = {{0.0, Vec3::Zero()}, {10.0, Vec3(10, 0, 0)}};
  const Kinematics mid = sample_trajectory(line, 5.0);
  CHECK(mid.position == Vec3(5, 0, 0));
  CHECK(mid.velocity == Vec3(1, 0, 0));
  CHECK(sample_trajectory(line, -3.0).position == Vec3::Zero());
  CHECK(sample_trajectory(line, 42.0).position == Vec3(10, 0, 0));
  CHECK(sample_trajectory(line, 42.0).velocity == Vec3::Zero());
}

TEST_CASE("trajectory events relocate instantaneously") {
  TrajectorySpec pass;
  pass.waypoints = {{0.0, Vec3(0, 0, 1)}};
  pass.events = {{5.0, Vec3(4, 0, 1)}};

  CHECK(sample_trajectory(pass, 4.999999).position == Vec3(0, 0, 1));  // left limit
  const Kinematics at_jump = sample_trajectory(pass, 5.0);
  CHECK(at_jump.position == Vec3(4, 0, 1));
  CHECK(at_jump.velocity == Vec3::Zero());
  CHECK(sample_trajectory(pass, 9.0).position == Vec3(4, 0, 1));

  // After the jump the path resumes toward the waypoints behind it.
  TrajectorySpec handoff;
  handoff.waypoints = {{0.0, Vec3::Zero()}, {4.0, Vec3(4, 0, 0)}, {10.0, Vec3(4, 6, 0)}};
  handoff.events = {{4.0, Vec3(0, 0, 7)}};
  CHECK(sample_trajectory(handoff, 2.0).position == Vec3(2, 0, 0));
  CHECK(sample_trajectory(handoff, 4.0).position == Vec3(0, 0, 7));
  const Kinematics resumed = sample_trajectory(handoff, 7.0);
  CHECK((resumed.position - Vec3(2, 3, 3.5)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((resumed.velocity - Vec3(4.0 / 6.0, 1.0, -7.0 / 6.0)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("presets pin the documented parameters") {
  const ScenarioSpec left = preset("fig3_left");
  REQUIRE(left.team_size() == 3);
  for (const AgentSpec& a : left.agents) {
    CHECK(a.lambda == 0.8);
    CHECK(a.gamma_p == 10.0);
    CHECK(a.gamma_b == 5.0);
    CHECK(a.gamma_agg == 0.1);
  }
  CHECK(left.alpha == 0.2);
  CHECK(left.delta == 0.4);
  CHECK(left.dt == 0.01);
  CHECK(left.noise.process_sigma2 == 10.0);
  CHECK(left.noise.process_iso);
  CHECK(left.noise.measurement_r == 1e-4);

  const ScenarioSpec right = preset("fig3_right");
  for (const AgentSpec& a : right.agents) CHECK(a.lambda == 0.2);

  const ScenarioSpec f4 = preset("fig4_right");
  for (const AgentSpec& a : f4.agents) {
    CHECK(a.gamma_agg == 20.0);
    CHECK(a.gamma_b == 20.0);
    CHECK(a.gamma_p == 2.0);
  }
  CHECK(f4.agents[0].lambda == 0.5);
  CHECK(f4.agents[1].lambda == 0.8);
  CHECK(f4.agents[2].lambda == 0.2);

  const ScenarioSpec bb = preset("basketball_demo");
  CHECK(bb.mode == CostMode::kBasketball);
  CHECK(bb.team_size() == 3);
  CHECK(bb.intruders.size() == 3);
  CHECK_FALSE(bb.target.events.empty());

  CHECK_THROWS_AS(preset("fig5_left"), std::invalid_argument);
}

TEST_CASE("gain mapping differs per mode") {
  ScenarioSpec surv = preset("fig3_left");
  const CostGains sg = surv.gains_for(0);
  CHECK(sg.Q1 == Mat3(10.0 * Mat3::Identity()));
  CHECK(sg.Q2 == Mat3(5.0 * Mat3::Identity()));
  CHECK(sg.Q3 == Mat3(0.1 * Mat3::Identity()));

  ScenarioSpec bb = preset("basketball_demo");
  const CostGains bg = bb.gains_for(0);
  CHECK(bg.Q1 == Mat3(4.0 * Mat3::Identity()));
  CHECK(bg.Q2 == Mat3(2.0 * Mat3::Identity()));  // gamma_agg drives the sigma term
  CHECK(bg.Q3.isZero(0.0));
}

TEST_CASE("every preset serializes and parses back identically") {
  for (const std::string& name : preset_names()) {
    const ScenarioSpec spec = preset(name);
    const std::string text = serialize_scenario(spec);
    const ScenarioSpec back = parse_scenario(text);
    CHECK(back == spec);
  }
}

TEST_CASE("validation rejects inconsistent documents") {
  ScenarioSpec spec = preset("fig3_left");
  spec.intruders.pop_back();
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  ScenarioSpec bad_speed = preset("fig3_left");
  bad_speed.intruders[0].waypoints = {{0.0, Vec3::Zero()}, {1.0, Vec3(50, 0, 0)}};
  CHECK_THROWS_AS(bad_speed.validate(), std::invalid_argument);

  ScenarioSpec bad_lambda = preset("fig3_left");
  bad_lambda.agents[0].lambda = 1.4;
  CHECK_THROWS_AS(bad_lambda.validate(), std::invalid_argument);

  CHECK_THROWS_AS(parse_scenario("mode: warfare"), std::invalid_argument);
}

TEST_CASE("world sampling and sensed offsets") {
  const ScenarioSpec spec = preset("surveillance_dynamic");
  const WorldState w0 = world_at(spec, 0.0);
  REQUIRE(w0.intruder_pos.size() == 3);
  CHECK(w0.intruder_pos[0] == spec.intruders[0].waypoints.front().second);
  const WorldState w_mid = world_at(spec, 7.5);
  CHECK(w_mid.intruder_vel[0].norm() > 0.0);

  WorldState world;
  world.defender_pos = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(50, 50, 50)};
  const CommGraph g = build_proximity_graph(world.defender_pos, 2.0);
  const auto offsets0 = sensed_offsets(world, 0, g);
  REQUIRE(offsets0.size() == 1);
  CHECK(offsets0[0] == Vec3(-1, 0, 0));
  const auto offsets1 = sensed_offsets(world, 1, g);
  CHECK(offsets1[0] == -offsets0[0]);  // pairwise antisymmetry
  CHECK(sensed_offsets(world, 2, g).empty());
}

TEST_CASE("trajectory continuity guard holds for all presets") {
  for (const std::string& name : preset_names()) {
    const ScenarioSpec spec = preset(name);
    for (const TrajectorySpec& traj : spec.intruders) {
      double prev_t = -spec.dt;
      Vec3 prev = sample_trajectory(traj, 0.0).position;
      bool had_event = false;
      for (double t = 0.0; t <= 30.0; t += spec.dt) {
        const Vec3 pos = sample_trajectory(traj, t).position;
        for (const TrajectoryEvent& e : traj.events) {
          had_event = had_event || (e.time > prev_t && e.time <= t);
        }
        if (!had_event) {
          CHECK((pos - prev).norm() <= spec.v_max * spec.dt + 1e-9);
        }
        had_event = false;
        prev = pos;
        prev_t = t;
      }
    }
  }
}
