#include "aggdef/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <yaml-cpp/yaml.h>

namespace aggdef {

namespace {

const std::pair<double, Vec3>* last_at_or_before(const std::vector<std::pair<double, Vec3>>& wps,
                                                 double t) {
  const std::pair<double, Vec3>* out = nullptr;
  for (const auto& wp : wps) {
    if (wp.first <= t) out = &wp;
  }
  return out;
}

}  // namespace

Kinematics sample_trajectory(const TrajectorySpec& spec, double t) {
  if (spec.waypoints.empty() && spec.events.empty()) {
    throw std::invalid_argument("sample_trajectory: empty trajectory");
  }

  // Active anchor sequence: the last event at or before t (if any) followed by
  // the waypoints after it. Earlier waypoints only shape the path before the
  // jump.
  const TrajectoryEvent* event = nullptr;
  for (const TrajectoryEvent& e : spec.events) {
    if (e.time <= t) event = &e;
  }

  Kinematics out;
  if (event != nullptr) {
    if (t == event->time) {
      out.position = event->position;  // jump instant, no defined velocity
      return out;
    }
    const std::pair<double, Vec3> left{event->time, event->position};
    const std::pair<double, Vec3>* right = nullptr;
    for (const auto& wp : spec.waypoints) {
      if (wp.first > event->time) {
        right = &wp;
        break;
      }
    }
    if (right == nullptr || t >= spec.waypoints.back().first) {
      // Past the final anchor: hold the last position.
      out.position = (right == nullptr) ? left.second : spec.waypoints.back().second;
      return out;
    }
    const auto* a = last_at_or_before(spec.waypoints, t);
    const std::pair<double, Vec3> from = (a != nullptr && a->first > left.first) ? *a : left;
    const std::pair<double, Vec3>* to = nullptr;
    for (const auto& wp : spec.waypoints) {
      if (wp.first > t) {
        to = &wp;
        break;
      }
    }
    const double span = to->first - from.first;
    out.velocity = (to->second - from.second) / span;
    out.position = from.second + (t - from.first) * out.velocity;
    return out;
  }

  // No applicable event: plain piecewise-linear waypoints, clamped ends.
  if (spec.waypoints.empty()) {
    throw std::invalid_argument("sample_trajectory: no anchors before first event");
  }
  if (t <= spec.waypoints.front().first) {
    out.position = spec.waypoints.front().second;
    return out;
  }
  if (t >= spec.waypoints.back().first) {
    out.position = spec.waypoints.back().second;
    return out;
  }
  const auto* a = last_at_or_before(spec.waypoints, t);
  const std::pair<double, Vec3>* b = nullptr;
  for (const auto& wp : spec.waypoints) {
    if (wp.first > t) {
      b = &wp;
      break;
    }
  }
  const double span = b->first - a->first;
  out.velocity = (b->second - a->second) / span;
  out.position = a->second + (t - a->first) * out.velocity;
  return out;
}

CostGains ScenarioSpec::gains_for(int i) const {
  const AgentSpec& a = agents.at(i);
  CostGains g = CostGains::isotropic(mode, a.gamma_p, a.gamma_b, a.gamma_agg);
  g.lambda = a.lambda;
  g.lambda_agg = lambda_agg;
  g.barrier_enabled = barrier_enabled;
  g.barrier_epsilon = barrier_epsilon;
  g.barrier_grad_cap = barrier_grad_cap;
  return g;
}

namespace {

void validate_trajectory(const TrajectorySpec& traj, double v_max, const char* what) {
  if (traj.waypoints.empty()) {
    throw std::invalid_argument(std::string(what) + ": trajectory needs at least one waypoint");
  }
  for (std::size_t k = 0; k < traj.waypoints.size(); ++k) {
    if (!traj.waypoints[k].second.allFinite()) {
      throw std::invalid_argument(std::string(what) + ": non-finite waypoint");
    }
    if (k > 0 && !(traj.waypoints[k].first > traj.waypoints[k - 1].first)) {
      throw std::invalid_argument(std::string(what) + ": waypoint times must increase");
    }
  }
  for (std::size_t k = 1; k < traj.events.size(); ++k) {
    if (!(traj.events[k].time > traj.events[k - 1].time)) {
      throw std::invalid_argument(std::string(what) + ": event times must increase");
    }
  }
  // Continuity guard: traversed segment speeds stay below v_max. A waypoint
  // pair whose start coincides with an event is replaced by the jump and is
  // never traversed; each event instead opens a segment toward the first
  // waypoint after it.
  for (std::size_t k = 1; k < traj.waypoints.size(); ++k) {
    bool replaced = false;
    for (const TrajectoryEvent& e : traj.events) {
      replaced = replaced || (e.time == traj.waypoints[k - 1].first);
    }
    if (replaced) continue;
    const double dt = traj.waypoints[k].first - traj.waypoints[k - 1].first;
    const double speed = (traj.waypoints[k].second - traj.waypoints[k - 1].second).norm() / dt;
    if (speed > v_max + 1e-12) {
      throw std::invalid_argument(std::string(what) + ": segment speed exceeds v_max");
    }
  }
  for (const TrajectoryEvent& e : traj.events) {
    for (const auto& wp : traj.waypoints) {
      if (wp.first > e.time) {
        const double speed = (wp.second - e.position).norm() / (wp.first - e.time);
        if (speed > v_max + 1e-12) {
          throw std::invalid_argument(std::string(what) +
                                      ": post-event segment speed exceeds v_max");
        }
        break;
      }
    }
  }
}

}  // namespace

void ScenarioSpec::validate() const {
  if (agents.empty()) throw std::invalid_argument("scenario: needs at least one agent");
  if (intruders.size() != agents.size()) {
    throw std::invalid_argument("scenario: one intruder trajectory per defender required");
  }
  if (horizon < 0) throw std::invalid_argument("scenario: negative horizon");
  if (!(dt > 0.0)) throw std::invalid_argument("scenario: dt must be positive");
  if (!(comm_radius > 0.0)) throw std::invalid_argument("scenario: comm_radius must be positive");
  for (int c = 0; c < 3; ++c) {
    if (field.lower[c] > field.upper[c]) {
      throw std::invalid_argument("scenario: field lower bound above upper bound");
    }
    if (!(kappa[c] > 0.0) || !(eps_min[c] > 0.0)) {
      throw std::invalid_argument("scenario: kappa and eps_min must be positive");
    }
  }
  if (!(alpha > 0.0)) throw std::invalid_argument("scenario: alpha must be positive");
  if (!(delta > 0.0) || delta > 1.0) throw std::invalid_argument("scenario: delta outside (0,1]");
  if (lambda_agg < 0.0 || lambda_agg > 1.0) {
    throw std::invalid_argument("scenario: lambda_agg outside [0,1]");
  }
  for (const AgentSpec& a : agents) {
    if (a.lambda < 0.0 || a.lambda > 1.0) {
      throw std::invalid_argument("scenario: lambda outside [0,1]");
    }
    if (a.gamma_p < 0.0 || a.gamma_b < 0.0 || a.gamma_agg < 0.0) {
      throw std::invalid_argument("scenario: negative gain");
    }
  }
  auto inside_field = [&](const Vec3& p) {
    for (int c = 0; c < 3; ++c) {
      if (p[c] < field.lower[c] || p[c] > field.upper[c]) return false;
    }
    return true;
  };
  auto check_within = [&](const TrajectorySpec& traj, const char* what) {
    for (const auto& wp : traj.waypoints) {
      if (!inside_field(wp.second)) {
        throw std::invalid_argument(std::string(what) + ": waypoint outside the field");
      }
    }
    for (const TrajectoryEvent& e : traj.events) {
      if (!inside_field(e.position)) {
        throw std::invalid_argument(std::string(what) + ": event position outside the field");
      }
    }
  };
  for (const TrajectorySpec& traj : intruders) {
    validate_trajectory(traj, v_max, "intruder");
    check_within(traj, "intruder");
  }
  validate_trajectory(target, v_max, "target");
  check_within(target, "target");
}

bool operator==(const TrajectorySpec& a, const TrajectorySpec& b) {
  if (a.waypoints.size() != b.waypoints.size() || a.events.size() != b.events.size()) return false;
  for (std::size_t k = 0; k < a.waypoints.size(); ++k) {
    if (a.waypoints[k].first != b.waypoints[k].first) return false;
    if (a.waypoints[k].second != b.waypoints[k].second) return false;
  }
  for (std::size_t k = 0; k < a.events.size(); ++k) {
    if (a.events[k].time != b.events[k].time) return false;
    if (a.events[k].position != b.events[k].position) return false;
  }
  return true;
}

bool operator==(const ScenarioSpec& a, const ScenarioSpec& b) {
  auto agents_equal = [](const AgentSpec& l, const AgentSpec& r) {
    return l.x0 == r.x0 && l.gamma_p == r.gamma_p && l.gamma_b == r.gamma_b &&
           l.gamma_agg == r.gamma_agg && l.lambda == r.lambda;
  };
  if (a.agents.size() != b.agents.size() || a.intruders.size() != b.intruders.size()) return false;
  for (std::size_t i = 0; i < a.agents.size(); ++i) {
    if (!agents_equal(a.agents[i], b.agents[i])) return false;
  }
  for (std::size_t i = 0; i < a.intruders.size(); ++i) {
    if (!(a.intruders[i] == b.intruders[i])) return false;
  }
  return a.name == b.name && a.mode == b.mode && a.horizon == b.horizon && a.dt == b.dt &&
         a.comm_radius == b.comm_radius && a.laziness == b.laziness && a.b_window == b.b_window &&
         a.field.lower == b.field.lower && a.field.upper == b.field.upper && a.kappa == b.kappa &&
         a.eps_min == b.eps_min && a.alpha == b.alpha && a.delta == b.delta &&
         a.lambda_agg == b.lambda_agg && a.basket == b.basket &&
         a.barrier_enabled == b.barrier_enabled && a.barrier_epsilon == b.barrier_epsilon &&
         a.barrier_grad_cap == b.barrier_grad_cap &&
         a.noise.process_sigma2 == b.noise.process_sigma2 &&
         a.noise.process_iso == b.noise.process_iso &&
         a.noise.measurement_r == b.noise.measurement_r && a.noise.dropout == b.noise.dropout &&
         a.noise.sensing_sigma == b.noise.sensing_sigma && a.seed == b.seed && a.v_max == b.v_max &&
         a.target == b.target;
}

namespace {

TrajectorySpec static_point(const Vec3& p) {
  TrajectorySpec traj;
  traj.waypoints.emplace_back(0.0, p);
  return traj;
}

ScenarioSpec surveillance_base() {
  ScenarioSpec s;
  s.mode = CostMode::kSurveillance;
  s.horizon = 3000;
  s.dt = 0.01;
  s.comm_radius = 9.0;
  s.b_window = 1;
  s.field.lower = Vec3(-12.0, -12.0, 0.0);
  s.field.upper = Vec3(12.0, 12.0, 4.0);
  s.kappa = Vec3::Constant(0.01);
  s.eps_min = Vec3::Constant(0.1);
  s.alpha = 0.2;
  s.delta = 0.4;
  s.barrier_enabled = true;
  s.barrier_epsilon = 0.05;
  s.barrier_grad_cap = 1e3;
  s.noise.process_sigma2 = 10.0;
  s.noise.process_iso = true;
  s.noise.measurement_r = 1e-4;
  s.seed = 1;
  s.v_max = 1.0;
  s.target = static_point(Vec3(0.0, 0.0, 1.0));
  s.intruders = {static_point(Vec3(6.0, 0.4, 2.0)), static_point(Vec3(-3.2, 5.0, 2.2)),
                 static_point(Vec3(-2.8, -5.0, 1.8))};
  s.agents.resize(3);
  s.agents[0].x0 = Vec3(1.0, 0.1, 1.2);
  s.agents[1].x0 = Vec3(-0.8, 1.0, 1.3);
  s.agents[2].x0 = Vec3(-0.8, -1.0, 1.1);
  return s;
}

ScenarioSpec fig3(double lambda) {
  ScenarioSpec s = surveillance_base();
  for (AgentSpec& a : s.agents) {
    a.gamma_p = 10.0;
    a.gamma_b = 5.0;
    a.gamma_agg = 0.1;
    a.lambda = lambda;
  }
  return s;
}

ScenarioSpec fig4(double gamma_b, double gamma_agg) {
  ScenarioSpec s = surveillance_base();
  // The heavily pressed intruder (lambda 0.8) sits far out, the lightly
  // pressed one near the target, which makes the aggregation gains the
  // deciding factor for the team footprint.
  s.intruders = {static_point(Vec3(2.0, -0.5, 2.0)), static_point(Vec3(0.5, 10.0, 2.2)),
                 static_point(Vec3(-1.2, -1.2, 1.8))};
  s.agents[0].x0 = Vec3(1.0, 0.1, 1.2);
  s.agents[1].x0 = Vec3(-0.2, 1.5, 1.3);
  s.agents[2].x0 = Vec3(-0.5, -0.5, 1.1);
  const double lambdas[3] = {0.5, 0.8, 0.2};
  for (int i = 0; i < 3; ++i) {
    s.agents[i].gamma_p = 2.0;
    s.agents[i].gamma_b = gamma_b;
    s.agents[i].gamma_agg = gamma_agg;
    s.agents[i].lambda = lambdas[i];
  }
  return s;
}

ScenarioSpec dynamic_surveillance() {
  ScenarioSpec s = surveillance_base();
  s.name = "surveillance_dynamic";
  s.comm_radius = 10.0;
  // Input-driven process noise matches the piecewise constant-velocity
  // motion, so the velocity estimates are smooth enough for the one-step
  // prediction to pay off.
  s.noise.process_iso = false;
  s.noise.process_sigma2 = 1.0;
  // Gains sized so the update contracts through the tracker lag; the run
  // then follows the moving optimum instead of orbiting it.
  for (AgentSpec& a : s.agents) {
    a.gamma_p = 4.0;
    a.gamma_b = 1.0;
    a.gamma_agg = 0.5;
    a.lambda = 0.7;
  }
  s.agents[0].x0 = Vec3(2.0, 0.5, 1.4);
  s.agents[1].x0 = Vec3(-1.0, 2.0, 1.4);
  s.agents[2].x0 = Vec3(-1.0, -2.0, 1.4);
  s.target.waypoints = {{0.0, Vec3(0.0, 0.0, 1.0)},
                        {15.0, Vec3(1.8, 1.2, 1.0)},
                        {30.0, Vec3(0.3, -0.6, 1.1)}};
  TrajectorySpec i1;
  i1.waypoints = {{0.0, Vec3(8.5, 1.0, 2.0)},
                  {15.0, Vec3(2.2, 0.6, 1.8)},
                  {30.0, Vec3(4.5, 2.8, 1.9)}};
  TrajectorySpec i2;
  i2.waypoints = {{0.0, Vec3(-5.0, 7.0, 2.2)},
                  {15.0, Vec3(-1.5, 3.2, 2.0)},
                  {30.0, Vec3(1.2, 4.8, 1.9)}};
  TrajectorySpec i3;
  i3.waypoints = {{0.0, Vec3(-4.0, -6.5, 1.9)},
                  {15.0, Vec3(-0.8, -2.9, 2.1)},
                  {30.0, Vec3(-2.6, -5.3, 2.0)}};
  s.intruders = {i1, i2, i3};
  return s;
}

ScenarioSpec basketball_demo() {
  ScenarioSpec s;
  s.name = "basketball_demo";
  s.mode = CostMode::kBasketball;
  s.horizon = 3000;
  s.dt = 0.01;
  s.comm_radius = 6.0;
  s.b_window = 1;
  s.field.lower = Vec3(-8.0, -8.0, 0.0);
  s.field.upper = Vec3(8.0, 8.0, 3.0);
  s.kappa = Vec3::Constant(0.01);
  s.eps_min = Vec3::Constant(0.1);
  s.alpha = 0.2;
  s.delta = 0.4;
  s.lambda_agg = 0.5;
  s.basket = Vec3(0.0, -6.0, 1.5);
  s.barrier_enabled = true;
  s.barrier_epsilon = 0.05;
  s.barrier_grad_cap = 1e3;
  s.noise.process_sigma2 = 10.0;
  s.noise.process_iso = true;
  s.noise.measurement_r = 1e-4;
  s.seed = 1;
  s.v_max = 1.0;

  s.agents.resize(3);
  for (AgentSpec& a : s.agents) {
    a.gamma_p = 4.0;
    a.gamma_b = 0.0;
    a.gamma_agg = 2.0;
    a.lambda = 0.6;
  }
  s.agents[0].x0 = Vec3(-2.0, 2.0, 1.6);
  s.agents[1].x0 = Vec3(0.0, 1.0, 1.6);
  s.agents[2].x0 = Vec3(2.0, 2.0, 1.6);

  // Attack lanes stay at least two meters apart so the defense never gets
  // squeezed into barrier range by overlapping feasible bands.
  TrajectorySpec o1;
  o1.waypoints = {{0.0, Vec3(-4.0, 6.0, 2.0)},
                  {15.0, Vec3(-2.5, 0.5, 2.0)},
                  {30.0, Vec3(-2.0, -3.0, 2.0)}};
  TrajectorySpec o2;
  o2.waypoints = {{0.0, Vec3(0.6, 7.0, 2.0)},
                  {15.0, Vec3(0.5, 2.0, 2.0)},
                  {30.0, Vec3(0.5, -2.0, 2.0)}};
  TrajectorySpec o3;
  o3.waypoints = {{0.0, Vec3(4.0, 6.0, 2.0)},
                  {15.0, Vec3(3.5, 1.0, 2.0)},
                  {30.0, Vec3(3.0, -2.5, 2.0)}};
  s.intruders = {o1, o2, o3};

  // The ball rides with the first attacker, then is passed at t = 12 s to the
  // second one (instantaneous relocation) and rides along from there.
  TrajectorySpec ball;
  ball.waypoints = {{0.0, Vec3(-4.0, 6.0, 1.8)},
                    {12.0, Vec3(-2.8, 1.6, 1.8)},
                    {15.0, Vec3(0.5, 2.0, 1.8)},
                    {30.0, Vec3(0.5, -2.0, 1.8)}};
  ball.events = {{12.0, Vec3(0.52, 3.0, 1.8)}};
  s.target = ball;
  return s;
}

}  // namespace

ScenarioSpec preset(const std::string& name) {
  ScenarioSpec s;
  if (name == "fig3_left") {
    s = fig3(0.8);
  } else if (name == "fig3_right") {
    s = fig3(0.2);
  } else if (name == "fig4_left") {
    s = fig4(5.0, 5.0);
  } else if (name == "fig4_right") {
    s = fig4(20.0, 20.0);
  } else if (name == "basketball_demo") {
    s = basketball_demo();
  } else if (name == "surveillance_dynamic") {
    s = dynamic_surveillance();
  } else {
    std::string msg = "unknown preset '" + name + "'; valid presets:";
    for (const std::string& p : preset_names()) msg += " " + p;
    throw std::invalid_argument(msg);
  }
  if (s.name == "custom") s.name = name;
  s.validate();
  return s;
}

std::vector<std::string> preset_names() {
  return {"fig3_left",       "fig3_right",      "fig4_left",
          "fig4_right",      "basketball_demo", "surveillance_dynamic"};
}

WorldState world_at(const ScenarioSpec& spec, double time) {
  WorldState w;
  w.time = time;
  w.intruder_pos.reserve(spec.intruders.size());
  w.intruder_vel.reserve(spec.intruders.size());
  for (const TrajectorySpec& traj : spec.intruders) {
    const Kinematics kin = sample_trajectory(traj, time);
    w.intruder_pos.push_back(kin.position);
    w.intruder_vel.push_back(kin.velocity);
  }
  const Kinematics target = sample_trajectory(spec.target, time);
  w.target_pos = target.position;
  w.target_vel = target.velocity;
  return w;
}

std::vector<Vec3> sensed_offsets(const WorldState& world, int i, const CommGraph& graph) {
  std::vector<Vec3> offsets;
  for (int j : graph.neighbors(i, /*include_self=*/false)) {
    offsets.push_back(world.defender_pos[i] - world.defender_pos[j]);
  }
  return offsets;
}

namespace {

YAML::Node vec3_node(const Vec3& v) {
  YAML::Node n(YAML::NodeType::Sequence);
  n.SetStyle(YAML::EmitterStyle::Flow);
  for (int c = 0; c < 3; ++c) n.push_back(v[c]);
  return n;
}

Vec3 parse_vec3(const YAML::Node& n) {
  if (!n.IsSequence() || n.size() != 3) {
    throw std::invalid_argument("scenario parse: expected 3-vector");
  }
  return Vec3(n[0].as<double>(), n[1].as<double>(), n[2].as<double>());
}

YAML::Node trajectory_node(const TrajectorySpec& traj) {
  YAML::Node n;
  for (const auto& wp : traj.waypoints) {
    YAML::Node entry(YAML::NodeType::Sequence);
    entry.SetStyle(YAML::EmitterStyle::Flow);
    entry.push_back(wp.first);
    entry.push_back(vec3_node(wp.second));
    n["waypoints"].push_back(entry);
  }
  n["events"] = YAML::Node(YAML::NodeType::Sequence);
  for (const TrajectoryEvent& e : traj.events) {
    YAML::Node entry(YAML::NodeType::Sequence);
    entry.SetStyle(YAML::EmitterStyle::Flow);
    entry.push_back(e.time);
    entry.push_back(vec3_node(e.position));
    n["events"].push_back(entry);
  }
  return n;
}

std::vector<std::pair<double, Vec3>> parse_waypoint_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("scenario parse: cannot open waypoint csv " + path);
  std::vector<std::pair<double, Vec3>> wps;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double t, x, y, z;
    if (!(row >> t >> x >> y >> z)) {
      throw std::invalid_argument("scenario parse: malformed waypoint row in " + path);
    }
    wps.emplace_back(t, Vec3(x, y, z));
  }
  return wps;
}

TrajectorySpec parse_trajectory(const YAML::Node& n) {
  TrajectorySpec traj;
  if (n["waypoints_csv"]) {
    traj.waypoints = parse_waypoint_csv(n["waypoints_csv"].as<std::string>());
  } else {
    for (const YAML::Node& entry : n["waypoints"]) {
      traj.waypoints.emplace_back(entry[0].as<double>(), parse_vec3(entry[1]));
    }
  }
  if (n["events"]) {
    for (const YAML::Node& entry : n["events"]) {
      traj.events.push_back(TrajectoryEvent{entry[0].as<double>(), parse_vec3(entry[1])});
    }
  }
  return traj;
}

}  // namespace

std::string serialize_scenario(const ScenarioSpec& spec) {
  YAML::Node root;
  root["name"] = spec.name;
  root["mode"] = (spec.mode == CostMode::kBasketball) ? "basketball" : "surveillance";
  root["horizon"] = spec.horizon;
  root["dt"] = spec.dt;
  root["comm_radius"] = spec.comm_radius;
  root["laziness"] = spec.laziness;
  root["b_window"] = spec.b_window;
  root["field"]["lower"] = vec3_node(spec.field.lower);
  root["field"]["upper"] = vec3_node(spec.field.upper);
  root["kappa"] = vec3_node(spec.kappa);
  root["eps_min"] = vec3_node(spec.eps_min);
  root["alpha"] = spec.alpha;
  root["delta"] = spec.delta;
  root["lambda_agg"] = spec.lambda_agg;
  root["basket"] = vec3_node(spec.basket);
  root["barrier"]["enabled"] = spec.barrier_enabled;
  root["barrier"]["epsilon"] = spec.barrier_epsilon;
  root["barrier"]["grad_cap"] = spec.barrier_grad_cap;
  root["noise"]["process_sigma2"] = spec.noise.process_sigma2;
  root["noise"]["process_model"] = spec.noise.process_iso ? "iso" : "ggt";
  root["noise"]["measurement_r"] = spec.noise.measurement_r;
  root["noise"]["dropout"] = spec.noise.dropout;
  root["noise"]["sensing_sigma"] = spec.noise.sensing_sigma;
  root["seed"] = spec.seed;
  root["v_max"] = spec.v_max;
  for (const AgentSpec& a : spec.agents) {
    YAML::Node an;
    an["x0"] = vec3_node(a.x0);
    an["gamma_p"] = a.gamma_p;
    an["gamma_b"] = a.gamma_b;
    an["gamma_agg"] = a.gamma_agg;
    an["lambda"] = a.lambda;
    root["agents"].push_back(an);
  }
  for (const TrajectorySpec& traj : spec.intruders) {
    root["intruders"].push_back(trajectory_node(traj));
  }
  root["target"] = trajectory_node(spec.target);
  std::ostringstream out;
  out << root << "\n";
  return out.str();
}

ScenarioSpec parse_scenario(const std::string& yaml_text) {
  try {
    const YAML::Node root = YAML::Load(yaml_text);
    ScenarioSpec spec;
    spec.name = root["name"].as<std::string>("custom");
    const std::string mode = root["mode"].as<std::string>("surveillance");
    if (mode == "basketball") {
      spec.mode = CostMode::kBasketball;
    } else if (mode == "surveillance") {
      spec.mode = CostMode::kSurveillance;
    } else {
      throw std::invalid_argument("scenario parse: unknown mode '" + mode + "'");
    }
    spec.horizon = root["horizon"].as<int>(spec.horizon);
    spec.dt = root["dt"].as<double>(spec.dt);
    spec.comm_radius = root["comm_radius"].as<double>(spec.comm_radius);
    spec.laziness = root["laziness"].as<double>(spec.laziness);
    spec.b_window = root["b_window"].as<int>(spec.b_window);
    if (root["field"]) {
      spec.field.lower = parse_vec3(root["field"]["lower"]);
      spec.field.upper = parse_vec3(root["field"]["upper"]);
    }
    if (root["kappa"]) spec.kappa = parse_vec3(root["kappa"]);
    if (root["eps_min"]) spec.eps_min = parse_vec3(root["eps_min"]);
    spec.alpha = root["alpha"].as<double>(spec.alpha);
    spec.delta = root["delta"].as<double>(spec.delta);
    spec.lambda_agg = root["lambda_agg"].as<double>(spec.lambda_agg);
    if (root["basket"]) spec.basket = parse_vec3(root["basket"]);
    if (root["barrier"]) {
      spec.barrier_enabled = root["barrier"]["enabled"].as<bool>(spec.barrier_enabled);
      spec.barrier_epsilon = root["barrier"]["epsilon"].as<double>(spec.barrier_epsilon);
      spec.barrier_grad_cap = root["barrier"]["grad_cap"].as<double>(spec.barrier_grad_cap);
    }
    if (root["noise"]) {
      const YAML::Node n = root["noise"];
      spec.noise.process_sigma2 = n["process_sigma2"].as<double>(spec.noise.process_sigma2);
      const std::string pm = n["process_model"].as<std::string>("iso");
      spec.noise.process_iso = (pm != "ggt");
      spec.noise.measurement_r = n["measurement_r"].as<double>(spec.noise.measurement_r);
      spec.noise.dropout = n["dropout"].as<double>(spec.noise.dropout);
      spec.noise.sensing_sigma = n["sensing_sigma"].as<double>(spec.noise.sensing_sigma);
    }
    spec.seed = root["seed"].as<std::uint64_t>(spec.seed);
    spec.v_max = root["v_max"].as<double>(spec.v_max);
    for (const YAML::Node& an : root["agents"]) {
      AgentSpec a;
      a.x0 = parse_vec3(an["x0"]);
      a.gamma_p = an["gamma_p"].as<double>(a.gamma_p);
      a.gamma_b = an["gamma_b"].as<double>(a.gamma_b);
      a.gamma_agg = an["gamma_agg"].as<double>(a.gamma_agg);
      a.lambda = an["lambda"].as<double>(a.lambda);
      spec.agents.push_back(a);
    }
    for (const YAML::Node& tn : root["intruders"]) {
      spec.intruders.push_back(parse_trajectory(tn));
    }
    if (root["target"]) spec.target = parse_trajectory(root["target"]);
    spec.validate();
    return spec;
  } catch (const YAML::Exception& e) {
    throw std::invalid_argument(std::string("scenario parse error: ") + e.what());
  }
}

ScenarioSpec load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

}  // namespace aggdef
