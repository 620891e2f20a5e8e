#include "aggdef/harness.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <stdexcept>

#include "aggdef/trace.hpp"

namespace aggdef {

namespace {

constexpr std::uint64_t kSourceMeasureIntruder = 0;
constexpr std::uint64_t kSourceMeasureTarget = 1;
constexpr std::uint64_t kSourceDropout = 2;
constexpr std::uint64_t kSourceSensing = 3;

KinematicModel block_model(const ScenarioSpec& spec) {
  const Mat3 R = spec.noise.measurement_r * Mat3::Identity();
  const Mat6 S = spec.noise.process_iso
                     ? KinematicModel::process_iso(spec.noise.process_sigma2)
                     : KinematicModel::process_ggt(spec.dt, spec.noise.process_sigma2);
  return KinematicModel::make(spec.dt, S, R);
}

Vec3 box_anchor(const ScenarioSpec& spec, const Vec3& b_est) {
  return spec.mode == CostMode::kBasketball ? spec.basket : b_est;
}

struct EntityEstimates {
  Vec3 p = Vec3::Zero();
  Vec3 b = Vec3::Zero();
};

}  // namespace

OracleProblem true_problem(const ScenarioSpec& spec, const WorldState& world,
                           const CommGraph& graph) {
  OracleProblem problem;
  problem.mode = spec.mode;
  problem.graph = &graph;
  for (int i = 0; i < spec.team_size(); ++i) {
    problem.gains.push_back(spec.gains_for(i));
    problem.refs.push_back(make_reference(spec.mode, world.intruder_pos[i], world.target_pos,
                                          spec.basket, spec.agents[i].lambda, spec.lambda_agg));
    problem.boxes.push_back(build_box(world.intruder_pos[i],
                                      box_anchor(spec, world.target_pos), spec.kappa,
                                      spec.eps_min, spec.field));
  }
  return problem;
}

RunSummary run(const RunConfig& config) {
  const auto t_start = std::chrono::steady_clock::now();

  ScenarioSpec spec = config.scenario;
  if (config.barrier_override.has_value()) spec.barrier_enabled = *config.barrier_override;
  const std::uint64_t master_seed = config.seed.value_or(spec.seed);
  spec.seed = master_seed;
  spec.validate();

  const int n = spec.team_size();
  const int horizon = spec.horizon;
  const CostMode mode = spec.mode;

  std::filesystem::create_directories(config.out_dir);
  const std::string dir = config.out_dir + "/";
  {
    std::ofstream scenario_out(dir + "scenario.yaml");
    scenario_out << serialize_scenario(spec);
  }
  TraceWriter trace(dir + "trace.csv");
  MetricsWriter metrics(dir + "metrics.csv");
  std::optional<GraphLogWriter> graph_log;
  if (config.trace_graph) graph_log.emplace(dir + "graph.csv");

  std::vector<RngStream> rng_p, rng_b, rng_drop, rng_sense;
  for (int i = 0; i < n; ++i) {
    rng_p.emplace_back(master_seed, i, kSourceMeasureIntruder);
    rng_b.emplace_back(master_seed, i, kSourceMeasureTarget);
    rng_drop.emplace_back(master_seed, i, kSourceDropout);
    rng_sense.emplace_back(master_seed, i, kSourceSensing);
  }

  const KinematicModel model = block_model(spec);
  MeasurementModel sensor;
  sensor.R_p = model.R;
  sensor.R_b = model.R;
  sensor.dropout = spec.noise.dropout;

  RunSummary summary;
  summary.scenario_name = spec.name;
  summary.agents = n;
  summary.horizon = horizon;
  summary.seed = master_seed;
  summary.oracle_enabled = config.oracle_enabled;
  summary.barrier_enabled = spec.barrier_enabled;
  summary.prediction_enabled = config.prediction_enabled;
  summary.min_pairwise_distance = std::numeric_limits<double>::infinity();
  summary.regret = std::numeric_limits<double>::quiet_NaN();

  // --- Initialization: first measurement seeds the position estimate, the
  // velocity estimate starts at zero.
  WorldState world = world_at(spec, 0.0);
  std::vector<AgentState> agents(n);
  std::vector<EntityEstimates> est(n);
  std::vector<Reference> refs(n);
  std::vector<FeasibleBox> boxes(n);
  std::vector<Vec3> x(n);

  const double p0 = config.kalman_strict_zero_init ? 0.0 : config.kalman_p0;
  MeasurementModel init_sensor = sensor;
  init_sensor.dropout = 0.0;  // the seeding measurement is never dropped
  for (int i = 0; i < n; ++i) {
    const Vec6 z0 = *measure(world.intruder_pos[i], world.target_pos, init_sensor, rng_p[i],
                             rng_b[i], rng_drop[i]);
    FilterState init_p, init_b;
    init_p.xi.head<3>() = z0.head<3>();
    init_b.xi.head<3>() = z0.tail<3>();
    init_p.P = p0 * Mat6::Identity();
    init_b.P = p0 * Mat6::Identity();
    agents[i].filter = StackedFilter(model, model, init_p, init_b);

    est[i] = {z0.head<3>(), z0.tail<3>()};
    refs[i] = make_reference(mode, est[i].p, est[i].b, spec.basket, spec.agents[i].lambda,
                             spec.lambda_agg);
    boxes[i] = build_box(est[i].p, box_anchor(spec, est[i].b), spec.kappa, spec.eps_min,
                         spec.field);
    summary.repair_count += boxes[i].repaired_components;
    x[i] = project(spec.agents[i].x0, boxes[i]);
  }
  world.defender_pos = x;

  {
    CommGraph graph0 = build_proximity_graph(x, spec.comm_radius);
    metropolis_weights(graph0, spec.laziness);
    for (int i = 0; i < n; ++i) {
      const std::vector<Vec3> offsets = sensed_offsets(world, i, graph0);
      const CostSnapshot snap =
          CostSnapshot::from_offsets(x[i], refs[i].p_ref, refs[i].b_ref, offsets);
      agents[i] = init_agent(x[i], boxes[i], snap, spec.gains_for(i), spec.alpha, spec.delta,
                             std::move(agents[i].filter), mode);
    }
  }

  RegretLedger ledger;
  std::vector<Vec3> oracle_warm = x;
  std::vector<CommGraph> graphs_seen;
  graphs_seen.reserve(horizon + 1);

  // Scene statistics come from the configuration averaged over the final
  // fifth of the run, the central-configuration estimate that also covers
  // runs that settle into a small limit cycle instead of a fixed point.
  const int window_start = (4 * (horizon + 1)) / 5;
  std::vector<Vec3> avg_x(n, Vec3::Zero()), avg_intruder(n, Vec3::Zero());
  Vec3 avg_target = Vec3::Zero();
  long window_count = 0;

  // --- Main loop: one tick = one communication round = one optimize step.
  for (int t = 0; t <= horizon; ++t) {
    world = world_at(spec, t * spec.dt);
    for (int i = 0; i < n; ++i) x[i] = agents[i].x;
    world.defender_pos = x;

    CommGraph graph = build_proximity_graph(x, spec.comm_radius);
    metropolis_weights(graph, spec.laziness);
    if (graph_log) graph_log->write(t, graph.edge_list());

    std::vector<std::vector<Vec3>> offsets(n);
    for (int i = 0; i < n; ++i) {
      offsets[i] = sensed_offsets(world, i, graph);
      if (spec.noise.sensing_sigma > 0.0) {
        for (Vec3& o : offsets[i]) o += spec.noise.sensing_sigma * rng_sense[i].normal3();
      }
    }

    // Measure and predict; references and boxes for the next evaluation come
    // from the one-step-ahead prediction (or, without prediction, from the
    // filtered estimate of the current instant).
    std::vector<EntityEstimates> est_next(n);
    std::vector<Reference> refs_next(n);
    std::vector<FeasibleBox> boxes_next(n);
    int repairs_this_round = 0;
    for (int i = 0; i < n; ++i) {
      const auto z = measure(world.intruder_pos[i], world.target_pos, sensor, rng_p[i], rng_b[i],
                             rng_drop[i]);
      if (z.has_value()) {
        agents[i].filter.step(*z);
      } else {
        agents[i].filter.step_predict_only();
      }
      const FilterState& src_p =
          config.prediction_enabled ? agents[i].filter.prediction_p() : agents[i].filter.posterior_p();
      const FilterState& src_b =
          config.prediction_enabled ? agents[i].filter.prediction_b() : agents[i].filter.posterior_b();
      est_next[i] = {src_p.xi.head<3>(), src_b.xi.head<3>()};
      refs_next[i] = make_reference(mode, est_next[i].p, est_next[i].b, spec.basket,
                                    spec.agents[i].lambda, spec.lambda_agg);
      boxes_next[i] = build_box(est_next[i].p, box_anchor(spec, est_next[i].b), spec.kappa,
                                spec.eps_min, spec.field);
      repairs_this_round += boxes_next[i].repaired_components;
    }
    summary.repair_count += repairs_this_round;

    std::vector<CostSnapshot> snap_t(n), snap_t1(n);
    for (int i = 0; i < n; ++i) {
      snap_t[i] = CostSnapshot::from_offsets(x[i], refs[i].p_ref, refs[i].b_ref, offsets[i]);
      snap_t1[i] =
          CostSnapshot::from_offsets(x[i], refs_next[i].p_ref, refs_next[i].b_ref, offsets[i]);
    }

    // Round metrics against the full-information problem at this tick.
    const OracleProblem problem = true_problem(spec, world, graph);
    const double realized_cost = global_cost(problem, x);
    MetricsRecord mrec;
    mrec.t = t;
    mrec.global_cost = realized_cost;
    mrec.oracle_cost = std::numeric_limits<double>::quiet_NaN();
    mrec.gap = std::numeric_limits<double>::quiet_NaN();
    if (config.oracle_enabled) {
      const OracleResult oracle = centralized_oracle(problem, oracle_warm);
      oracle_warm = oracle.x_star;
      if (!oracle.converged) ++summary.oracle_nonconverged;
      ledger.add(t, realized_cost, oracle.value);
      mrec.oracle_cost = oracle.value;
      mrec.gap = realized_cost - oracle.value;
    }

    std::vector<Vec3> s_all(n), y_all(n), grad2_hat(n);
    for (int i = 0; i < n; ++i) {
      s_all[i] = agents[i].s;
      y_all[i] = agents[i].y;
      grad2_hat[i] = grad2_cost(agents[i].x, agents[i].s, snap_t[i], agents[i].gains, mode);
    }
    const TrackingErrors terr = tracking_errors(s_all, y_all, x, grad2_hat);
    summary.max_s_consensus_err = std::max(summary.max_s_consensus_err, terr.s_err);
    summary.max_y_consensus_err = std::max(summary.max_y_consensus_err, terr.y_err);
    {
      Vec3 s_mean = Vec3::Zero(), y_sum = Vec3::Zero(), g_sum = Vec3::Zero();
      for (int i = 0; i < n; ++i) {
        s_mean += s_all[i];
        y_sum += y_all[i];
        g_sum += grad2_hat[i];
      }
      s_mean /= static_cast<double>(n);
      summary.max_s_conservation_err =
          std::max(summary.max_s_conservation_err, (s_mean - sigma(x)).norm());
      summary.max_y_conservation_err =
          std::max(summary.max_y_conservation_err, (y_sum - g_sum).norm());
    }
    const double min_dist = min_pairwise_distance(x);
    summary.min_pairwise_distance = std::min(summary.min_pairwise_distance, min_dist);
    mrec.s_err = terr.s_err;
    mrec.y_err = terr.y_err;
    mrec.min_dist = min_dist;
    mrec.repairs = repairs_this_round;
    metrics.write(mrec);

    if (t >= window_start) {
      for (int i = 0; i < n; ++i) {
        avg_x[i] += x[i];
        avg_intruder[i] += world.intruder_pos[i];
      }
      avg_target += world.target_pos;
      ++window_count;
    }

    // Exchange and optimize; all sends of the round complete before any
    // agent consumes its mailbox.
    const std::vector<Mailbox> mail = exchange(graph, s_all, y_all);
    std::vector<StepResult> results(n);
    for (int i = 0; i < n; ++i) {
      results[i] = optimize_step(agents[i], mail[i], graph.weights.row(i), snap_t[i], snap_t1[i],
                                 boxes[i], boxes_next[i], mode, config.box_timing);
      const FeasibleBox& proj_box =
          (config.box_timing == BoxTiming::kPredicted) ? boxes_next[i] : boxes[i];
      if (!contains(proj_box, results[i].x_tilde)) ++summary.projection_violations;
      if (!contains(proj_box, results[i].next.x)) ++summary.combination_violations;
    }

    for (int i = 0; i < n; ++i) {
      TraceRecord rec;
      rec.t = t;
      rec.agent = i;
      rec.x = agents[i].x;
      rec.x_tilde = results[i].x_tilde;
      rec.s = agents[i].s;
      rec.y = agents[i].y;
      rec.p_hat = est[i].p;
      rec.b_hat = est[i].b;
      const FeasibleBox& proj_box =
          (config.box_timing == BoxTiming::kPredicted) ? boxes_next[i] : boxes[i];
      rec.box_lower = proj_box.lower;
      rec.box_upper = proj_box.upper;
      rec.cost = eval_cost(agents[i].x, agents[i].s, snap_t[i], agents[i].gains, mode);
      rec.degree = graph.degree(i);
      trace.write(rec);
      ++summary.trace_records;
    }

    graphs_seen.push_back(std::move(graph));
    for (int i = 0; i < n; ++i) agents[i] = std::move(results[i].next);
    est = est_next;
    refs = refs_next;
    boxes = boxes_next;
  }

  const std::vector<bool> connected = check_b_connectivity(graphs_seen, spec.b_window);
  for (std::size_t t = 0; t < connected.size(); ++t) {
    if (!connected[t]) {
      if (summary.b_connectivity_violations == 0) {
        std::cerr << "warning: communication graph union not connected from round " << t << "\n";
      }
      ++summary.b_connectivity_violations;
    }
  }

  if (config.oracle_enabled) {
    summary.regret = ledger.total;
    if (summary.oracle_nonconverged > 0) {
      std::cerr << "warning: oracle hit the iteration cap in " << summary.oracle_nonconverged
                << " rounds; regret uses its best iterates\n";
    }
  }

  {
    for (int i = 0; i < n; ++i) {
      avg_x[i] /= static_cast<double>(window_count);
      avg_intruder[i] /= static_cast<double>(window_count);
    }
    avg_target /= static_cast<double>(window_count);
    const Vec3 bary = sigma(avg_x);
    double def_intr = 0.0, spread = 0.0;
    for (int i = 0; i < n; ++i) {
      def_intr += (avg_x[i] - avg_intruder[i]).norm();
      spread += (avg_x[i] - bary).norm();
    }
    summary.final_defender_intruder_dist = def_intr / n;
    summary.final_barycenter_target_dist = (bary - avg_target).norm();
    summary.final_defender_spread = spread / n;
  }

  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("scenario", summary.scenario_name);
  kv.emplace_back("mode", mode == CostMode::kBasketball ? "basketball" : "surveillance");
  kv.emplace_back("agents", std::to_string(n));
  kv.emplace_back("horizon", std::to_string(horizon));
  kv.emplace_back("seed", std::to_string(master_seed));
  kv.emplace_back("prediction", config.prediction_enabled ? "on" : "off");
  kv.emplace_back("box_timing",
                  config.box_timing == BoxTiming::kPredicted ? "predicted" : "previous");
  kv.emplace_back("barrier", spec.barrier_enabled ? "on" : "off");
  kv.emplace_back("oracle", config.oracle_enabled ? "on" : "off");
  kv.emplace_back("oracle_baseline", spec.barrier_enabled ? "stationary" : "optimal");
  kv.emplace_back("regret", format_double(summary.regret));
  kv.emplace_back("oracle_nonconverged", std::to_string(summary.oracle_nonconverged));
  kv.emplace_back("max_s_consensus_err", format_double(summary.max_s_consensus_err));
  kv.emplace_back("max_y_consensus_err", format_double(summary.max_y_consensus_err));
  kv.emplace_back("max_s_conservation_err", format_double(summary.max_s_conservation_err));
  kv.emplace_back("max_y_conservation_err", format_double(summary.max_y_conservation_err));
  kv.emplace_back("min_pairwise_distance", format_double(summary.min_pairwise_distance));
  kv.emplace_back("repair_count", std::to_string(summary.repair_count));
  kv.emplace_back("projection_violations", std::to_string(summary.projection_violations));
  kv.emplace_back("combination_violations", std::to_string(summary.combination_violations));
  kv.emplace_back("b_connectivity_violations",
                  std::to_string(summary.b_connectivity_violations));
  kv.emplace_back("final_defender_intruder_dist",
                  format_double(summary.final_defender_intruder_dist));
  kv.emplace_back("final_barycenter_target_dist",
                  format_double(summary.final_barycenter_target_dist));
  kv.emplace_back("final_defender_spread", format_double(summary.final_defender_spread));
  kv.emplace_back("trace_records", std::to_string(summary.trace_records));
  kv.emplace_back("wall_seconds", format_double(summary.wall_seconds));
  write_summary(dir + "summary.txt", kv);

  return summary;
}

ReplayResult replay_oracle(const std::string& run_dir) {
  const std::string dir = run_dir + "/";
  const ScenarioSpec spec = load_scenario_file(dir + "scenario.yaml");
  const std::vector<TraceRecord> records = read_trace(dir + "trace.csv");
  const int n = spec.team_size();
  if (records.empty() || static_cast<int>(records.size()) % n != 0) {
    throw std::runtime_error("replay_oracle: trace does not cover the team");
  }
  const int rounds = static_cast<int>(records.size()) / n;

  ReplayResult result;
  result.horizon = rounds - 1;
  result.agents = n;

  std::vector<Vec3> x(n);
  std::vector<Vec3> warm;
  for (int t = 0; t < rounds; ++t) {
    for (int i = 0; i < n; ++i) {
      const TraceRecord& rec = records[t * n + i];
      if (rec.t != t || rec.agent != i) {
        throw std::runtime_error("replay_oracle: trace rows out of order");
      }
      x[i] = rec.x;
    }
    if (t == 0) warm = x;
    const WorldState world = world_at(spec, t * spec.dt);
    CommGraph graph = build_proximity_graph(x, spec.comm_radius);
    metropolis_weights(graph, spec.laziness);
    const OracleProblem problem = true_problem(spec, world, graph);
    const OracleResult oracle = centralized_oracle(problem, warm);
    warm = oracle.x_star;
    if (!oracle.converged) ++result.oracle_nonconverged;
    result.ledger.add(t, global_cost(problem, x), oracle.value);
  }
  return result;
}

}  // namespace aggdef
