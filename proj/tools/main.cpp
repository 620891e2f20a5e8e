// Command-line front end: run simulations, recompute oracle regret from a
// finished run, and export plot-ready CSV files.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <yaml-cpp/yaml.h>

#include "aggdef/harness.hpp"
#include "aggdef/trace.hpp"

namespace {

std::string default_out_dir() {
  const char* env = std::getenv("AGGDEF_OUT_DIR");
  return (env != nullptr && *env != '\0') ? env : "out";
}

aggdef::BoxTiming parse_box_timing(const std::string& v) {
  if (v == "predicted") return aggdef::BoxTiming::kPredicted;
  if (v == "previous") return aggdef::BoxTiming::kPrevious;
  throw CLI::ValidationError("--box-timing", "expected 'predicted' or 'previous'");
}

// A run file is a scenario document (or `preset: <name>`) with an optional
// top-level `run:` section for execution switches.
void apply_run_file(const std::string& path, aggdef::RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  const YAML::Node root = YAML::Load(text);
  if (root["preset"]) {
    cfg.scenario = aggdef::preset(root["preset"].as<std::string>());
  } else {
    cfg.scenario = aggdef::parse_scenario(text);
  }
  if (root["run"]) {
    const YAML::Node r = root["run"];
    if (r["out_dir"]) cfg.out_dir = r["out_dir"].as<std::string>();
    if (r["seed"]) cfg.seed = r["seed"].as<std::uint64_t>();
    if (r["oracle"]) cfg.oracle_enabled = r["oracle"].as<bool>();
    if (r["prediction"]) cfg.prediction_enabled = r["prediction"].as<bool>();
    if (r["box_timing"]) cfg.box_timing = parse_box_timing(r["box_timing"].as<std::string>());
    if (r["barrier"]) cfg.barrier_override = r["barrier"].as<bool>();
    if (r["kalman_p0"]) cfg.kalman_p0 = r["kalman_p0"].as<double>();
    if (r["strict_kalman_init"]) cfg.kalman_strict_zero_init = r["strict_kalman_init"].as<bool>();
    if (r["trace_graph"]) cfg.trace_graph = r["trace_graph"].as<bool>();
  }
}

int cmd_run(const aggdef::RunConfig& cfg) {
  const aggdef::RunSummary summary = aggdef::run(cfg);
  std::cout << "run complete: " << summary.scenario_name << " seed=" << summary.seed
            << " rounds=" << summary.horizon + 1 << "\n";
  if (summary.oracle_enabled) {
    std::cout << "  regret: " << aggdef::format_double(summary.regret) << "\n";
  }
  std::cout << "  max tracker errors: s=" << aggdef::format_double(summary.max_s_consensus_err)
            << " y=" << aggdef::format_double(summary.max_y_consensus_err) << "\n"
            << "  min pairwise distance: "
            << aggdef::format_double(summary.min_pairwise_distance) << "\n"
            << "  box repairs: " << summary.repair_count
            << ", connectivity violations: " << summary.b_connectivity_violations << "\n"
            << "  outputs in: " << cfg.out_dir << "\n";
  return 0;
}

int cmd_oracle(const std::string& trace_dir) {
  const aggdef::ReplayResult replay = aggdef::replay_oracle(trace_dir);
  const std::string path = trace_dir + "/oracle_replay.csv";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "t,global_cost,oracle_cost,gap\n";
  for (std::size_t t = 0; t < replay.ledger.gap.size(); ++t) {
    out << t << ',' << aggdef::format_double(replay.ledger.realized[t]) << ','
        << aggdef::format_double(replay.ledger.oracle_value[t]) << ','
        << aggdef::format_double(replay.ledger.gap[t]) << "\n";
  }
  std::cout << "recomputed regret over horizon " << replay.horizon << ": "
            << aggdef::format_double(replay.ledger.total) << "\n"
            << "wrote " << path << "\n";
  if (replay.oracle_nonconverged > 0) {
    std::cerr << "warning: oracle hit the iteration cap in " << replay.oracle_nonconverged
              << " rounds\n";
  }
  return 0;
}

int cmd_report(const std::string& trace_dir) {
  const std::string dir = trace_dir + "/";
  const auto records = aggdef::read_trace(dir + "trace.csv");
  {
    std::ofstream out(dir + "report_positions.csv");
    out << "t,agent,x,y,z\n";
    for (const aggdef::TraceRecord& rec : records) {
      out << rec.t << ',' << rec.agent << ',' << aggdef::format_double(rec.x[0]) << ','
          << aggdef::format_double(rec.x[1]) << ',' << aggdef::format_double(rec.x[2]) << "\n";
    }
  }
  const auto metrics = aggdef::read_metrics(dir + "metrics.csv");
  {
    std::ofstream out(dir + "report_tracking.csv");
    out << "t,s_err,y_err\n";
    for (const aggdef::MetricsRecord& m : metrics) {
      out << m.t << ',' << aggdef::format_double(m.s_err) << ','
          << aggdef::format_double(m.y_err) << "\n";
    }
  }
  bool have_oracle = true;
  for (const aggdef::MetricsRecord& m : metrics) have_oracle = have_oracle && !std::isnan(m.gap);
  if (have_oracle) {
    std::ofstream out(dir + "report_regret.csv");
    out << "t,gap,cumulative\n";
    double cumulative = 0.0;
    for (const aggdef::MetricsRecord& m : metrics) {
      if (m.t == 0) continue;  // regret accumulates from round 1
      cumulative += m.gap;
      out << m.t << ',' << aggdef::format_double(m.gap) << ','
          << aggdef::format_double(cumulative) << "\n";
    }
  } else {
    std::cerr << "note: oracle costs missing; run the 'oracle' subcommand first "
                 "to get a regret curve\n";
  }
  std::cout << "report written to " << trace_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed target-defense simulator"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "execute a scenario");
  std::string config_path, preset_name, out_dir, box_timing = "predicted";
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool no_oracle = false, strict_init = false, trace_graph = false;
  std::string prediction = "on", barrier = "default";
  double kalman_p0 = 1.0;
  run_cmd->add_option("--config", config_path, "scenario/run YAML file");
  run_cmd->add_option("--preset", preset_name, "built-in scenario name");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "master random seed");
  run_cmd->add_option("--out", out_dir, "output directory (default $AGGDEF_OUT_DIR or ./out)");
  run_cmd->add_flag("--no-oracle", no_oracle, "skip the per-round centralized oracle");
  run_cmd->add_option("--prediction", prediction, "on|off: use one-step-ahead estimates")
      ->check(CLI::IsMember({"on", "off"}));
  run_cmd->add_option("--box-timing", box_timing, "predicted|previous projection box")
      ->check(CLI::IsMember({"predicted", "previous"}));
  run_cmd->add_option("--barrier", barrier, "on|off override of the collision barrier")
      ->check(CLI::IsMember({"on", "off", "default"}));
  run_cmd->add_option("--kalman-p0", kalman_p0, "initial covariance scale");
  run_cmd->add_flag("--strict-kalman-init", strict_init, "start covariances at zero");
  run_cmd->add_flag("--trace-graph", trace_graph, "log per-round edge lists");

  auto* oracle_cmd = app.add_subcommand("oracle", "recompute regret from a finished run");
  std::string oracle_dir;
  oracle_cmd->add_option("--trace", oracle_dir, "run output directory")->required();

  auto* report_cmd = app.add_subcommand("report", "emit plot-ready CSV files");
  std::string report_dir;
  report_cmd->add_option("--trace", report_dir, "run output directory")->required();

  try {
    app.parse(argc, argv);
    seed_given = seed_opt->count() > 0;

    if (run_cmd->parsed()) {
      aggdef::RunConfig cfg;
      cfg.out_dir = default_out_dir();
      if (!config_path.empty()) {
        apply_run_file(config_path, cfg);
      }
      if (!preset_name.empty()) {
        cfg.scenario = aggdef::preset(preset_name);
      }
      if (config_path.empty() && preset_name.empty()) {
        std::cerr << "error: provide --config or --preset\n";
        return 2;
      }
      if (seed_given) cfg.seed = seed;
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      if (no_oracle) cfg.oracle_enabled = false;
      cfg.prediction_enabled = (prediction != "off");
      cfg.box_timing = parse_box_timing(box_timing);
      if (barrier != "default") cfg.barrier_override = (barrier == "on");
      cfg.kalman_p0 = kalman_p0;
      cfg.kalman_strict_zero_init = strict_init;
      cfg.trace_graph = trace_graph;
      return cmd_run(cfg);
    }
    if (oracle_cmd->parsed()) return cmd_oracle(oracle_dir);
    if (report_cmd->parsed()) return cmd_report(report_dir);
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
