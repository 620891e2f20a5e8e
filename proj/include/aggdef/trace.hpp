#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "aggdef/types.hpp"

namespace aggdef {

// One row per (round, agent). Estimates are the references the agent's round
// actually used; the box is the projection box of that round.
struct TraceRecord {
  int t = 0;
  int agent = 0;
  Vec3 x = Vec3::Zero();
  Vec3 x_tilde = Vec3::Zero();
  Vec3 s = Vec3::Zero();
  Vec3 y = Vec3::Zero();
  Vec3 p_hat = Vec3::Zero();
  Vec3 b_hat = Vec3::Zero();
  Vec3 box_lower = Vec3::Zero();
  Vec3 box_upper = Vec3::Zero();
  double cost = 0.0;
  int degree = 0;
};

// Doubles are serialized with 17 significant digits, which round-trips
// IEEE-754 doubles exactly; replays therefore reproduce in-run numbers bit
// for bit.
std::string format_double(double v);

class TraceWriter {
 public:
  explicit TraceWriter(const std::string& path);
  void write(const TraceRecord& rec);

 private:
  std::ofstream out_;
};

std::vector<TraceRecord> read_trace(const std::string& path);

struct MetricsRecord {
  int t = 0;
  double global_cost = 0.0;
  double oracle_cost = 0.0;  // NaN when the oracle is disabled
  double gap = 0.0;
  double s_err = 0.0;
  double y_err = 0.0;
  double min_dist = 0.0;
  int repairs = 0;
};

class MetricsWriter {
 public:
  explicit MetricsWriter(const std::string& path);
  void write(const MetricsRecord& rec);

 private:
  std::ofstream out_;
};

std::vector<MetricsRecord> read_metrics(const std::string& path);

// Round-stamped edge lists (i < j; self-loops implicit).
class GraphLogWriter {
 public:
  explicit GraphLogWriter(const std::string& path);
  void write(int t, const std::vector<std::pair<int, int>>& edges);

 private:
  std::ofstream out_;
};

// summary.txt as ordered key: value lines.
void write_summary(const std::string& path, const std::vector<std::pair<std::string, std::string>>& kv);
std::map<std::string, std::string> read_summary(const std::string& path);

}  // namespace aggdef
