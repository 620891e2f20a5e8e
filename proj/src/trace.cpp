#include "aggdef/trace.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace aggdef {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

constexpr const char* kTraceHeader =
    "t,agent,x0,x1,x2,xt0,xt1,xt2,s0,s1,s2,y0,y1,y2,"
    "phat0,phat1,phat2,bhat0,bhat1,bhat2,blo0,blo1,blo2,bhi0,bhi1,bhi2,cost,degree";

constexpr const char* kMetricsHeader =
    "t,global_cost,oracle_cost,gap,s_err,y_err,min_dist,repairs";

void append_vec3(std::string& line, const Vec3& v) {
  for (int c = 0; c < 3; ++c) {
    line += ',';
    line += format_double(v[c]);
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

Vec3 vec3_at(const std::vector<std::string>& f, std::size_t k) {
  return Vec3(std::stod(f[k]), std::stod(f[k + 1]), std::stod(f[k + 2]));
}

}  // namespace

TraceWriter::TraceWriter(const std::string& path) : out_(path) {
  if (!out_) throw std::runtime_error("cannot open trace file for writing: " + path);
  out_ << kTraceHeader << "\n";
}

void TraceWriter::write(const TraceRecord& rec) {
  std::string line = std::to_string(rec.t) + "," + std::to_string(rec.agent);
  append_vec3(line, rec.x);
  append_vec3(line, rec.x_tilde);
  append_vec3(line, rec.s);
  append_vec3(line, rec.y);
  append_vec3(line, rec.p_hat);
  append_vec3(line, rec.b_hat);
  append_vec3(line, rec.box_lower);
  append_vec3(line, rec.box_upper);
  line += ',';
  line += format_double(rec.cost);
  line += ',';
  line += std::to_string(rec.degree);
  out_ << line << "\n";
}

std::vector<TraceRecord> read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw std::runtime_error("unrecognized trace header in " + path);
  }
  std::vector<TraceRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 28) throw std::runtime_error("malformed trace row in " + path);
    TraceRecord rec;
    rec.t = std::stoi(f[0]);
    rec.agent = std::stoi(f[1]);
    rec.x = vec3_at(f, 2);
    rec.x_tilde = vec3_at(f, 5);
    rec.s = vec3_at(f, 8);
    rec.y = vec3_at(f, 11);
    rec.p_hat = vec3_at(f, 14);
    rec.b_hat = vec3_at(f, 17);
    rec.box_lower = vec3_at(f, 20);
    rec.box_upper = vec3_at(f, 23);
    rec.cost = std::stod(f[26]);
    rec.degree = std::stoi(f[27]);
    records.push_back(rec);
  }
  return records;
}

MetricsWriter::MetricsWriter(const std::string& path) : out_(path) {
  if (!out_) throw std::runtime_error("cannot open metrics file for writing: " + path);
  out_ << kMetricsHeader << "\n";
}

void MetricsWriter::write(const MetricsRecord& rec) {
  out_ << rec.t << ',' << format_double(rec.global_cost) << ',' << format_double(rec.oracle_cost)
       << ',' << format_double(rec.gap) << ',' << format_double(rec.s_err) << ','
       << format_double(rec.y_err) << ',' << format_double(rec.min_dist) << ',' << rec.repairs
       << "\n";
}

std::vector<MetricsRecord> read_metrics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open metrics file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kMetricsHeader) {
    throw std::runtime_error("unrecognized metrics header in " + path);
  }
  std::vector<MetricsRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 8) throw std::runtime_error("malformed metrics row in " + path);
    MetricsRecord rec;
    rec.t = std::stoi(f[0]);
    rec.global_cost = std::stod(f[1]);
    rec.oracle_cost = std::stod(f[2]);
    rec.gap = std::stod(f[3]);
    rec.s_err = std::stod(f[4]);
    rec.y_err = std::stod(f[5]);
    rec.min_dist = std::stod(f[6]);
    rec.repairs = std::stoi(f[7]);
    records.push_back(rec);
  }
  return records;
}

GraphLogWriter::GraphLogWriter(const std::string& path) : out_(path) {
  if (!out_) throw std::runtime_error("cannot open graph log for writing: " + path);
  out_ << "t,i,j\n";
}

void GraphLogWriter::write(int t, const std::vector<std::pair<int, int>>& edges) {
  for (const auto& [i, j] : edges) {
    out_ << t << ',' << i << ',' << j << "\n";
  }
}

void write_summary(const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open summary for writing: " + path);
  for (const auto& [key, value] : kv) {
    out << key << ": " << value << "\n";
  }
}

std::map<std::string, std::string> read_summary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open summary: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.find(": ");
    if (pos == std::string::npos) continue;
    kv[line.substr(0, pos)] = line.substr(pos + 2);
  }
  return kv;
}

}  // namespace aggdef
