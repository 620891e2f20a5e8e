#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace aggdef {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat63 = Eigen::Matrix<double, 6, 3>;
using Mat36 = Eigen::Matrix<double, 3, 6>;

// splitmix64-style mixer used to derive independent substream seeds.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t agent, std::uint64_t source);

// Deterministic random stream owned by one (agent, noise source) pair.
// Streams derived from the same master seed are independent, so running
// agents in parallel cannot change the draw sequence.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t agent_id, std::uint64_t source_id)
      : engine_(mix_seed(master_seed, agent_id, source_id)), gauss_(0.0, 1.0) {}

  double normal() { return gauss_(engine_); }
  double uniform() { return uniform_(engine_); }

  Vec3 normal3() {
    Vec3 v;
    v << normal(), normal(), normal();
    return v;
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> gauss_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace aggdef
