#include "aggdef/types.hpp"

namespace aggdef {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t agent, std::uint64_t source) {
  std::uint64_t state = master;
  std::uint64_t h = splitmix64(state);
  state ^= (agent + 1) * 0xd6e8feb86659fd93ULL;
  h ^= splitmix64(state);
  state ^= (source + 1) * 0xa3b195354a39b70dULL;
  h ^= splitmix64(state);
  return h;
}

}  // namespace aggdef
