#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cdk/scalar.hpp"

namespace cdk {

/// All randomized choices in the library flow through a seeded mt19937_64,
/// so a scenario seed fully determines every sampled quantity.
using rng_engine = std::mt19937_64;

inline rng_engine make_rng(std::uint64_t seed) { return rng_engine(seed); }

/// Random positive convex weights with exact scalar values: integer numerators
/// in [1, granularity] over their total.
template <class S>
std::vector<S> random_convex_weights(rng_engine& rng, std::size_t count, int granularity = 1000) {
  std::uniform_int_distribution<long long> dist(1, granularity);
  std::vector<long long> num(count);
  long long total = 0;
  for (auto& v : num) {
    v = dist(rng);
    total += v;
  }
  std::vector<S> out;
  out.reserve(count);
  for (long long v : num) out.push_back(ratio<S>(v, total));
  return out;
}

}  // namespace cdk
