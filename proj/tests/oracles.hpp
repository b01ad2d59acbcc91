#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "volkit/msgarch.hpp"

namespace volkit::testing {

inline std::vector<double> gaussian(std::size_t n, std::uint64_t seed, double sd = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, sd);
  std::vector<double> out(n);
  for (auto& x : out) x = z(rng);
  return out;
}

// Sum over every regime path. Each regime's variance path is computed on its own,
// which is exact for parallel recursions.
inline double enumerated_log_likelihood(const MsModel& m, const std::vector<double>& r) {
  const std::size_t n = r.size();
  double v = 0.0;
  for (double x : r) v += x * x;
  v /= static_cast<double>(n);
  std::array<std::vector<double>, 2> s2;
  for (int k = 0; k < 2; ++k) {
    const auto& p = m.regimes[k];
    double prev_s2 = v, prev_r2 = v;
    for (std::size_t t = 0; t < n; ++t) {
      const double h = p.omega + p.alpha[0] * prev_r2 + p.beta[0] * prev_s2;
      s2[k].push_back(h);
      prev_s2 = h;
      prev_r2 = r[t] * r[t];
    }
  }
  const auto& T = m.transition;
  const double off = T[0][1] + T[1][0];
  const std::array<double, 2> pi{T[1][0] / off, T[0][1] / off};
  double total = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double prob = 1.0;
    int prev = -1;
    for (std::size_t t = 0; t < n; ++t) {
      const int s = static_cast<int>((mask >> t) & 1u);
      prob *= prev < 0 ? pi[s] : T[prev][s];
      prob *= std::exp(-0.5 * r[t] * r[t] / s2[s][t]) / std::sqrt(2.0 * std::numbers::pi * s2[s][t]);
      prev = s;
    }
    total += prob;
  }
  return std::log(total);
}

}  // namespace volkit::testing
