#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "volkit/estimator.hpp"

namespace volkit {

struct VolForecastPath {
  std::size_t horizon = 0;
  std::vector<double> sigma2;  // step h at index h - 1
  std::vector<double> sigma;
  std::optional<double> long_run;
};

inline constexpr std::size_t kForecastSimulationPaths = 10000;
inline constexpr std::size_t kDefaultRefitEvery = 21;
inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr double kDaysPerYear = 365.0;

/// Multi-step forecast from a fixed model. sgarch/igarch/gjr iterate the recursion
/// with E[R^2] = sigma^2; egarch/aparch average sigma^2 over seeded simulated paths.
VolForecastPath forecast_model(const GarchModel& model, const ReturnSeries& returns,
                               std::size_t horizon, std::uint64_t seed = kDefaultSeed);

VolForecastPath forecast_fixed(const FitResult& fit, const ReturnSeries& returns,
                               std::size_t horizon, std::uint64_t seed = kDefaultSeed);

/// Produces the next fit from the extended sample and the previous fit.
using Refitter = std::function<FitResult(const ReturnSeries&, const FitResult&)>;

/// Mobile window: forecast `refit_every` steps, append zero-mean pseudo-returns drawn
/// with the forecast variances, refit, and continue until `horizon` steps exist.
VolForecastPath forecast_mobile(const FitResult& initial, const ReturnSeries& returns,
                                std::size_t horizon, std::size_t refit_every, std::uint64_t seed,
                                const Refitter& refit);

/// Fits (family, p, q) on `returns` and refits by maximum likelihood with the previous
/// optimum as a warm start.
VolForecastPath forecast_mobile(Family family, int p, int q, const ReturnSeries& returns,
                                std::size_t horizon, std::size_t refit_every = kDefaultRefitEvery,
                                std::uint64_t seed = kDefaultSeed, const FitOptions& options = {});

}  // namespace volkit
