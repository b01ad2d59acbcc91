#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "volkit/estimator.hpp"
#include "volkit/forecast.hpp"

namespace volkit {

/// T[i][j] = Pr(s_{t+1} = j | s_t = i).
using TransitionMatrix = std::array<std::array<double, 2>, 2>;
using RegimeProbabilities = std::array<double, 2>;

/// Two sgarch(1,1) regimes whose variances run in parallel on the full return
/// history (each regime's sigma^2 depends only on its own past).
struct MsModel {
  std::array<ParamVector, 2> regimes;
  TransitionMatrix transition{};
};

inline constexpr int kMsFreeParameters = 8;
inline constexpr std::size_t kMinMsObservations = 100;

/// Throws InvalidTransition or InvalidSpec.
void validate(const MsModel& model);
GarchModel regime_model(const MsModel& model, int regime);

/// pi T = pi for a 2-state chain. Throws ReducibleChain when both off-diagonals are 0.
RegimeProbabilities stationary_distribution(const TransitionMatrix& transition);

struct MsFilterResult {
  double log_likelihood = 0.0;
  std::vector<RegimeProbabilities> filtered;  // Pr(s_t | R_1..R_t)
  RegimeProbabilities next_variance{};        // each regime's sigma^2 one step past the sample
};

/// Discrete-state filter. The initial predicted distribution defaults to the
/// stationary distribution of T.
MsFilterResult ms_log_likelihood(const MsModel& model, const ReturnSeries& returns,
                                 std::optional<RegimeProbabilities> initial = std::nullopt);

/// Optimiser kernel: floors variances, returns -inf instead of throwing.
double ms_log_likelihood_floored(const MsModel& model, std::span<const double> returns,
                                 double backcast, double floor);

struct MsFitResult {
  MsModel model;
  double log_likelihood = 0.0;
  std::size_t n = 0;
  int k = kMsFreeParameters;
  RegimeProbabilities stable_probabilities{};
  std::vector<Date> dates;
  std::vector<RegimeProbabilities> filtered_probabilities;
  RegimeProbabilities next_variance{};
  bool converged = false;
  int iterations = 0;
};

/// Maximum likelihood over (omega, alpha, beta) per regime and the two staying
/// probabilities. One start duplicates the fitted one-regime sgarch(1,1) in both
/// regimes, so the result never falls below the one-regime likelihood.
/// Regime 1 is relabelled to be the one with the larger stationary probability.
MsFitResult fit_ms(const ReturnSeries& returns, const FitOptions& options = {});

/// Regime probabilities advanced by T^h from the last filtered distribution;
/// each regime's variance iterated under E[R^2] = its own sigma^2; reported
/// variance is the probability-weighted mixture.
VolForecastPath ms_forecast(const MsFitResult& fit, std::size_t horizon);

struct MsSimulation {
  ReturnSeries returns;
  std::vector<int> regimes;  // 0 or 1 per observation
};

MsSimulation simulate_ms(const MsModel& model, std::size_t n, std::uint64_t seed);

}  // namespace volkit
