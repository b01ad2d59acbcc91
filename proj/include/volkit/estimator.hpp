#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "volkit/garch.hpp"
#include "volkit/series.hpp"

namespace volkit {

inline constexpr std::size_t kMinFitObservations = 50;
/// Variance floor used only inside optimiser trial evaluations.
inline constexpr double kTrialVarianceFloor = 1e-12;

struct FitOptions {
  /// Deterministic starts; start s (1-based) perturbs the moment-based guess with seed s,
  /// start 1 is the unperturbed guess.
  int starts = 5;
  int max_evaluations = 2000;  // per start
  double tolerance = 1e-8;
  double perturbation = 0.5;   // std-dev of start perturbations in transformed space
  /// Extra starting points (e.g. a nested model's optimum), tried after the seeded starts.
  std::vector<GarchModel> warm_starts;
};

struct FitResult {
  GarchModel model;
  double log_likelihood = 0.0;
  std::size_t n = 0;
  int k = 0;
  /// Aligned with parameter_names(model); nullopt when the Hessian was unusable.
  std::vector<std::optional<double>> std_errors;
  std::vector<std::optional<double>> p_values;
  bool converged = false;
  int iterations = 0;
};

/// Maps an unconstrained vector onto a family's feasible region:
/// log for positive scalars, a softmax with slack so that the persistence
/// shares stay positive and sum below one (exactly one for igarch), logistic
/// splits for gjr asymmetry, tanh for aparch gamma, identity for egarch.
class ParamTransform {
 public:
  ParamTransform(Family family, int p, int q);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] GarchModel to_model(std::span<const double> theta) const;
  /// Inverse map; boundary values are nudged into the interior.
  [[nodiscard]] std::vector<double> from_model(const GarchModel& model) const;

 private:
  Family family_;
  int p_;
  int q_;
  std::size_t dim_;
};

/// Free parameters after constraints (igarch drops the last beta).
int free_parameter_count(Family family, int p, int q);

/// Moment-based starting model.
GarchModel initial_model(Family family, int p, int q, std::span<const double> returns);

FitResult fit(Family family, int p, int q, const ReturnSeries& returns,
              const FitOptions& options = {});

struct ParameterInference {
  std::vector<std::optional<double>> std_errors;
  std::vector<std::optional<double>> p_values;
};

/// Inverse negative Hessian of the log-likelihood over the free natural parameters
/// (central differences, relative step 1e-4). Throws SingularHessian when the
/// Hessian is not negative definite.
ParameterInference standard_errors(const FitResult& fit, const ReturnSeries& returns);

}  // namespace volkit
