#pragma once

#include <functional>
#include <span>
#include <vector>

namespace volkit {

/// Function to minimise over an unconstrained space.
using Objective = std::function<double(std::span<const double>)>;

struct OptimizerOptions {
  int max_evaluations = 2000;
  /// Polish stops once a full quasi-Newton iteration improves by less than this.
  double tolerance = 1e-8;
  double initial_step = 0.5;
  /// Fraction of the evaluation budget the simplex stage may use.
  double simplex_share = 0.6;
};

struct OptimizerResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;
};

OptimizerResult nelder_mead(const Objective& f, std::vector<double> x0, double initial_step,
                            int max_evaluations, double tolerance);
OptimizerResult bfgs(const Objective& f, std::vector<double> x0, int max_evaluations,
                     double tolerance);
/// Simplex search, then quasi-Newton polish from the simplex optimum.
OptimizerResult minimize(const Objective& f, std::vector<double> x0,
                         const OptimizerOptions& options = {});

}  // namespace volkit
