#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "volkit/series.hpp"

namespace volkit {

enum class Family { sgarch, igarch, gjr, egarch, aparch };

std::string_view to_string(Family family);
/// Throws InvalidSpec for unknown names.
Family parse_family(std::string_view name);
bool has_gamma(Family family);

/// Coefficients of a one-regime model. `alpha` and `gamma` have q entries, `beta` has p.
/// `gamma` is empty for sgarch/igarch; `delta` only matters for aparch.
struct ParamVector {
  double omega = 0.0;
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> gamma;
  double delta = 2.0;

  bool operator==(const ParamVector&) const = default;
};

struct GarchModel {
  Family family = Family::sgarch;
  int p = 1;  // variance lags (beta)
  int q = 1;  // shock lags (alpha)
  ParamVector params;

  bool operator==(const GarchModel&) const = default;
};

/// Throws InvalidSpec when orders, vector sizes or family constraints are violated.
void validate(const GarchModel& model);

GarchModel make_sgarch(double omega, std::vector<double> alpha, std::vector<double> beta);
/// The last beta is implied by alpha + beta summing to exactly one.
GarchModel make_igarch(double omega, std::vector<double> alpha, std::vector<double> leading_beta);
GarchModel make_gjr(double omega, std::vector<double> alpha, std::vector<double> gamma,
                    std::vector<double> beta);
GarchModel make_egarch(double omega, std::vector<double> alpha, std::vector<double> gamma,
                       std::vector<double> beta);
GarchModel make_aparch(double omega, std::vector<double> alpha, std::vector<double> gamma,
                       std::vector<double> beta, double delta);

/// E|z| for standard normal z.
inline constexpr double kMeanAbsNormal = 0.79788456080286535588;  // sqrt(2/pi)

/// E(|z| - gamma z)^delta for standard normal z (closed form).
double aparch_kappa(double gamma, double delta);

/// Zero-mean pre-sample variance: mean of squared returns.
double presample_variance(std::span<const double> returns);

/// Steps a one-regime recursion forward. Lags before the first observation are
/// "expected" entries: their shock term is replaced by its expectation under a
/// standard normal innovation at the stored variance.
class VarianceRecursion {
 public:
  VarianceRecursion(const GarchModel& model, double presample_variance);

  /// Conditional variance for the current step given everything observed so far.
  [[nodiscard]] double variance() const;
  /// Record the realised return for the current step, whose variance was `sigma2`.
  void observe(double r, double sigma2);
  /// Record an expected (unrealised) step with E[R^2] = sigma2.
  void observe_expected(double sigma2);

 private:
  struct Lag {
    double r = 0.0;
    double sigma2 = 0.0;
    double state = 0.0;  // sigma2, ln sigma2 or sigma^delta depending on family
    bool expected = true;
  };
  [[nodiscard]] double state_of(double sigma2) const;
  [[nodiscard]] double shock_term(int i, const Lag& lag) const;
  void push(const Lag& lag);

  const GarchModel* model_;
  std::array<double, 3> kappa_{};
  std::array<Lag, 3> lags_{};  // lags_[0] is the most recent
};

struct VariancePath {
  std::vector<Date> dates;
  std::vector<double> sigma2;
  double init_value = 0.0;
  /// One step beyond the sample: sigma^2_{n+1}.
  double next = 0.0;
};

VariancePath conditional_variance_path(const GarchModel& model, const ReturnSeries& returns);

double persistence(const GarchModel& model);
std::optional<double> unconditional_variance(const GarchModel& model);

/// Gaussian zero-mean log-likelihood. Throws NonPositiveVariance.
double log_likelihood(const GarchModel& model, const ReturnSeries& returns);

/// Optimiser kernel: variances floored at `floor`; returns -inf instead of throwing.
double log_likelihood_floored(const GarchModel& model, std::span<const double> returns,
                              double backcast, double floor);

/// log N(r; 0, sigma2)
double gaussian_log_density(double r, double sigma2);

inline constexpr int kBurnIn = 500;

/// R_t = sigma_t z_t with seeded standard-normal z, after kBurnIn discarded draws.
ReturnSeries simulate(const GarchModel& model, std::size_t n, std::uint64_t seed,
                      Date start = make_date(2000, 1, 1));

/// Names of the natural parameters in reporting order (omega, alpha.., gamma.., beta.., delta).
std::vector<std::string> parameter_names(const GarchModel& model);
std::vector<double> parameter_values(const GarchModel& model);

}  // namespace volkit
