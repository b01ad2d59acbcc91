#include "volkit/garch.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "volkit/error.hpp"

namespace volkit {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::sgarch: return "sgarch";
    case Family::igarch: return "igarch";
    case Family::gjr: return "gjr";
    case Family::egarch: return "egarch";
    case Family::aparch: return "aparch";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::sgarch, Family::igarch, Family::gjr, Family::egarch, Family::aparch}) {
    if (name == to_string(f)) return f;
  }
  fail(ErrorKind::InvalidSpec, "unknown family '" + std::string(name) + "'");
}

bool has_gamma(Family family) {
  return family == Family::gjr || family == Family::egarch || family == Family::aparch;
}

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

void validate(const GarchModel& m) {
  const auto& pv = m.params;
  if (m.p < 1 || m.p > 3 || m.q < 1 || m.q > 3) {
    fail(ErrorKind::InvalidSpec, "orders must satisfy 1 <= p,q <= 3");
  }
  if (pv.alpha.size() != static_cast<std::size_t>(m.q) ||
      pv.beta.size() != static_cast<std::size_t>(m.p)) {
    fail(ErrorKind::InvalidSpec, "alpha needs q entries and beta needs p entries");
  }
  if (has_gamma(m.family) ? pv.gamma.size() != static_cast<std::size_t>(m.q) : !pv.gamma.empty()) {
    fail(ErrorKind::InvalidSpec, "gamma size does not match family");
  }
  if (!std::isfinite(pv.omega) || !std::isfinite(pv.delta) || !all_finite(pv.alpha) ||
      !all_finite(pv.beta) || !all_finite(pv.gamma)) {
    fail(ErrorKind::InvalidSpec, "non-finite parameter");
  }
  if (m.family == Family::egarch) return;

  if (pv.omega < 0.0) fail(ErrorKind::InvalidSpec, "omega must be >= 0");
  for (double a : pv.alpha) {
    if (a < 0.0) fail(ErrorKind::InvalidSpec, "alpha must be >= 0");
  }
  for (double b : pv.beta) {
    if (b < 0.0) fail(ErrorKind::InvalidSpec, "beta must be >= 0");
  }
  if (m.family == Family::gjr) {
    for (int i = 0; i < m.q; ++i) {
      if (pv.alpha[i] + pv.gamma[i] < 0.0) fail(ErrorKind::InvalidSpec, "alpha + gamma must be >= 0");
    }
  }
  if (m.family == Family::aparch) {
    for (double g : pv.gamma) {
      if (!(std::abs(g) < 1.0)) fail(ErrorKind::InvalidSpec, "|gamma| must be < 1");
    }
    if (!(pv.delta > 0.0)) fail(ErrorKind::InvalidSpec, "delta must be > 0");
  }
  if (m.family == Family::igarch && std::abs(sum(pv.alpha) + sum(pv.beta) - 1.0) > 1e-12) {
    fail(ErrorKind::InvalidSpec, "igarch alpha + beta must equal 1");
  }
}

GarchModel make_sgarch(double omega, std::vector<double> alpha, std::vector<double> beta) {
  GarchModel m{Family::sgarch, static_cast<int>(beta.size()), static_cast<int>(alpha.size()),
               {omega, std::move(alpha), std::move(beta), {}, 2.0}};
  validate(m);
  return m;
}

GarchModel make_igarch(double omega, std::vector<double> alpha, std::vector<double> leading_beta) {
  const double implied = 1.0 - sum(alpha) - sum(leading_beta);
  leading_beta.push_back(implied);
  GarchModel m{Family::igarch, static_cast<int>(leading_beta.size()),
               static_cast<int>(alpha.size()),
               {omega, std::move(alpha), std::move(leading_beta), {}, 2.0}};
  validate(m);
  return m;
}

GarchModel make_gjr(double omega, std::vector<double> alpha, std::vector<double> gamma,
                    std::vector<double> beta) {
  GarchModel m{Family::gjr, static_cast<int>(beta.size()), static_cast<int>(alpha.size()),
               {omega, std::move(alpha), std::move(beta), std::move(gamma), 2.0}};
  validate(m);
  return m;
}

GarchModel make_egarch(double omega, std::vector<double> alpha, std::vector<double> gamma,
                       std::vector<double> beta) {
  GarchModel m{Family::egarch, static_cast<int>(beta.size()), static_cast<int>(alpha.size()),
               {omega, std::move(alpha), std::move(beta), std::move(gamma), 2.0}};
  validate(m);
  return m;
}

GarchModel make_aparch(double omega, std::vector<double> alpha, std::vector<double> gamma,
                       std::vector<double> beta, double delta) {
  GarchModel m{Family::aparch, static_cast<int>(beta.size()), static_cast<int>(alpha.size()),
               {omega, std::move(alpha), std::move(beta), std::move(gamma), delta}};
  validate(m);
  return m;
}

double aparch_kappa(double gamma, double delta) {
  // E[z^delta; z > 0] = 2^(delta/2) Gamma((delta+1)/2) / (2 sqrt(pi))
  const double half_moment = std::pow(2.0, 0.5 * delta) * std::tgamma(0.5 * (delta + 1.0)) /
                             (2.0 * std::sqrt(std::numbers::pi));
  return (std::pow(1.0 - gamma, delta) + std::pow(1.0 + gamma, delta)) * half_moment;
}

double presample_variance(std::span<const double> returns) {
  double s = 0.0;
  for (double r : returns) s += r * r;
  return s / static_cast<double>(returns.size());
}

VarianceRecursion::VarianceRecursion(const GarchModel& model, double presample)
    : model_(&model) {
  if (model.family == Family::aparch) {
    for (int i = 0; i < model.q; ++i) kappa_[i] = aparch_kappa(model.params.gamma[i], model.params.delta);
  }
  const Lag init{0.0, presample, state_of(presample), true};
  lags_.fill(init);
}

double VarianceRecursion::state_of(double sigma2) const {
  switch (model_->family) {
    case Family::egarch: return std::log(sigma2);
    case Family::aparch: return std::pow(sigma2, 0.5 * model_->params.delta);
    default: return sigma2;
  }
}

double VarianceRecursion::shock_term(int i, const Lag& lag) const {
  const auto& pv = model_->params;
  const double a = pv.alpha[i];
  switch (model_->family) {
    case Family::sgarch:
    case Family::igarch:
      return a * (lag.expected ? lag.sigma2 : lag.r * lag.r);
    case Family::gjr:
      if (lag.expected) return (a + 0.5 * pv.gamma[i]) * lag.sigma2;
      return (a + (lag.r < 0.0 ? pv.gamma[i] : 0.0)) * lag.r * lag.r;
    case Family::egarch: {
      if (lag.expected) return 0.0;
      const double z = lag.r / std::sqrt(lag.sigma2);
      return a * z + pv.gamma[i] * (std::abs(z) - kMeanAbsNormal);
    }
    case Family::aparch:
      if (lag.expected) return a * kappa_[i] * lag.state;
      return a * std::pow(std::abs(lag.r) - pv.gamma[i] * lag.r, pv.delta);
  }
  return 0.0;
}

double VarianceRecursion::variance() const {
  const auto& pv = model_->params;
  double h = pv.omega;
  for (int i = 0; i < model_->q; ++i) h += shock_term(i, lags_[i]);
  for (int j = 0; j < model_->p; ++j) h += pv.beta[j] * lags_[j].state;
  switch (model_->family) {
    case Family::egarch: return std::exp(h);
    case Family::aparch: return h > 0.0 ? std::pow(h, 2.0 / pv.delta) : (h == 0.0 ? 0.0 : -1.0);
    default: return h;
  }
}

void VarianceRecursion::push(const Lag& lag) {
  lags_[2] = lags_[1];
  lags_[1] = lags_[0];
  lags_[0] = lag;
}

void VarianceRecursion::observe(double r, double sigma2) {
  push(Lag{r, sigma2, state_of(sigma2), false});
}

void VarianceRecursion::observe_expected(double sigma2) {
  push(Lag{0.0, sigma2, state_of(sigma2), true});
}

namespace {

bool usable(double sigma2) { return sigma2 > 0.0 && std::isfinite(sigma2); }

}  // namespace

VariancePath conditional_variance_path(const GarchModel& model, const ReturnSeries& returns) {
  validate(model);
  const auto r = returns.values();
  VariancePath path;
  path.init_value = presample_variance(r);
  path.dates.assign(returns.dates().begin(), returns.dates().end());
  path.sigma2.reserve(r.size());
  VarianceRecursion rec(model, path.init_value);
  for (std::size_t t = 0; t < r.size(); ++t) {
    const double s2 = rec.variance();
    if (!usable(s2)) {
      fail(ErrorKind::NonPositiveVariance, "variance at " + format_date(path.dates[t]) + " is " +
                                               std::to_string(s2));
    }
    path.sigma2.push_back(s2);
    rec.observe(r[t], s2);
  }
  path.next = rec.variance();
  if (!usable(path.next)) fail(ErrorKind::NonPositiveVariance, "one-step-ahead variance");
  return path;
}

double persistence(const GarchModel& m) {
  const auto& pv = m.params;
  switch (m.family) {
    case Family::igarch: return 1.0;
    case Family::sgarch: return sum(pv.alpha) + sum(pv.beta);
    case Family::gjr: return sum(pv.alpha) + sum(pv.beta) + 0.5 * sum(pv.gamma);
    case Family::egarch: return sum(pv.beta);
    case Family::aparch: {
      double p = sum(pv.beta);
      for (int i = 0; i < m.q; ++i) p += pv.alpha[i] * aparch_kappa(pv.gamma[i], pv.delta);
      return p;
    }
  }
  return 0.0;
}

std::optional<double> unconditional_variance(const GarchModel& m) {
  const double p = persistence(m);
  switch (m.family) {
    case Family::igarch: return std::nullopt;
    case Family::sgarch:
    case Family::gjr:
      if (p >= 1.0) return std::nullopt;
      return m.params.omega / (1.0 - p);
    case Family::aparch:
      if (p >= 1.0) return std::nullopt;
      return std::pow(m.params.omega / (1.0 - p), 2.0 / m.params.delta);
    case Family::egarch:
      // fixed point of the log recursion with shock terms at their zero mean
      if (std::abs(p) >= 1.0) return std::nullopt;
      return std::exp(m.params.omega / (1.0 - p));
  }
  return std::nullopt;
}

double gaussian_log_density(double r, double sigma2) {
  constexpr double kHalfLog2Pi = 0.91893853320467274178;
  return -kHalfLog2Pi - 0.5 * std::log(sigma2) - 0.5 * r * r / sigma2;
}

double log_likelihood(const GarchModel& model, const ReturnSeries& returns) {
  validate(model);
  const auto r = returns.values();
  VarianceRecursion rec(model, presample_variance(r));
  double ll = 0.0;
  for (std::size_t t = 0; t < r.size(); ++t) {
    const double s2 = rec.variance();
    if (!usable(s2)) {
      fail(ErrorKind::NonPositiveVariance, "variance at " + format_date(returns.dates()[t]));
    }
    ll += gaussian_log_density(r[t], s2);
    rec.observe(r[t], s2);
  }
  return ll;
}

double log_likelihood_floored(const GarchModel& model, std::span<const double> r, double backcast,
                              double floor) {
  VarianceRecursion rec(model, backcast);
  double ll = 0.0;
  for (double x : r) {
    double s2 = rec.variance();
    if (std::isnan(s2) || std::isinf(s2)) return -std::numeric_limits<double>::infinity();
    s2 = std::max(s2, floor);
    ll += gaussian_log_density(x, s2);
    rec.observe(x, s2);
  }
  return std::isfinite(ll) ? ll : -std::numeric_limits<double>::infinity();
}

ReturnSeries simulate(const GarchModel& model, std::size_t n, std::uint64_t seed, Date start) {
  validate(model);
  if (n < 1) fail(ErrorKind::InvalidSpec, "n must be >= 1");
  const double p = persistence(model);
  if (model.family != Family::igarch && std::abs(p) > 1.0) {
    fail(ErrorKind::ExplosiveModel, "persistence " + std::to_string(p) + " exceeds 1");
  }
  double init = unconditional_variance(model).value_or(100.0 * model.params.omega);
  if (!usable(init)) init = 1e-4;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  VarianceRecursion rec(model, init);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t t = 0; t < n + kBurnIn; ++t) {
    const double s2 = rec.variance();
    if (!usable(s2)) fail(ErrorKind::NonPositiveVariance, "simulated variance left (0, inf)");
    const double r = std::sqrt(s2) * normal(rng);
    rec.observe(r, s2);
    if (t >= static_cast<std::size_t>(kBurnIn)) out.push_back(r);
  }
  return ReturnSeries::from_values(std::move(out), start);
}

std::vector<std::string> parameter_names(const GarchModel& m) {
  std::vector<std::string> names{"omega"};
  for (int i = 1; i <= m.q; ++i) names.push_back("alpha" + std::to_string(i));
  if (has_gamma(m.family)) {
    for (int i = 1; i <= m.q; ++i) names.push_back("gamma" + std::to_string(i));
  }
  for (int j = 1; j <= m.p; ++j) names.push_back("beta" + std::to_string(j));
  if (m.family == Family::aparch) names.emplace_back("delta");
  return names;
}

std::vector<double> parameter_values(const GarchModel& m) {
  const auto& pv = m.params;
  std::vector<double> v{pv.omega};
  v.insert(v.end(), pv.alpha.begin(), pv.alpha.end());
  if (has_gamma(m.family)) v.insert(v.end(), pv.gamma.begin(), pv.gamma.end());
  v.insert(v.end(), pv.beta.begin(), pv.beta.end());
  if (m.family == Family::aparch) v.push_back(pv.delta);
  return v;
}

}  // namespace volkit
