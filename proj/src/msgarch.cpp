#include "volkit/msgarch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "volkit/error.hpp"
#include "volkit/optimizer.hpp"

namespace volkit {

void validate(const MsModel& model) {
  for (const auto& row : model.transition) {
    for (double x : row) {
      if (!(x >= 0.0 && x <= 1.0)) fail(ErrorKind::InvalidTransition, "entries must lie in [0, 1]");
    }
    if (std::abs(row[0] + row[1] - 1.0) > 1e-12) {
      fail(ErrorKind::InvalidTransition, "rows must sum to 1");
    }
  }
  for (int k = 0; k < 2; ++k) validate(regime_model(model, k));
}

GarchModel regime_model(const MsModel& model, int regime) {
  return GarchModel{Family::sgarch, 1, 1, model.regimes[static_cast<std::size_t>(regime)]};
}

RegimeProbabilities stationary_distribution(const TransitionMatrix& t) {
  const double out1 = t[0][1];
  const double out2 = t[1][0];
  if (out1 + out2 <= 0.0) fail(ErrorKind::ReducibleChain, "both off-diagonal entries are zero");
  const double pi1 = out2 / (out1 + out2);
  return {pi1, 1.0 - pi1};
}

namespace {

/// Shared filter; `floor` > 0 turns on optimiser mode.
template <typename OnStep>
double run_filter(const MsModel& model, std::span<const double> r, double backcast,
                  RegimeProbabilities predicted, double floor, OnStep&& on_step,
                  RegimeProbabilities* next_variance) {
  const GarchModel m0 = regime_model(model, 0);
  const GarchModel m1 = regime_model(model, 1);
  std::array<VarianceRecursion, 2> rec{VarianceRecursion(m0, backcast),
                                       VarianceRecursion(m1, backcast)};
  const auto& t = model.transition;
  double ll = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::array<double, 2> s2{rec[0].variance(), rec[1].variance()};
    std::array<double, 2> logd{};
    for (int k = 0; k < 2; ++k) {
      if (floor > 0.0) {
        if (std::isnan(s2[k]) || std::isinf(s2[k])) return -std::numeric_limits<double>::infinity();
        s2[k] = std::max(s2[k], floor);
      } else if (!(s2[k] > 0.0) || !std::isfinite(s2[k])) {
        fail(ErrorKind::NonPositiveVariance, "regime " + std::to_string(k + 1) + " variance");
      }
      logd[k] = gaussian_log_density(r[i], s2[k]);
    }
    const double top = std::max(logd[0], logd[1]);
    const double w0 = predicted[0] * std::exp(logd[0] - top);
    const double w1 = predicted[1] * std::exp(logd[1] - top);
    const double mix = w0 + w1;
    if (!(mix > 0.0)) return -std::numeric_limits<double>::infinity();
    ll += top + std::log(mix);
    const RegimeProbabilities filtered{w0 / mix, w1 / mix};
    on_step(filtered);
    predicted = {filtered[0] * t[0][0] + filtered[1] * t[1][0],
                 filtered[0] * t[0][1] + filtered[1] * t[1][1]};
    rec[0].observe(r[i], s2[0]);
    rec[1].observe(r[i], s2[1]);
  }
  if (next_variance != nullptr) *next_variance = {rec[0].variance(), rec[1].variance()};
  return ll;
}

}  // namespace

MsFilterResult ms_log_likelihood(const MsModel& model, const ReturnSeries& returns,
                                 std::optional<RegimeProbabilities> initial) {
  validate(model);
  const RegimeProbabilities start = initial ? *initial : stationary_distribution(model.transition);
  if (std::abs(start[0] + start[1] - 1.0) > 1e-12 || start[0] < 0.0 || start[1] < 0.0) {
    fail(ErrorKind::InvalidTransition, "initial distribution must be a probability vector");
  }
  MsFilterResult out;
  out.filtered.reserve(returns.size());
  const auto r = returns.values();
  out.log_likelihood = run_filter(
      model, r, presample_variance(r), start, 0.0,
      [&](const RegimeProbabilities& f) { out.filtered.push_back(f); }, &out.next_variance);
  if (!std::isfinite(out.log_likelihood)) {
    fail(ErrorKind::NonPositiveVariance, "mixture density vanished");
  }
  return out;
}

double ms_log_likelihood_floored(const MsModel& model, std::span<const double> r, double backcast,
                                 double floor) {
  const auto& t = model.transition;
  const double off = t[0][1] + t[1][0];
  if (!(off > 0.0)) return -std::numeric_limits<double>::infinity();
  const RegimeProbabilities start{t[1][0] / off, t[0][1] / off};
  const double ll = run_filter(model, r, backcast, start, floor, [](const RegimeProbabilities&) {},
                               nullptr);
  return std::isfinite(ll) ? ll : -std::numeric_limits<double>::infinity();
}

namespace {

const ParamTransform& regime_transform() {
  static const ParamTransform t(Family::sgarch, 1, 1);
  return t;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) {
  p = std::clamp(p, 1e-9, 1.0 - 1e-9);
  return std::log(p / (1.0 - p));
}

MsModel ms_from_theta(std::span<const double> th) {
  MsModel m;
  m.regimes[0] = regime_transform().to_model(th.subspan(0, 3)).params;
  m.regimes[1] = regime_transform().to_model(th.subspan(3, 3)).params;
  const double stay1 = logistic(th[6]);
  const double stay2 = logistic(th[7]);
  m.transition = {{{stay1, 1.0 - stay1}, {1.0 - stay2, stay2}}};
  return m;
}

std::vector<double> theta_from_ms(const MsModel& m) {
  std::vector<double> th;
  for (int k = 0; k < 2; ++k) {
    const auto part = regime_transform().from_model(regime_model(m, k));
    th.insert(th.end(), part.begin(), part.end());
  }
  th.push_back(logit(m.transition[0][0]));
  th.push_back(logit(m.transition[1][1]));
  return th;
}

MsModel swapped(const MsModel& m) {
  MsModel s;
  s.regimes = {m.regimes[1], m.regimes[0]};
  const auto& t = m.transition;
  s.transition = {{{t[1][1], t[1][0]}, {t[0][1], t[0][0]}}};
  return s;
}

}  // namespace

MsFitResult fit_ms(const ReturnSeries& returns, const FitOptions& options) {
  const auto r = returns.values();
  if (r.size() < kMinMsObservations) {
    fail(ErrorKind::TooFewObservations,
         "fit_ms needs >= " + std::to_string(kMinMsObservations) + " returns");
  }
  const double backcast = presample_variance(r);
  if (!(backcast > 0.0) ||
      std::all_of(r.begin(), r.end(), [&](double x) { return x == r[0]; })) {
    fail(ErrorKind::DegenerateSeries, "returns are constant");
  }

  FitOptions single = options;
  single.warm_starts.clear();
  const FitResult one = fit(Family::sgarch, 1, 1, returns, single);

  const Objective objective = [&](std::span<const double> th) {
    const double ll = ms_log_likelihood_floored(ms_from_theta(th), r, backcast, kTrialVarianceFloor);
    return std::isfinite(ll) ? -ll : std::numeric_limits<double>::infinity();
  };

  // moment-based guess: a calm persistent regime and a turbulent one
  const GarchModel guess = initial_model(Family::sgarch, 1, 1, r);
  MsModel base;
  base.regimes[0] = guess.params;
  base.regimes[1] = guess.params;
  base.regimes[0].omega *= 0.5;
  base.regimes[1].omega *= 3.0;
  base.transition = {{{0.95, 0.05}, {0.10, 0.90}}};
  const std::vector<double> base_theta = theta_from_ms(base);

  std::vector<std::vector<double>> starts;
  for (int s = 1; s <= std::max(1, options.starts); ++s) {
    std::vector<double> th = base_theta;
    if (s > 1) {
      std::mt19937_64 rng(static_cast<std::uint64_t>(s));
      std::normal_distribution<double> normal(0.0, options.perturbation);
      for (double& x : th) x += normal(rng);
    }
    starts.push_back(std::move(th));
  }
  MsModel nested;
  nested.regimes = {one.model.params, one.model.params};
  nested.transition = {{{0.9, 0.1}, {0.1, 0.9}}};
  starts.push_back(theta_from_ms(nested));

  OptimizerOptions opt;
  opt.max_evaluations = options.max_evaluations;
  opt.tolerance = options.tolerance;
  OptimizerResult best;
  best.value = std::numeric_limits<double>::infinity();
  int iterations = 0;
  for (const auto& th0 : starts) {
    OptimizerResult res = minimize(objective, th0, opt);
    iterations += res.iterations;
    if (best.x.empty() || res.value < best.value) best = std::move(res);
  }

  MsModel model = ms_from_theta(best.x);
  validate(model);
  if (stationary_distribution(model.transition)[0] < 0.5) model = swapped(model);

  MsFitResult out;
  out.model = model;
  const MsFilterResult filt = ms_log_likelihood(model, returns);
  out.log_likelihood = filt.log_likelihood;
  out.n = r.size();
  out.stable_probabilities = stationary_distribution(model.transition);
  out.dates.assign(returns.dates().begin(), returns.dates().end());
  out.filtered_probabilities = filt.filtered;
  out.next_variance = filt.next_variance;
  out.converged = best.converged;
  out.iterations = iterations;
  return out;
}

VolForecastPath ms_forecast(const MsFitResult& fit, std::size_t horizon) {
  if (horizon < 1) fail(ErrorKind::InvalidSpec, "horizon must be >= 1");
  const auto& m = fit.model;
  const auto& t = m.transition;
  VolForecastPath path;
  RegimeProbabilities prob = fit.filtered_probabilities.empty()
                                 ? fit.stable_probabilities
                                 : fit.filtered_probabilities.back();
  RegimeProbabilities var = fit.next_variance;
  for (std::size_t h = 0; h < horizon; ++h) {
    prob = {prob[0] * t[0][0] + prob[1] * t[1][0], prob[0] * t[0][1] + prob[1] * t[1][1]};
    path.sigma2.push_back(prob[0] * var[0] + prob[1] * var[1]);
    for (int k = 0; k < 2; ++k) {
      const auto& pv = m.regimes[static_cast<std::size_t>(k)];
      var[k] = pv.omega + (pv.alpha[0] + pv.beta[0]) * var[k];
    }
  }
  double long_run = 0.0;
  // A reducible chain has no unique stationary mix, hence no long-run level.
  bool bounded = t[0][1] + t[1][0] > 0.0;
  const auto pi = bounded ? stationary_distribution(t) : RegimeProbabilities{0.5, 0.5};
  for (int k = 0; k < 2; ++k) {
    const auto& pv = m.regimes[static_cast<std::size_t>(k)];
    const double pers = pv.alpha[0] + pv.beta[0];
    if (pers >= 1.0) bounded = false;
    else long_run += pi[k] * pv.omega / (1.0 - pers);
  }
  if (bounded) path.long_run = long_run;
  path.sigma.resize(path.sigma2.size());
  for (std::size_t h = 0; h < path.sigma2.size(); ++h) path.sigma[h] = std::sqrt(path.sigma2[h]);
  path.horizon = horizon;
  return path;
}

MsSimulation simulate_ms(const MsModel& model, std::size_t n, std::uint64_t seed) {
  validate(model);
  const RegimeProbabilities pi = stationary_distribution(model.transition);
  const GarchModel m0 = regime_model(model, 0);
  const GarchModel m1 = regime_model(model, 1);
  const auto init = [](const GarchModel& m) {
    return unconditional_variance(m).value_or(100.0 * m.params.omega);
  };
  std::array<VarianceRecursion, 2> rec{VarianceRecursion(m0, init(m0)),
                                       VarianceRecursion(m1, init(m1))};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  int state = uniform(rng) < pi[0] ? 0 : 1;
  std::vector<double> r;
  std::vector<int> regimes;
  for (std::size_t i = 0; i < n + kBurnIn; ++i) {
    if (i > 0) state = uniform(rng) < model.transition[static_cast<std::size_t>(state)][0] ? 0 : 1;
    const std::array<double, 2> s2{rec[0].variance(), rec[1].variance()};
    const double x = std::sqrt(s2[static_cast<std::size_t>(state)]) * normal(rng);
    rec[0].observe(x, s2[0]);
    rec[1].observe(x, s2[1]);
    if (i >= static_cast<std::size_t>(kBurnIn)) {
      r.push_back(x);
      regimes.push_back(state);
    }
  }
  return {ReturnSeries::from_values(std::move(r)), std::move(regimes)};
}

}  // namespace volkit
