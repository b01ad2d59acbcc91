#include "volkit/forecast.hpp"

#include <cmath>
#include <random>

#include "volkit/error.hpp"

namespace volkit {

namespace {

VarianceRecursion primed(const GarchModel& model, const ReturnSeries& returns) {
  const auto r = returns.values();
  VarianceRecursion rec(model, presample_variance(r));
  for (double x : r) {
    const double s2 = rec.variance();
    if (!(s2 > 0.0) || !std::isfinite(s2)) {
      fail(ErrorKind::NonPositiveVariance, "in-sample variance left (0, inf)");
    }
    rec.observe(x, s2);
  }
  return rec;
}

void finish(VolForecastPath& path) {
  path.sigma.resize(path.sigma2.size());
  for (std::size_t h = 0; h < path.sigma2.size(); ++h) {
    if (!(path.sigma2[h] > 0.0) || !std::isfinite(path.sigma2[h])) {
      fail(ErrorKind::NonPositiveVariance, "forecast variance at step " + std::to_string(h + 1));
    }
    path.sigma[h] = std::sqrt(path.sigma2[h]);
  }
  path.horizon = path.sigma2.size();
}

}  // namespace

VolForecastPath forecast_model(const GarchModel& model, const ReturnSeries& returns,
                               std::size_t horizon, std::uint64_t seed) {
  validate(model);
  if (horizon < 1) fail(ErrorKind::InvalidSpec, "horizon must be >= 1");
  const double p = persistence(model);
  if (model.family != Family::igarch && p > 1.0) {
    fail(ErrorKind::ExplosiveModel, "persistence " + std::to_string(p) + " exceeds 1");
  }
  VolForecastPath path;
  path.long_run = unconditional_variance(model);
  path.sigma2.reserve(horizon);
  const VarianceRecursion start = primed(model, returns);

  if (model.family == Family::egarch || model.family == Family::aparch) {
    // steps outer, paths inner: a longer horizon reuses the same leading draws
    std::vector<VarianceRecursion> paths(kForecastSimulationPaths, start);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t h = 0; h < horizon; ++h) {
      double acc = 0.0;
      for (auto& rec : paths) {
        const double s2 = rec.variance();
        acc += s2;
        rec.observe(std::sqrt(s2) * normal(rng), s2);
      }
      path.sigma2.push_back(acc / static_cast<double>(paths.size()));
    }
  } else {
    VarianceRecursion rec = start;
    for (std::size_t h = 0; h < horizon; ++h) {
      const double s2 = rec.variance();
      path.sigma2.push_back(s2);
      rec.observe_expected(s2);
    }
  }
  finish(path);
  return path;
}

VolForecastPath forecast_fixed(const FitResult& fit, const ReturnSeries& returns,
                               std::size_t horizon, std::uint64_t seed) {
  return forecast_model(fit.model, returns, horizon, seed);
}

VolForecastPath forecast_mobile(const FitResult& initial, const ReturnSeries& returns,
                                std::size_t horizon, std::size_t refit_every, std::uint64_t seed,
                                const Refitter& refit) {
  if (horizon < 1) fail(ErrorKind::InvalidSpec, "horizon must be >= 1");
  if (refit_every < 1) fail(ErrorKind::InvalidSpec, "refit_every must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  VolForecastPath out;
  FitResult current = initial;
  ReturnSeries data = returns;
  while (out.sigma2.size() < horizon) {
    const std::size_t step = std::min(refit_every, horizon - out.sigma2.size());
    const VolForecastPath chunk = forecast_fixed(current, data, step, seed);
    out.sigma2.insert(out.sigma2.end(), chunk.sigma2.begin(), chunk.sigma2.end());
    out.long_run = chunk.long_run;
    if (out.sigma2.size() >= horizon) break;

    std::vector<Date> dates(step);
    std::vector<double> pseudo(step);
    const Date last = data.dates().back();
    for (std::size_t h = 0; h < step; ++h) {
      dates[h] = last + std::chrono::days{h + 1};
      pseudo[h] = chunk.sigma[h] * normal(rng);
    }
    data = data.appended(dates, pseudo);
    current = refit(data, current);
  }
  finish(out);
  return out;
}

VolForecastPath forecast_mobile(Family family, int p, int q, const ReturnSeries& returns,
                                std::size_t horizon, std::size_t refit_every, std::uint64_t seed,
                                const FitOptions& options) {
  const FitResult initial = fit(family, p, q, returns, options);
  const Refitter refit = [&](const ReturnSeries& data, const FitResult& previous) {
    FitOptions warm = options;
    warm.warm_starts.push_back(previous.model);
    return fit(family, p, q, data, warm);
  };
  return forecast_mobile(initial, returns, horizon, refit_every, seed, refit);
}

}  // namespace volkit
