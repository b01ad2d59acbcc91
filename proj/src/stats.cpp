#include "volkit/stats.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "volkit/distributions.hpp"
#include "volkit/error.hpp"

namespace volkit {

TestResult make_test_result(double statistic, double p_value, int df_or_lags) {
  p_value = std::clamp(p_value, 0.0, 1.0);
  return {statistic, p_value, df_or_lags, p_value < 0.05};
}

ReturnSeries log_returns(const PriceSeries& series) {
  const auto p = series.prices();
  std::vector<Date> dates(series.dates().begin() + 1, series.dates().end());
  std::vector<double> r(p.size() - 1);
  for (std::size_t t = 1; t < p.size(); ++t) r[t - 1] = std::log(p[t] / p[t - 1]);
  return ReturnSeries(std::move(dates), std::move(r));
}

namespace {

void require(std::size_t n, std::size_t minimum, const char* what) {
  if (n < minimum) {
    fail(ErrorKind::TooFewObservations,
         std::string(what) + " needs n >= " + std::to_string(minimum) + ", got " + std::to_string(n));
  }
}

double mean_of(std::span<const double> x) {
  // A constant sample keeps its exact value, so its deviations are exactly zero.
  if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) return x[0];
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

/// Sample standard deviation (N - 1) with a two-pass sum.
double sd_of(std::span<const double> x, double mean) {
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

struct OlsFit {
  Eigen::VectorXd coef;
  Eigen::VectorXd se;
  double rss = 0.0;
  double tss = 0.0;
};

OlsFit ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < x.cols() || x.rows() <= x.cols()) {
    fail(ErrorKind::SingularRegression, "design matrix is rank deficient");
  }
  OlsFit fit;
  fit.coef = qr.solve(y);
  const Eigen::VectorXd resid = y - x * fit.coef;
  fit.rss = resid.squaredNorm();
  fit.tss = (y.array() - y.mean()).matrix().squaredNorm();
  const double s2 = fit.rss / static_cast<double>(x.rows() - x.cols());
  const Eigen::MatrixXd xtx_inv =
      (x.transpose() * x).ldlt().solve(Eigen::MatrixXd::Identity(x.cols(), x.cols()));
  fit.se = (s2 * xtx_inv.diagonal().array()).sqrt();
  return fit;
}

}  // namespace

SummaryStats describe(const ReturnSeries& returns) {
  const auto x = returns.values();
  const std::size_t n = x.size();
  require(n, 2, "describe");
  SummaryStats s;
  s.n = n;
  s.mean = mean_of(x);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - s.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  s.st_deviation = std::sqrt(m2 / static_cast<double>(n - 1));
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  if (m2 > 0.0) {
    s.skewness = m3 / std::pow(m2, 1.5);
    s.kurtosis = m4 / (m2 * m2);
  }
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  s.min = sorted.front();
  s.max = sorted.back();
  s.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  s.jarque_bera = jarque_bera_statistic(n, s.skewness, s.kurtosis);
  return s;
}

double jarque_bera_statistic(std::size_t n, double skewness, double kurtosis) {
  const double excess = kurtosis - 3.0;
  return static_cast<double>(n) / 6.0 * (skewness * skewness + 0.25 * excess * excess);
}

TestResult jarque_bera(const ReturnSeries& returns) {
  require(returns.size(), 4, "jarque_bera");
  const SummaryStats s = describe(returns);
  return make_test_result(s.jarque_bera, chi_square_sf(s.jarque_bera, 2.0), 2);
}

TestResult t_test_zero_mean(const ReturnSeries& returns) {
  const auto x = returns.values();
  require(x.size(), 2, "t_test_zero_mean");
  const double mean = mean_of(x);
  const double sd = sd_of(x, mean);
  const int df = static_cast<int>(x.size()) - 1;
  if (sd == 0.0) {
    if (mean == 0.0) return make_test_result(0.0, 1.0, df);
    fail(ErrorKind::ZeroVariance, "constant non-zero sample");
  }
  const double t = mean / (sd / std::sqrt(static_cast<double>(x.size())));
  return make_test_result(t, student_t_two_sided(t, df), df);
}

namespace {

// Dickey-Fuller tau_mu (constant, no trend) quantiles by sample size.
constexpr std::array<double, 8> kAdfProbs{0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99};
constexpr std::array<double, 6> kAdfSizes{25, 50, 100, 250, 500, 0 /* infinity */};
constexpr std::array<std::array<double, 8>, 6> kAdfTable{{
    {-3.75, -3.33, -3.00, -2.63, -0.37, 0.00, 0.34, 0.72},
    {-3.58, -3.22, -2.93, -2.60, -0.40, -0.03, 0.29, 0.66},
    {-3.51, -3.17, -2.89, -2.58, -0.42, -0.05, 0.26, 0.63},
    {-3.46, -3.14, -2.88, -2.57, -0.42, -0.06, 0.24, 0.62},
    {-3.44, -3.13, -2.87, -2.57, -0.43, -0.07, 0.24, 0.61},
    {-3.43, -3.12, -2.86, -2.57, -0.44, -0.07, 0.23, 0.60},
}};

std::array<double, 8> adf_critical_values(std::size_t nobs) {
  const double inv = 1.0 / std::max<double>(static_cast<double>(nobs), kAdfSizes[0]);
  auto inv_size = [](std::size_t row) { return kAdfSizes[row] == 0 ? 0.0 : 1.0 / kAdfSizes[row]; };
  std::size_t hi = 0;  // row with the larger 1/n
  while (hi + 1 < kAdfSizes.size() && inv_size(hi + 1) >= inv) ++hi;
  std::array<double, 8> out = kAdfTable[hi];
  if (hi + 1 < kAdfSizes.size()) {
    const double a = inv_size(hi);
    const double b = inv_size(hi + 1);
    const double w = (a - inv) / (a - b);
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = (1.0 - w) * kAdfTable[hi][k] + w * kAdfTable[hi + 1][k];
    }
  }
  return out;
}

}  // namespace

double adf_p_value(double statistic, std::size_t nobs) {
  const auto cv = adf_critical_values(nobs);
  if (statistic <= cv.front()) return kAdfProbs.front();
  if (statistic >= cv.back()) return kAdfProbs.back();
  std::size_t k = 0;
  while (statistic > cv[k + 1]) ++k;
  const double w = (statistic - cv[k]) / (cv[k + 1] - cv[k]);
  return kAdfProbs[k] + w * (kAdfProbs[k + 1] - kAdfProbs[k]);
}

TestResult adf_test(const ReturnSeries& series, int lags) {
  if (lags < 0) fail(ErrorKind::InvalidSpec, "lags must be >= 0");
  const auto x = series.values();
  const std::size_t n = x.size();
  require(n, static_cast<std::size_t>(lags) + 10, "adf_test");
  const std::size_t nobs = n - 1 - static_cast<std::size_t>(lags);
  const auto cols = static_cast<Eigen::Index>(2 + lags);
  Eigen::MatrixXd design(static_cast<Eigen::Index>(nobs), cols);
  Eigen::VectorXd y(static_cast<Eigen::Index>(nobs));
  for (std::size_t row = 0; row < nobs; ++row) {
    const std::size_t t = row + 1 + static_cast<std::size_t>(lags);  // Delta x_t = x_t - x_{t-1}
    const auto r = static_cast<Eigen::Index>(row);
    y(r) = x[t] - x[t - 1];
    design(r, 0) = 1.0;
    design(r, 1) = x[t - 1];
    for (int i = 1; i <= lags; ++i) design(r, 1 + i) = x[t - i] - x[t - i - 1];
  }
  const OlsFit fit = ols(design, y);
  if (!(fit.se(1) > 0.0)) fail(ErrorKind::SingularRegression, "zero residual variance");
  const double stat = fit.coef(1) / fit.se(1);
  return make_test_result(stat, adf_p_value(stat, nobs), lags);
}

TestResult arch_lm_test(const ReturnSeries& returns, int q) {
  if (q < 1) fail(ErrorKind::InvalidSpec, "q must be >= 1");
  const auto r = returns.values();
  require(r.size(), static_cast<std::size_t>(q) + 10, "arch_lm_test");
  const std::size_t nobs = r.size() - static_cast<std::size_t>(q);
  Eigen::MatrixXd design(static_cast<Eigen::Index>(nobs), q + 1);
  Eigen::VectorXd y(static_cast<Eigen::Index>(nobs));
  for (std::size_t row = 0; row < nobs; ++row) {
    const std::size_t t = row + static_cast<std::size_t>(q);
    const auto i = static_cast<Eigen::Index>(row);
    y(i) = r[t] * r[t];
    design(i, 0) = 1.0;
    for (int k = 1; k <= q; ++k) design(i, k) = r[t - k] * r[t - k];
  }
  const OlsFit fit = ols(design, y);
  if (!(fit.tss > 0.0)) fail(ErrorKind::SingularRegression, "squared returns are constant");
  const double r2 = 1.0 - fit.rss / fit.tss;
  const double stat = static_cast<double>(nobs) * r2;
  return make_test_result(stat, chi_square_sf(stat, q), q);
}

TestResult ljung_box_squared(const ReturnSeries& returns, int lags) {
  if (lags < 1) fail(ErrorKind::InvalidSpec, "lags must be >= 1");
  const auto r = returns.values();
  const std::size_t n = r.size();
  require(n, static_cast<std::size_t>(lags) + 1, "ljung_box_squared");
  std::vector<double> d(n);
  double mean = 0.0;
  for (std::size_t t = 0; t < n; ++t) mean += r[t] * r[t];
  mean /= static_cast<double>(n);
  double denom = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    d[t] = r[t] * r[t] - mean;
    denom += d[t] * d[t];
  }
  if (!(denom > 0.0)) fail(ErrorKind::ZeroVariance, "squared returns are constant");
  double q = 0.0;
  for (int k = 1; k <= lags; ++k) {
    double acov = 0.0;
    for (std::size_t t = static_cast<std::size_t>(k); t < n; ++t) acov += d[t] * d[t - k];
    const double rho = acov / denom;
    q += rho * rho / static_cast<double>(n - static_cast<std::size_t>(k));
  }
  q *= static_cast<double>(n) * static_cast<double>(n + 2);
  return make_test_result(q, chi_square_sf(q, lags), lags);
}

std::vector<RollingPoint> rolling_moments(const ReturnSeries& returns, std::size_t window) {
  if (window < 2) fail(ErrorKind::InvalidSpec, "window must be >= 2");
  const auto x = returns.values();
  if (x.size() < window) {
    fail(ErrorKind::WindowTooLarge,
         "window " + std::to_string(window) + " exceeds " + std::to_string(x.size()) + " returns");
  }
  std::vector<RollingPoint> out;
  out.reserve(x.size() - window + 1);
  for (std::size_t end = window; end <= x.size(); ++end) {
    const auto slice = x.subspan(end - window, window);
    const double m = mean_of(slice);
    out.push_back({returns.dates()[end - 1], m, sd_of(slice, m)});
  }
  return out;
}

VolSeries historical_volatility(const ReturnSeries& returns, std::size_t window) {
  VolSeries vs;
  vs.window = window;
  for (const auto& p : rolling_moments(returns, window)) vs.points.push_back({p.date, p.st_deviation});
  return vs;
}

double scale_volatility(double daily_sigma, double horizon_days) {
  if (!(daily_sigma >= 0.0) || !(horizon_days >= 1.0)) {
    fail(ErrorKind::InvalidSpec, "scale_volatility needs sigma >= 0 and horizon >= 1");
  }
  return daily_sigma * std::sqrt(horizon_days);
}

}  // namespace volkit
