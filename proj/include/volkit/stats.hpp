#pragma once

#include <cstddef>
#include <vector>

#include "volkit/series.hpp"

namespace volkit {

/// Moment summary. Skewness and kurtosis use biased central moments
/// m_k = sum (x - mean)^k / n: skew = m3 / m2^1.5, kurt = m4 / m2^2 (normal = 3).
/// A zero-variance sample reports skewness 0 and kurtosis 3.
struct SummaryStats {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  double st_deviation = 0.0;  // sample, N - 1
  double skewness = 0.0;
  double kurtosis = 3.0;
  double min = 0.0;
  double max = 0.0;
  double jarque_bera = 0.0;
};

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int df_or_lags = 0;
  bool reject_at_5pct = false;
};

TestResult make_test_result(double statistic, double p_value, int df_or_lags);

struct VolPoint {
  Date date;
  double sigma = 0.0;
};

struct VolSeries {
  std::size_t window = 0;
  std::vector<VolPoint> points;
};

struct RollingPoint {
  Date date;
  double mean = 0.0;
  double st_deviation = 0.0;
};

inline constexpr int kDefaultAdfLags = 1;
inline constexpr int kDefaultLjungBoxLags = 10;
inline constexpr int kDefaultArchLmLags = 5;
inline constexpr std::size_t kDefaultVolWindow = 30;

/// r_t = ln(p_t / p_{t-1}), dated at t.
ReturnSeries log_returns(const PriceSeries& series);

SummaryStats describe(const ReturnSeries& returns);

/// JB = n/6 (S^2 + (K - 3)^2 / 4).
double jarque_bera_statistic(std::size_t n, double skewness, double kurtosis);
TestResult jarque_bera(const ReturnSeries& returns);

/// t = mean / (s / sqrt n), Student-t(n - 1). An all-zero sample gives (0, p = 1);
/// any other zero-variance sample throws ZeroVariance.
TestResult t_test_zero_mean(const ReturnSeries& returns);

/// Augmented Dickey-Fuller with constant, no trend; statistic is the t-ratio of rho.
/// p-value interpolated in the Dickey-Fuller tau_mu table and clamped to [0.01, 0.99].
TestResult adf_test(const ReturnSeries& series, int lags = kDefaultAdfLags);
/// Finite-sample p-value of an ADF statistic computed on `nobs` regression rows.
double adf_p_value(double statistic, std::size_t nobs);

/// Engle's LM test: nobs * R^2 of r_t^2 on a constant and q lags of r^2.
TestResult arch_lm_test(const ReturnSeries& returns, int q = kDefaultArchLmLags);

/// Ljung-Box Q on squared returns.
TestResult ljung_box_squared(const ReturnSeries& returns, int lags = kDefaultLjungBoxLags);

/// Trailing windows including the stamped date; first point at the window-th observation.
std::vector<RollingPoint> rolling_moments(const ReturnSeries& returns, std::size_t window);

VolSeries historical_volatility(const ReturnSeries& returns,
                                std::size_t window = kDefaultVolWindow);

/// Square-root-of-time rule.
double scale_volatility(double daily_sigma, double horizon_days);

}  // namespace volkit
