#include "volkit/options.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "volkit/error.hpp"

namespace volkit {

std::string_view to_string(IvStatus s) {
  switch (s) {
    case IvStatus::ok: return "ok";
    case IvStatus::below_intrinsic: return "below_intrinsic";
    case IvStatus::above_upper_bound: return "above_upper_bound";
    case IvStatus::no_convergence: return "no_convergence";
  }
  return "unknown";
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

void validate(const PricingInputs& in) {
  const bool finite = std::isfinite(in.spot) && std::isfinite(in.strike) &&
                      std::isfinite(in.rate) && std::isfinite(in.tau) && std::isfinite(in.sigma);
  if (!finite || in.spot <= 0.0 || in.strike <= 0.0 || in.tau < 0.0 || in.sigma < 0.0) {
    fail(ErrorKind::InvalidSpec, "pricing inputs need S > 0, K > 0, tau >= 0, sigma >= 0");
  }
}

double bs_price(const PricingInputs& in, OptionKind kind) {
  validate(in);
  const double sign = kind == OptionKind::call ? 1.0 : -1.0;
  if (in.tau == 0.0) return std::max(sign * (in.spot - in.strike), 0.0);
  const double disc_k = in.strike * std::exp(-in.rate * in.tau);
  if (in.sigma == 0.0) return std::max(sign * (in.spot - disc_k), 0.0);
  const double vol = in.sigma * std::sqrt(in.tau);
  const double d1 = (std::log(in.spot / in.strike) + (in.rate + 0.5 * in.sigma * in.sigma) * in.tau) / vol;
  const double d2 = d1 - vol;
  // The in-the-money side is the forward intrinsic plus the out-of-the-money counterpart, so
  // tiny time values are not lost to cancellation and the price stays monotone in sigma.
  const double forward_gap = sign * (in.spot - disc_k);
  const bool call_otm = in.spot <= disc_k;
  const double otm = call_otm ? in.spot * norm_cdf(d1) - disc_k * norm_cdf(d2)
                              : disc_k * norm_cdf(-d2) - in.spot * norm_cdf(-d1);
  const bool same_side = (kind == OptionKind::call) == call_otm;
  const double price = same_side ? std::max(otm, 0.0) : forward_gap + std::max(otm, 0.0);
  return std::max(price, std::max(forward_gap, 0.0));
}

double year_fraction(Date from, Date to) {
  return static_cast<double>((to - from).count()) / 365.0;
}

IvResult implied_vol(double market_price, const PricingInputs& in, OptionKind kind) {
  PricingInputs x = in;
  x.sigma = 0.0;
  validate(x);
  if (!std::isfinite(market_price) || market_price < 0.0) {
    fail(ErrorKind::InvalidSpec, "market price must be finite and >= 0");
  }
  const double disc_k = x.strike * std::exp(-x.rate * x.tau);
  const double sign = kind == OptionKind::call ? 1.0 : -1.0;
  const double lower = std::max(sign * (x.spot - (x.tau > 0.0 ? disc_k : x.strike)), 0.0);
  const double upper = kind == OptionKind::call ? x.spot : disc_k;
  if (market_price < lower) return {IvStatus::below_intrinsic, std::nullopt};
  if (market_price >= upper) return {IvStatus::above_upper_bound, std::nullopt};
  if (x.tau == 0.0) return {IvStatus::no_convergence, std::nullopt};

  auto f = [&](double s) {
    x.sigma = s;
    return bs_price(x, kind) - market_price;
  };
  const double f_lo = f(kSigmaMin);
  const double f_hi = f(kSigmaMax);
  if (!(f_lo < 0.0 && f_hi > 0.0)) return {IvStatus::no_convergence, std::nullopt};

  std::uintmax_t max_iter = 200;
  auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-10; };
  try {
    const auto [a, b] =
        boost::math::tools::toms748_solve(f, kSigmaMin, kSigmaMax, f_lo, f_hi, tol, max_iter);
    if (!tol(a, b) && f(0.5 * (a + b)) != 0.0) return {IvStatus::no_convergence, std::nullopt};
    return {IvStatus::ok, std::clamp(0.5 * (a + b), kSigmaMin, kSigmaMax)};
  } catch (const std::exception&) {
    return {IvStatus::no_convergence, std::nullopt};
  }
}

double parity_counterpart(double price, const PricingInputs& in, OptionKind kind) {
  validate(in);
  const double forward_gap = in.spot - in.strike * std::exp(-in.rate * in.tau);
  return kind == OptionKind::call ? price - forward_gap : price + forward_gap;
}

}  // namespace volkit
