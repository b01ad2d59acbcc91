#pragma once

#include <optional>
#include <string_view>

#include "volkit/series.hpp"

namespace volkit {

inline constexpr double kDefaultRate = 0.0;
inline constexpr double kSigmaMin = 1e-4;
inline constexpr double kSigmaMax = 10.0;

struct PricingInputs {
  double spot = 0.0;
  double strike = 0.0;
  double rate = kDefaultRate;
  double tau = 0.0;  // year fraction, calendar days / 365
  double sigma = 0.0;
};

enum class IvStatus { ok, below_intrinsic, above_upper_bound, no_convergence };
std::string_view to_string(IvStatus s);

struct IvResult {
  IvStatus status = IvStatus::no_convergence;
  std::optional<double> sigma;  // present iff status == ok
};

double norm_cdf(double x);

/// Throws InvalidSpec on S <= 0, K <= 0, tau < 0, sigma < 0 or non-finite input.
void validate(const PricingInputs& in);

/// European Black-Scholes price, no dividends. tau = 0 gives the intrinsic value,
/// sigma = 0 the discounted intrinsic value.
double bs_price(const PricingInputs& in, OptionKind kind);

/// Year fraction between two dates on a 365-day count.
double year_fraction(Date from, Date to);

/// Solves bs_price(sigma) = market_price on [kSigmaMin, kSigmaMax]. `in.sigma` is ignored.
IvResult implied_vol(double market_price, const PricingInputs& in, OptionKind kind);

/// Price of the opposite kind from C - P = S - K e^{-r tau}.
double parity_counterpart(double price, const PricingInputs& in, OptionKind kind);

}  // namespace volkit
