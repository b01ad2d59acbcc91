#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>

#include "volkit/error.hpp"
#include "volkit/options.hpp"

using namespace volkit;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

double big_cdf(double x) { return static_cast<double>(Big(0.5) * erfc(-Big(x) / sqrt(Big(2)))); }

// Discounted risk-neutral expectation of the call payoff, integrated over the normal density.
double quadrature_call(double s, double k, double r, double tau, double sigma) {
  const double vol = sigma * std::sqrt(tau);
  const double z0 = (std::log(k / s) - (r - 0.5 * sigma * sigma) * tau) / vol;
  auto payoff = [&](double z) {
    const double st = s * std::exp((r - 0.5 * sigma * sigma) * tau + vol * z);
    return (st - k) * std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  };
  return std::exp(-r * tau) *
         boost::math::quadrature::gauss_kronrod<double, 61>::integrate(payoff, z0, z0 + 40.0, 15, 1e-14);
}

PricingInputs inputs(double s, double k, double r, double tau, double sigma = 0.0) {
  PricingInputs in;
  in.spot = s;
  in.strike = k;
  in.rate = r;
  in.tau = tau;
  in.sigma = sigma;
  return in;
}

}  // namespace

TEST(NormCdf, Examples) {
  EXPECT_EQ(norm_cdf(0.0), 0.5);
  for (double x : {0.5, 1.0, 2.0, 5.0}) EXPECT_NEAR(norm_cdf(x) + norm_cdf(-x), 1.0, 1e-15);
  EXPECT_NEAR(norm_cdf(1.96), 0.9750021, 1e-7);
  EXPECT_NEAR(norm_cdf(1.96), big_cdf(1.96), 1e-15);
}

TEST(NormCdf, AgainstExtendedPrecision) {
  for (double x = -12.0; x <= 12.0; x += 0.037) EXPECT_NEAR(norm_cdf(x), big_cdf(x), 1e-12) << x;
}

TEST(BsPrice, Examples) {
  EXPECT_NEAR(bs_price(inputs(100, 100, 0, 1, 0.2), OptionKind::call),
              bs_price(inputs(100, 100, 0, 1, 0.2), OptionKind::put), 1e-12);
  const double c = bs_price(inputs(100, 100, 0.05, 1, 0.2), OptionKind::call);
  EXPECT_NEAR(c, 10.4506, 1e-4);
  EXPECT_NEAR(c, quadrature_call(100, 100, 0.05, 1, 0.2), 1e-9);
  EXPECT_EQ(bs_price(inputs(110, 100, 0, 0, 0.3), OptionKind::call), 10.0);
  EXPECT_EQ(bs_price(inputs(110, 100, 0, 0, 0.3), OptionKind::put), 0.0);
  EXPECT_NEAR(bs_price(inputs(110, 100, 0.05, 1, 0), OptionKind::call), 110 - 100 * std::exp(-0.05), 1e-12);
  EXPECT_EQ(bs_price(inputs(110, 100, 0.05, 1, 0), OptionKind::put), 0.0);
}

TEST(BsPrice, MatchesQuadratureAcrossGrid) {
  for (double m : {0.5, 0.8, 1.0, 1.3, 2.0}) {
    for (double tau : {0.1, 0.5, 2.0}) {
      for (double sigma : {0.1, 0.7, 1.5}) {
        EXPECT_NEAR(bs_price(inputs(100, 100 / m, 0.03, tau, sigma), OptionKind::call),
                    quadrature_call(100, 100 / m, 0.03, tau, sigma), 1e-8);
      }
    }
  }
}

TEST(BsPrice, MonotoneInSigmaAndBounded) {
  for (double m : {0.3, 0.8, 1.0, 1.25, 3.0}) {
    for (double tau : {7 / 365.0, 0.5, 2.0}) {
      const auto base = inputs(100, 100 / m, 0.02, tau);
      double previous = -1.0;
      for (double sigma = 0.05; sigma <= 3.0; sigma += 0.05) {
        auto in = base;
        in.sigma = sigma;
        const double c = bs_price(in, OptionKind::call);
        const double lower = std::max(in.spot - in.strike * std::exp(-in.rate * tau), 0.0);
        EXPECT_GE(c, lower);
        EXPECT_LT(c, in.spot);
        // Strict wherever the time value is representable; never decreasing anywhere.
        if (c - lower > 1e-9 * in.spot) EXPECT_GT(c, previous);
        EXPECT_GE(c, previous);
        previous = c;
        const double p = bs_price(in, OptionKind::put);
        EXPECT_LE(std::abs(c - p - in.spot + in.strike * std::exp(-in.rate * tau)), 1e-10 * in.spot);
      }
    }
  }
}

TEST(BsPrice, InvalidInputs) {
  EXPECT_THROW(bs_price(inputs(0, 100, 0, 1, 0.2), OptionKind::call), Error);
  EXPECT_THROW(bs_price(inputs(100, -1, 0, 1, 0.2), OptionKind::call), Error);
  EXPECT_THROW(bs_price(inputs(100, 100, 0, -1, 0.2), OptionKind::call), Error);
  EXPECT_THROW(bs_price(inputs(100, 100, 0, 1, -0.2), OptionKind::call), Error);
  EXPECT_THROW(bs_price(inputs(100, 100, 0, 1, NAN), OptionKind::call), Error);
}

TEST(ImpliedVol, RoundTripExamples) {
  for (double m : {0.5, 1.0, 2.0}) {
    for (double tau : {30 / 365.0, 180 / 365.0}) {
      for (OptionKind kind : {OptionKind::call, OptionKind::put}) {
        const auto in = inputs(100 * m, 100, 0, tau, 0.8);
        const auto iv = implied_vol(bs_price(in, kind), in, kind);
        ASSERT_EQ(iv.status, IvStatus::ok);
        EXPECT_NEAR(*iv.sigma, 0.8, 1e-7);
      }
    }
  }
}

TEST(ImpliedVol, BoundViolations) {
  const auto in = inputs(120, 100, 0.05, 0.5);
  const double intrinsic = 120 - 100 * std::exp(-0.025);
  auto below = implied_vol(intrinsic - 0.01, in, OptionKind::call);
  EXPECT_EQ(below.status, IvStatus::below_intrinsic);
  EXPECT_FALSE(below.sigma.has_value());
  EXPECT_EQ(implied_vol(120.0, in, OptionKind::call).status, IvStatus::above_upper_bound);
  EXPECT_EQ(implied_vol(150.0, in, OptionKind::call).status, IvStatus::above_upper_bound);
  EXPECT_EQ(implied_vol(100 * std::exp(-0.025), in, OptionKind::put).status, IvStatus::above_upper_bound);
  // Above every price reachable inside the bracket but below the no-arbitrage cap.
  const auto otm = inputs(100, 100, 0, 1e-3);
  EXPECT_EQ(implied_vol(99.0, otm, OptionKind::call).status, IvStatus::no_convergence);
}

TEST(ImpliedVol, StatusAndSigmaAgree) {
  for (double price = 0.0; price < 130.0; price += 0.73) {
    for (OptionKind kind : {OptionKind::call, OptionKind::put}) {
      const auto r = implied_vol(price, inputs(120, 100, 0.05, 0.5), kind);
      EXPECT_EQ(r.sigma.has_value(), r.status == IvStatus::ok);
      if (r.sigma) {
        EXPECT_GE(*r.sigma, kSigmaMin);
        EXPECT_LE(*r.sigma, kSigmaMax);
      }
    }
  }
}

TEST(ParityCounterpart, Examples) {
  const auto in = inputs(100, 100, 0.05, 1);
  EXPECT_NEAR(parity_counterpart(10.4506, in, OptionKind::call), 5.5735, 1e-4);
  EXPECT_EQ(parity_counterpart(7.0, inputs(100, 100, 0, 1), OptionKind::call), 7.0);
  for (double c : {0.0, 1.5, 10.4506, 42.0}) {
    const double p = parity_counterpart(c, in, OptionKind::call);
    EXPECT_NEAR(parity_counterpart(p, in, OptionKind::put), c, 1e-12);
  }
}

TEST(YearFraction, CalendarDaysOver365) {
  EXPECT_EQ(year_fraction(make_date(2019, 7, 31), make_date(2020, 7, 30)), 1.0);
  EXPECT_EQ(year_fraction(make_date(2019, 7, 31), make_date(2019, 8, 30)), 30.0 / 365.0);
}
