#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "volkit/options.hpp"
#include "volkit/series.hpp"

namespace volkit {

enum class QuoteSide { bid, ask, mid };
std::string_view to_string(QuoteSide side);
QuoteSide parse_side(std::string_view text);

struct SmilePoint {
  double strike = 0.0;
  IvStatus status = IvStatus::no_convergence;
  std::optional<double> iv;  // present iff status == ok
};

struct SmileCurve {
  Date quote_date;
  Date expiry_date;
  OptionKind kind = OptionKind::call;
  QuoteSide side = QuoteSide::mid;
  std::vector<SmilePoint> points;  // strikes strictly increasing
};

/// Bid, ask and mid curves for every (expiry, kind) quoted on `quote_date`. Quotes below
/// `min_open_interest` are skipped; quotes that fail to invert stay in with their status.
std::vector<SmileCurve> compute_smiles(const OptionChain& chain, Date quote_date, double spot,
                                       double rate = kDefaultRate,
                                       std::int64_t min_open_interest = 0);

struct SpreadRow {
  Date expiry_date;
  OptionKind kind = OptionKind::call;
  double strike = 0.0;
  double spread = 0.0;
  std::int64_t open_interest = 0;
};

/// One row per quote on `quote_date`, ordered (expiry, kind, strike).
std::vector<SpreadRow> spread_report(const OptionChain& chain, Date quote_date);

enum class BucketScheme { equal_count, calendar };
std::string_view to_string(BucketScheme scheme);
BucketScheme parse_bucket_scheme(std::string_view text);

struct SurfaceOptions {
  double rate = kDefaultRate;
  int maturity_days = 180;
  int maturity_tolerance_days = 45;
  int buckets = 38;
  double strike_round = 1000.0;
  std::int64_t min_open_interest = 0;
  BucketScheme scheme = BucketScheme::equal_count;
};

struct TimeBucket {
  Date start;
  Date end;
};

struct VolSurface {
  std::vector<TimeBucket> time_buckets;
  std::vector<double> strikes;                        // rounded, ascending
  std::vector<std::vector<std::optional<double>>> cells;  // [bucket][strike]
  std::vector<std::vector<int>> counts;               // inversions averaged per cell

  [[nodiscard]] std::size_t missing_cells() const;
};

/// Round half up to the nearest multiple of `step`.
double round_strike(double strike, double step);

/// Quote dates split into `buckets` contiguous periods; quotes kept when their days to
/// expiry lie within the maturity band; each cell is the mean of the successful
/// inversions of {call, put} x {bid, ask} at that rounded strike.
VolSurface build_temporal_surface(const OptionChain& chain, const std::map<Date, double>& spots,
                                  const SurfaceOptions& options = {});

struct SyntheticChainSpec {
  Date start;
  int days = 60;
  double spot = 10000.0;
  double spot_volatility = 0.0;  // daily log-move scale of the spot path
  double sigma = 0.7;
  double rate = kDefaultRate;
  std::vector<int> expiry_offsets{30, 90, 180};
  std::vector<double> moneyness{0.5, 0.75, 0.9, 1.0, 1.1, 1.25, 1.5, 2.0};  // K / S
  double strike_step = 500.0;
  double relative_half_spread = 0.0;
  std::int64_t open_interest = 100;
  std::uint64_t seed = 42;
};

/// Chain priced from a flat Black-Scholes volatility, with spots stored as the underlying.
OptionChain synthetic_chain(const SyntheticChainSpec& spec);

}  // namespace volkit
