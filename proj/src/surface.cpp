#include "volkit/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

#include "volkit/error.hpp"

namespace volkit {

std::string_view to_string(QuoteSide side) {
  switch (side) {
    case QuoteSide::bid: return "bid";
    case QuoteSide::ask: return "ask";
    case QuoteSide::mid: return "mid";
  }
  return "mid";
}

QuoteSide parse_side(std::string_view text) {
  if (text == "bid") return QuoteSide::bid;
  if (text == "ask") return QuoteSide::ask;
  if (text == "mid") return QuoteSide::mid;
  fail(ErrorKind::InvalidSpec, "unknown side '" + std::string(text) + "'");
}

std::string_view to_string(BucketScheme scheme) {
  return scheme == BucketScheme::equal_count ? "equal_count" : "calendar";
}

BucketScheme parse_bucket_scheme(std::string_view text) {
  if (text == "equal_count") return BucketScheme::equal_count;
  if (text == "calendar") return BucketScheme::calendar;
  fail(ErrorKind::InvalidSpec, "unknown bucket scheme '" + std::string(text) + "'");
}

namespace {

double side_price(const OptionQuote& q, QuoteSide side) {
  switch (side) {
    case QuoteSide::bid: return q.bid;
    case QuoteSide::ask: return q.ask;
    case QuoteSide::mid: return 0.5 * (q.bid + q.ask);
  }
  return q.bid;
}

std::vector<OptionQuote> sorted_quotes_on(const OptionChain& chain, Date date) {
  auto quotes = chain.quotes_on(date);
  if (quotes.empty()) fail(ErrorKind::NoQuotesForDate, "no quotes on " + format_date(date));
  std::sort(quotes.begin(), quotes.end(), [](const OptionQuote& a, const OptionQuote& b) {
    return std::tie(a.expiry_date, a.kind, a.strike) < std::tie(b.expiry_date, b.kind, b.strike);
  });
  return quotes;
}

}  // namespace

std::vector<SmileCurve> compute_smiles(const OptionChain& chain, Date quote_date, double spot,
                                       double rate, std::int64_t min_open_interest) {
  if (!(spot > 0.0) || !std::isfinite(spot)) fail(ErrorKind::InvalidSpec, "spot must be > 0");
  const auto quotes = sorted_quotes_on(chain, quote_date);
  std::vector<SmileCurve> curves;
  for (std::size_t i = 0; i < quotes.size();) {
    std::size_t j = i;
    while (j < quotes.size() && quotes[j].expiry_date == quotes[i].expiry_date &&
           quotes[j].kind == quotes[i].kind) {
      ++j;
    }
    for (QuoteSide side : {QuoteSide::bid, QuoteSide::ask, QuoteSide::mid}) {
      SmileCurve curve{quote_date, quotes[i].expiry_date, quotes[i].kind, side, {}};
      for (std::size_t k = i; k < j; ++k) {
        const auto& q = quotes[k];
        if (q.open_interest < min_open_interest) continue;
        PricingInputs in{spot, q.strike, rate, year_fraction(q.quote_date, q.expiry_date), 0.0};
        const IvResult r = implied_vol(side_price(q, side), in, q.kind);
        curve.points.push_back(SmilePoint{q.strike, r.status, r.sigma});
      }
      curves.push_back(std::move(curve));
    }
    i = j;
  }
  return curves;
}

std::vector<SpreadRow> spread_report(const OptionChain& chain, Date quote_date) {
  std::vector<SpreadRow> rows;
  for (const auto& q : sorted_quotes_on(chain, quote_date)) {
    rows.push_back(SpreadRow{q.expiry_date, q.kind, q.strike, q.ask - q.bid, q.open_interest});
  }
  return rows;
}

std::size_t VolSurface::missing_cells() const {
  std::size_t missing = 0;
  for (const auto& row : cells) {
    missing += static_cast<std::size_t>(std::count(row.begin(), row.end(), std::nullopt));
  }
  return missing;
}

double round_strike(double strike, double step) {
  if (!(step > 0.0)) fail(ErrorKind::InvalidSpec, "strike rounding step must be > 0");
  return std::floor(strike / step + 0.5) * step;
}

namespace {

// Bucket index for each quote date, plus nominal bucket bounds.
std::vector<int> assign_buckets(const std::vector<Date>& dates, const SurfaceOptions& o,
                                std::vector<TimeBucket>& bounds) {
  const auto n = static_cast<int>(dates.size());
  const int b = o.buckets;
  std::vector<int> index(dates.size());
  bounds.assign(static_cast<std::size_t>(b), TimeBucket{});
  if (o.scheme == BucketScheme::equal_count) {
    const int base = n / b;
    const int extra = n % b;
    int pos = 0;
    for (int k = 0; k < b; ++k) {
      const int size = base + (k < extra ? 1 : 0);
      bounds[k] = TimeBucket{dates[pos], dates[pos + size - 1]};
      for (int i = 0; i < size; ++i) index[pos + i] = k;
      pos += size;
    }
  } else {
    const long span = (dates.back() - dates.front()).count() + 1;
    for (int k = 0; k < b; ++k) {
      const long lo = span * k / b;
      const long hi = span * (k + 1) / b - 1;
      bounds[k] = TimeBucket{dates.front() + std::chrono::days{lo}, dates.front() + std::chrono::days{hi}};
    }
    for (int i = 0; i < n; ++i) {
      const long offset = (dates[i] - dates.front()).count();
      index[i] = static_cast<int>(offset * b / span);
    }
  }
  return index;
}

}  // namespace

VolSurface build_temporal_surface(const OptionChain& chain, const std::map<Date, double>& spots,
                                  const SurfaceOptions& o) {
  if (o.buckets < 1 || o.maturity_days < 0 || o.maturity_tolerance_days < 0) {
    fail(ErrorKind::InvalidSpec, "buckets must be >= 1 and maturity settings >= 0");
  }
  const auto dates = chain.quote_dates();
  if (dates.size() < static_cast<std::size_t>(o.buckets)) {
    fail(ErrorKind::InsufficientDates, std::to_string(dates.size()) + " quote dates for " +
                                           std::to_string(o.buckets) + " buckets");
  }
  VolSurface surface;
  const auto bucket_of = assign_buckets(dates, o, surface.time_buckets);
  std::map<Date, int> date_bucket;
  for (std::size_t i = 0; i < dates.size(); ++i) date_bucket[dates[i]] = bucket_of[i];

  std::map<std::pair<int, double>, std::vector<double>> samples;
  std::set<double> strikes;
  for (const auto& q : chain.quotes()) {
    if (q.open_interest < o.min_open_interest) continue;
    const long dte = (q.expiry_date - q.quote_date).count();
    if (std::abs(dte - o.maturity_days) > o.maturity_tolerance_days) continue;
    const auto spot = spots.find(q.quote_date);
    if (spot == spots.end()) {
      fail(ErrorKind::MissingSpot, "no spot for " + format_date(q.quote_date));
    }
    const double rounded = round_strike(q.strike, o.strike_round);
    strikes.insert(rounded);
    PricingInputs in{spot->second, q.strike, o.rate, year_fraction(q.quote_date, q.expiry_date), 0.0};
    auto& cell = samples[{date_bucket.at(q.quote_date), rounded}];
    for (double price : {q.bid, q.ask}) {
      const IvResult r = implied_vol(price, in, q.kind);
      if (r.status == IvStatus::ok) cell.push_back(*r.sigma);
    }
  }

  surface.strikes.assign(strikes.begin(), strikes.end());
  const std::size_t nb = surface.time_buckets.size();
  surface.cells.assign(nb, std::vector<std::optional<double>>(surface.strikes.size()));
  surface.counts.assign(nb, std::vector<int>(surface.strikes.size(), 0));
  for (auto& [key, values] : samples) {
    if (values.empty()) continue;
    // Sorted before summing so the mean does not depend on input row order.
    std::sort(values.begin(), values.end());
    const auto s = static_cast<std::size_t>(
        std::lower_bound(surface.strikes.begin(), surface.strikes.end(), key.second) -
        surface.strikes.begin());
    const auto b = static_cast<std::size_t>(key.first);
    surface.cells[b][s] = std::accumulate(values.begin(), values.end(), 0.0) /
                          static_cast<double>(values.size());
    surface.counts[b][s] = static_cast<int>(values.size());
  }
  return surface;
}

OptionChain synthetic_chain(const SyntheticChainSpec& spec) {
  if (spec.days < 1 || !(spec.spot > 0.0) || !(spec.sigma > 0.0) || !(spec.strike_step > 0.0)) {
    fail(ErrorKind::InvalidSpec, "synthetic chain needs days >= 1, spot > 0, sigma > 0");
  }
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal;
  std::vector<OptionQuote> quotes;
  std::map<Date, double> underlying;
  double spot = spec.spot;
  for (int d = 0; d < spec.days; ++d) {
    const Date date = spec.start + std::chrono::days{d};
    if (d > 0 && spec.spot_volatility > 0.0) spot *= std::exp(spec.spot_volatility * normal(rng));
    underlying[date] = spot;
    for (int offset : spec.expiry_offsets) {
      const Date expiry = date + std::chrono::days{offset};
      std::set<double> strikes;
      for (double m : spec.moneyness) {
        strikes.insert(std::max(spec.strike_step, round_strike(spot * m, spec.strike_step)));
      }
      for (double k : strikes) {
        for (OptionKind kind : {OptionKind::call, OptionKind::put}) {
          PricingInputs in{spot, k, spec.rate, year_fraction(date, expiry), spec.sigma};
          const double price = bs_price(in, kind);
          const double half = spec.relative_half_spread * price;
          quotes.push_back(OptionQuote{date, expiry, kind, k, std::max(price - half, 0.0),
                                       price + half, spec.open_interest});
        }
      }
    }
  }
  return OptionChain(std::move(quotes), std::move(underlying));
}

}  // namespace volkit
