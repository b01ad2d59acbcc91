#pragma once

#include <cstdint>
#include <iosfwd>

#include "volkit/garch.hpp"
#include "volkit/series.hpp"

namespace volkit {

/// Parses `date,price` CSV. Rows are sorted by date; errors name the offending line.
PriceSeries load_price_series(std::istream& in);
/// Parses `quote_date,expiry_date,type,strike,bid,ask,open_interest` CSV.
OptionChain load_option_chain(std::istream& in);

/// Writers emit the loader formats with shortest round-trip decimals.
void write_price_series(std::ostream& out, const PriceSeries& series);
void write_option_chain(std::ostream& out, const OptionChain& chain);

/// Prices dated in [start, end], both inclusive. Throws EmptyWindow below two points.
PriceSeries slice_window(const PriceSeries& series, Date start, Date end);

/// Synthetic daily prices: start_price * exp(cumulative simulated log returns).
/// The first price is dated `start` and equals `start_price`; returns are
/// formed inside the generated window, so n prices yield n - 1 returns.
PriceSeries generate_fixture(const GarchModel& model, std::size_t n, std::uint64_t seed,
                             double start_price, Date start = make_date(2018, 1, 1));

}  // namespace volkit
