#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "volkit/date.hpp"

namespace volkit {

/// Daily close prices in USD. Dates strictly increasing, prices > 0, length >= 2.
class PriceSeries {
 public:
  PriceSeries(std::vector<Date> dates, std::vector<double> prices);

  [[nodiscard]] std::size_t size() const noexcept { return prices_.size(); }
  [[nodiscard]] std::span<const Date> dates() const noexcept { return dates_; }
  [[nodiscard]] std::span<const double> prices() const noexcept { return prices_; }
  [[nodiscard]] Date first_date() const { return dates_.front(); }
  [[nodiscard]] Date last_date() const { return dates_.back(); }

  bool operator==(const PriceSeries&) const = default;

 private:
  std::vector<Date> dates_;
  std::vector<double> prices_;
};

/// Dated log returns; each return carries the date of the later price.
class ReturnSeries {
 public:
  ReturnSeries(std::vector<Date> dates, std::vector<double> values);

  /// Consecutive daily dates starting at `start`; convenient for simulated data.
  static ReturnSeries from_values(std::vector<double> values,
                                  Date start = make_date(2000, 1, 1));

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const Date> dates() const noexcept { return dates_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

  /// Copy with extra observations appended (dates must continue increasing).
  [[nodiscard]] ReturnSeries appended(std::span<const Date> dates,
                                      std::span<const double> values) const;

  bool operator==(const ReturnSeries&) const = default;

 private:
  std::vector<Date> dates_;
  std::vector<double> values_;
};

enum class OptionKind { call, put };

std::string_view to_string(OptionKind kind);

struct OptionQuote {
  Date quote_date;
  Date expiry_date;
  OptionKind kind = OptionKind::call;
  double strike = 0.0;
  double bid = 0.0;
  double ask = 0.0;
  std::int64_t open_interest = 0;

  bool operator==(const OptionQuote&) const = default;
};

/// Throws the matching ErrorKind if a quote breaks an invariant.
void validate(const OptionQuote& quote);

/// Option quotes for any number of days; keys (quote_date, expiry, kind, strike) unique.
class OptionChain {
 public:
  explicit OptionChain(std::vector<OptionQuote> quotes, std::map<Date, double> underlying = {});

  [[nodiscard]] std::span<const OptionQuote> quotes() const noexcept { return quotes_; }
  [[nodiscard]] const std::map<Date, double>& underlying() const noexcept { return underlying_; }
  [[nodiscard]] std::vector<OptionQuote> quotes_on(Date quote_date) const;
  /// Distinct quote dates, ascending.
  [[nodiscard]] std::vector<Date> quote_dates() const;

  bool operator==(const OptionChain&) const = default;

 private:
  std::vector<OptionQuote> quotes_;
  std::map<Date, double> underlying_;
};

}  // namespace volkit
