#include "volkit/series.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "volkit/error.hpp"

namespace volkit {

PriceSeries::PriceSeries(std::vector<Date> dates, std::vector<double> prices)
    : dates_(std::move(dates)), prices_(std::move(prices)) {
  if (dates_.size() != prices_.size()) {
    fail(ErrorKind::InvalidSpec, "date and price counts differ");
  }
  if (prices_.size() < 2) fail(ErrorKind::TooFewObservations, "price series needs >= 2 points");
  for (std::size_t i = 0; i < prices_.size(); ++i) {
    if (!(prices_[i] > 0.0) || !std::isfinite(prices_[i])) {
      fail(ErrorKind::NonPositivePrice, "price on " + format_date(dates_[i]) + " is not positive");
    }
    if (i > 0 && dates_[i] <= dates_[i - 1]) {
      fail(ErrorKind::DuplicateDate, "dates not strictly increasing at " + format_date(dates_[i]));
    }
  }
}

ReturnSeries::ReturnSeries(std::vector<Date> dates, std::vector<double> values)
    : dates_(std::move(dates)), values_(std::move(values)) {
  if (dates_.size() != values_.size()) fail(ErrorKind::InvalidSpec, "date and value counts differ");
  if (values_.empty()) fail(ErrorKind::TooFewObservations, "return series is empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      fail(ErrorKind::InvalidSpec, "non-finite return on " + format_date(dates_[i]));
    }
    if (i > 0 && dates_[i] <= dates_[i - 1]) {
      fail(ErrorKind::DuplicateDate, "dates not strictly increasing at " + format_date(dates_[i]));
    }
  }
}

ReturnSeries ReturnSeries::from_values(std::vector<double> values, Date start) {
  std::vector<Date> dates(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) dates[i] = start + std::chrono::days{i};
  return ReturnSeries(std::move(dates), std::move(values));
}

ReturnSeries ReturnSeries::appended(std::span<const Date> dates,
                                    std::span<const double> values) const {
  std::vector<Date> d = dates_;
  std::vector<double> v = values_;
  d.insert(d.end(), dates.begin(), dates.end());
  v.insert(v.end(), values.begin(), values.end());
  return ReturnSeries(std::move(d), std::move(v));
}

std::string_view to_string(OptionKind kind) { return kind == OptionKind::call ? "call" : "put"; }

void validate(const OptionQuote& q) {
  if (q.expiry_date < q.quote_date) {
    fail(ErrorKind::ExpiryBeforeQuote,
         "expiry " + format_date(q.expiry_date) + " before quote " + format_date(q.quote_date));
  }
  if (!(q.strike > 0.0) || !std::isfinite(q.strike)) fail(ErrorKind::MalformedRow, "strike must be > 0");
  if (!(q.bid >= 0.0) || !std::isfinite(q.bid) || !std::isfinite(q.ask)) {
    fail(ErrorKind::MalformedRow, "bid must be a non-negative number");
  }
  if (q.bid > q.ask) fail(ErrorKind::CrossedQuote, "bid exceeds ask");
  if (q.open_interest < 0) fail(ErrorKind::NegativeOpenInterest, "open interest is negative");
}

OptionChain::OptionChain(std::vector<OptionQuote> quotes, std::map<Date, double> underlying)
    : quotes_(std::move(quotes)), underlying_(std::move(underlying)) {
  using Key = std::tuple<Date, Date, OptionKind, double>;
  std::set<Key> seen;
  for (const auto& q : quotes_) {
    validate(q);
    if (!seen.emplace(q.quote_date, q.expiry_date, q.kind, q.strike).second) {
      fail(ErrorKind::DuplicateQuote, "duplicate quote " + format_date(q.quote_date) + " " +
                                          format_date(q.expiry_date) + " " +
                                          std::string(to_string(q.kind)));
    }
  }
  for (const auto& [date, spot] : underlying_) {
    if (!(spot > 0.0)) fail(ErrorKind::NonPositivePrice, "spot on " + format_date(date));
  }
}

std::vector<OptionQuote> OptionChain::quotes_on(Date quote_date) const {
  std::vector<OptionQuote> out;
  std::copy_if(quotes_.begin(), quotes_.end(), std::back_inserter(out),
               [&](const OptionQuote& q) { return q.quote_date == quote_date; });
  return out;
}

std::vector<Date> OptionChain::quote_dates() const {
  std::set<Date> dates;
  for (const auto& q : quotes_) dates.insert(q.quote_date);
  return {dates.begin(), dates.end()};
}

}  // namespace volkit
