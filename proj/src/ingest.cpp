#include "volkit/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "volkit/error.hpp"

namespace volkit {

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    out.push_back(trim(line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string at_line(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  fail(ErrorKind::MalformedRow, at_line(line, what));
}

double parse_decimal(std::string_view field, std::size_t line, const char* name) {
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  // only plain base-10 decimals: digits, one '.', optional leading '-', optional exponent
  const bool shape_ok = !field.empty() && std::all_of(first, last, [](char c) {
    return (c >= '0' && c <= '9') || c == '.' || c == '-' || c == 'e' || c == 'E' || c == '+';
  });
  const auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
  if (!shape_ok || ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    malformed(line, std::string(name) + " '" + std::string(field) + "' is not a decimal");
  }
  return value;
}

Date parse_day(std::string_view field, std::size_t line, const char* name) {
  const auto d = parse_date(field);
  if (!d) malformed(line, std::string(name) + " '" + std::string(field) + "' is not YYYY-MM-DD");
  return *d;
}

/// Line-numbered rows; string_views point into `lines`.
struct CsvTable {
  std::vector<std::pair<std::size_t, std::string>> lines;
};

CsvTable read_table(std::istream& in, std::string_view expected_header) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (!have_header) {
      std::string_view header = trim(line);
      if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
      if (header != expected_header) {
        malformed(line_no, "expected header '" + std::string(expected_header) + "'");
      }
      have_header = true;
      continue;
    }
    table.lines.emplace_back(line_no, line);
  }
  if (!have_header) malformed(line_no + 1, "missing header '" + std::string(expected_header) + "'");
  return table;
}

void write_decimal(std::ostream& out, double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  out.write(buf, ptr - buf);
}

}  // namespace

PriceSeries load_price_series(std::istream& in) {
  const CsvTable table = read_table(in, "date,price");
  struct Parsed {
    std::size_t line;
    Date date;
    double price;
  };
  std::vector<Parsed> parsed;
  parsed.reserve(table.lines.size());
  for (const auto& [line_no, text] : table.lines) {
    const auto fields = split(text);
    if (fields.size() != 2) malformed(line_no, "expected 2 fields, got " + std::to_string(fields.size()));
    const Date d = parse_day(fields[0], line_no, "date");
    const double price = parse_decimal(fields[1], line_no, "price");
    if (!(price > 0.0)) fail(ErrorKind::NonPositivePrice, at_line(line_no, "price must be > 0"));
    parsed.push_back({line_no, d, price});
  }
  std::stable_sort(parsed.begin(), parsed.end(),
                   [](const Parsed& a, const Parsed& b) { return a.date < b.date; });
  for (std::size_t i = 1; i < parsed.size(); ++i) {
    if (parsed[i].date == parsed[i - 1].date) {
      const std::size_t line = std::max(parsed[i].line, parsed[i - 1].line);
      fail(ErrorKind::DuplicateDate, at_line(line, "date " + format_date(parsed[i].date) + " repeated"));
    }
  }
  if (parsed.size() < 2) fail(ErrorKind::TooFewObservations, "price file needs at least 2 rows");
  std::vector<Date> dates;
  std::vector<double> prices;
  for (const auto& p : parsed) {
    dates.push_back(p.date);
    prices.push_back(p.price);
  }
  return PriceSeries(std::move(dates), std::move(prices));
}

OptionChain load_option_chain(std::istream& in) {
  const CsvTable table =
      read_table(in, "quote_date,expiry_date,type,strike,bid,ask,open_interest");
  std::vector<OptionQuote> quotes;
  quotes.reserve(table.lines.size());
  for (const auto& [line_no, text] : table.lines) {
    const auto f = split(text);
    if (f.size() != 7) malformed(line_no, "expected 7 fields, got " + std::to_string(f.size()));
    OptionQuote q;
    q.quote_date = parse_day(f[0], line_no, "quote_date");
    q.expiry_date = parse_day(f[1], line_no, "expiry_date");
    std::string kind(f[2]);
    std::transform(kind.begin(), kind.end(), kind.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (kind == "call") {
      q.kind = OptionKind::call;
    } else if (kind == "put") {
      q.kind = OptionKind::put;
    } else {
      malformed(line_no, "type '" + std::string(f[2]) + "' is not call or put");
    }
    q.strike = parse_decimal(f[3], line_no, "strike");
    q.bid = parse_decimal(f[4], line_no, "bid");
    q.ask = parse_decimal(f[5], line_no, "ask");
    const auto oi = f[6];
    const auto [ptr, ec] = std::from_chars(oi.data(), oi.data() + oi.size(), q.open_interest);
    if (oi.empty() || ec != std::errc{} || ptr != oi.data() + oi.size()) {
      malformed(line_no, "open_interest '" + std::string(oi) + "' is not an integer");
    }
    if (q.bid < 0.0 || q.ask < 0.0) malformed(line_no, "bid/ask must be >= 0");
    try {
      validate(q);
    } catch (const Error& e) {
      fail(e.kind(), at_line(line_no, e.what()));
    }
    quotes.push_back(q);
  }
  try {
    return OptionChain(std::move(quotes));
  } catch (const Error& e) {
    // duplicate keys are only detectable across rows
    fail(e.kind(), e.what());
  }
}

void write_price_series(std::ostream& out, const PriceSeries& series) {
  out << "date,price\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << format_date(series.dates()[i]) << ',';
    write_decimal(out, series.prices()[i]);
    out << '\n';
  }
}

void write_option_chain(std::ostream& out, const OptionChain& chain) {
  out << "quote_date,expiry_date,type,strike,bid,ask,open_interest\n";
  for (const auto& q : chain.quotes()) {
    out << format_date(q.quote_date) << ',' << format_date(q.expiry_date) << ',' << to_string(q.kind)
        << ',';
    write_decimal(out, q.strike);
    out << ',';
    write_decimal(out, q.bid);
    out << ',';
    write_decimal(out, q.ask);
    out << ',' << q.open_interest << '\n';
  }
}

PriceSeries slice_window(const PriceSeries& series, Date start, Date end) {
  if (end < start) fail(ErrorKind::EmptyWindow, "window start is after its end");
  std::vector<Date> dates;
  std::vector<double> prices;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const Date d = series.dates()[i];
    if (d >= start && d <= end) {
      dates.push_back(d);
      prices.push_back(series.prices()[i]);
    }
  }
  if (dates.size() < 2) {
    fail(ErrorKind::EmptyWindow, format_date(start) + ".." + format_date(end) + " holds " +
                                     std::to_string(dates.size()) + " prices");
  }
  return PriceSeries(std::move(dates), std::move(prices));
}

PriceSeries generate_fixture(const GarchModel& model, std::size_t n, std::uint64_t seed,
                             double start_price, Date start) {
  if (n < 2) fail(ErrorKind::InvalidSpec, "fixture needs n >= 2");
  if (!(start_price > 0.0)) fail(ErrorKind::InvalidSpec, "start_price must be > 0");
  const ReturnSeries r = simulate(model, n - 1, seed);
  std::vector<Date> dates(n);
  std::vector<double> prices(n);
  double log_price = std::log(start_price);
  dates[0] = start;
  prices[0] = start_price;
  for (std::size_t i = 1; i < n; ++i) {
    log_price += r[i - 1];
    dates[i] = start + std::chrono::days{i};
    prices[i] = std::exp(log_price);
  }
  return PriceSeries(std::move(dates), std::move(prices));
}

}  // namespace volkit
