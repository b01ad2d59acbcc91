#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "volkit/error.hpp"
#include "volkit/garch.hpp"
#include "volkit/ingest.hpp"
#include "volkit/stats.hpp"

using namespace volkit;

namespace {

PriceSeries parse_prices(const std::string& text) {
  std::istringstream in(text);
  return load_price_series(in);
}

OptionChain parse_chain(const std::string& text) {
  std::istringstream in(text);
  return load_option_chain(in);
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidSpec;
}

const std::string kChainHeader = "quote_date,expiry_date,type,strike,bid,ask,open_interest\n";

}  // namespace

TEST(LoadPriceSeries, ParsesThreeRows) {
  const auto s = parse_prices("date,price\n2019-01-01,100\n2019-01-02,110\n2019-01-03,99\n");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.first_date(), make_date(2019, 1, 1));
  EXPECT_DOUBLE_EQ(s.prices()[1], 110.0);
}

TEST(LoadPriceSeries, SortsRowsByDate) {
  const auto s = parse_prices("date,price\n2019-01-03,99\n2019-01-01,100\n2019-01-02,110\n");
  EXPECT_EQ(s.prices()[0], 100.0);
  EXPECT_EQ(s.prices()[2], 99.0);
}

TEST(LoadPriceSeries, RejectsDuplicateDate) {
  EXPECT_EQ(kind_of([] { parse_prices("date,price\n2019-01-01,1\n2019-01-02,2\n2019-01-02,3\n"); }),
            ErrorKind::DuplicateDate);
}

TEST(LoadPriceSeries, RejectsZeroPrice) {
  EXPECT_EQ(kind_of([] { parse_prices("date,price\n2019-01-01,100\n2019-01-02,0\n"); }),
            ErrorKind::NonPositivePrice);
}

TEST(LoadPriceSeries, MalformedRowsNameTheLine) {
  try {
    parse_prices("date,price\n2019-01-01,100\n2019-13-02,5\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MalformedRow);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_EQ(kind_of([] { parse_prices("day,price\n2019-01-01,100\n2019-01-02,5\n"); }),
            ErrorKind::MalformedRow);
  EXPECT_EQ(kind_of([] { parse_prices("date,price\n2019-01-01,1,00\n2019-01-02,5\n"); }),
            ErrorKind::MalformedRow);
  EXPECT_EQ(kind_of([] { parse_prices("date,price\n2019-01-01,abc\n2019-01-02,5\n"); }),
            ErrorKind::MalformedRow);
}

TEST(LoadPriceSeries, ArbitraryBytesOnlyRaiseTypedErrors) {
  std::mt19937_64 rng(7);
  const std::string alphabet = "0123456789-,.\n date,price\xef\xbb\xbf eE+";
  for (int trial = 0; trial < 2000; ++trial) {
    std::string text = trial % 2 ? "date,price\n" : "";
    const auto len = rng() % 80;
    for (std::size_t i = 0; i < len; ++i) {
      text += trial % 3 ? alphabet[rng() % alphabet.size()] : static_cast<char>(rng() % 256);
    }
    try {
      parse_prices(text);
    } catch (const Error&) {
    }
  }
  SUCCEED();
}

TEST(LoadOptionChain, ParsesOneCall) {
  const auto c = parse_chain(kChainHeader + "2019-07-31,2019-09-27,CALL,10000,900,950,12\n");
  ASSERT_EQ(c.quotes().size(), 1u);
  EXPECT_EQ(c.quotes()[0].kind, OptionKind::call);
  EXPECT_EQ(c.quotes()[0].open_interest, 12);
}

TEST(LoadOptionChain, RejectsInvariantViolations) {
  EXPECT_EQ(kind_of([] { parse_chain(kChainHeader + "2019-07-31,2019-09-27,call,10000,5,4,1\n"); }),
            ErrorKind::CrossedQuote);
  EXPECT_EQ(kind_of([] { parse_chain(kChainHeader + "2019-06-01,2019-01-01,put,10000,4,5,1\n"); }),
            ErrorKind::ExpiryBeforeQuote);
  EXPECT_EQ(kind_of([] { parse_chain(kChainHeader + "2019-06-01,2019-07-01,put,10000,4,5,-1\n"); }),
            ErrorKind::NegativeOpenInterest);
  EXPECT_EQ(kind_of([] { parse_chain(kChainHeader + "2019-06-01,2019-07-01,straddle,1,4,5,1\n"); }),
            ErrorKind::MalformedRow);
  EXPECT_EQ(kind_of([] {
              parse_chain(kChainHeader + "2019-06-01,2019-07-01,put,100,4,5,1\n" +
                          "2019-06-01,2019-07-01,put,100,4,6,1\n");
            }),
            ErrorKind::DuplicateQuote);
}

TEST(RoundTrip, PriceSeriesSurvivesWriteAndLoad) {
  const auto model = make_sgarch(1e-4, {0.0833}, {0.8644});
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto s = generate_fixture(model, 300, seed, 9767.60);
    std::ostringstream out;
    write_price_series(out, s);
    EXPECT_EQ(parse_prices(out.str()), s);
  }
}

TEST(RoundTrip, OptionChainSurvivesWriteAndLoad) {
  std::vector<OptionQuote> quotes{
      {make_date(2019, 7, 31), make_date(2019, 9, 27), OptionKind::call, 10000, 0.1 + 0.2, 1e-7 + 1, 3},
      {make_date(2019, 7, 31), make_date(2019, 9, 27), OptionKind::put, 9500.5, 0, 0, 0}};
  const OptionChain chain(quotes);
  std::ostringstream out;
  write_option_chain(out, chain);
  EXPECT_EQ(parse_chain(out.str()), chain);
}

TEST(SliceWindow, FullRangeIsIdentity) {
  const auto s = generate_fixture(make_sgarch(1e-4, {0.05}, {0.9}), 50, 3, 100.0);
  EXPECT_EQ(slice_window(s, s.first_date(), s.last_date()), s);
}

TEST(SliceWindow, InclusiveBoundsAndReturnCounts) {
  // Daily prices from 2013 to 2019; returns are formed inside the price window.
  const auto s = generate_fixture(make_sgarch(1e-4, {0.05}, {0.9}), 2600, 11, 100.0,
                                  make_date(2013, 1, 1));
  const auto w = slice_window(s, make_date(2018, 1, 1), make_date(2019, 7, 31));
  EXPECT_EQ(w.first_date(), make_date(2018, 1, 1));
  EXPECT_EQ(w.last_date(), make_date(2019, 7, 31));
  EXPECT_EQ(log_returns(w).size(), 576u);
  EXPECT_EQ(log_returns(slice_window(s, make_date(2019, 1, 1), make_date(2019, 7, 31))).size(), 211u);
}

TEST(SliceWindow, TooFewPointsIsEmptyWindow) {
  const auto s = generate_fixture(make_sgarch(1e-4, {0.05}, {0.9}), 10, 3, 100.0);
  EXPECT_EQ(kind_of([&] { slice_window(s, s.first_date(), s.first_date()); }), ErrorKind::EmptyWindow);
  EXPECT_EQ(kind_of([&] { slice_window(s, make_date(2030, 1, 1), make_date(2031, 1, 1)); }),
            ErrorKind::EmptyWindow);
}

TEST(GenerateFixture, TwoPointsStartAtStartPrice) {
  const auto s = generate_fixture(make_sgarch(1e-4, {0.05}, {0.9}), 2, 99, 1234.5);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.prices()[0], 1234.5);
}

TEST(GenerateFixture, SameSeedIsByteIdentical) {
  const auto m = make_sgarch(1e-4, {0.0833}, {0.8644});
  std::ostringstream a, b;
  write_price_series(a, generate_fixture(m, 500, 5, 100.0));
  write_price_series(b, generate_fixture(m, 500, 5, 100.0));
  EXPECT_EQ(a.str(), b.str());
}

TEST(GenerateFixture, IidVarianceMatchesOmega) {
  const auto s = generate_fixture(make_sgarch(1e-4, {0.0}, {0.0}), 10000, 21, 100.0);
  const auto d = describe(log_returns(s));
  EXPECT_NEAR(d.st_deviation * d.st_deviation, 1e-4, 0.05 * 1e-4);
}

TEST(GenerateFixture, RejectsBadSpec) {
  const auto m = make_sgarch(1e-4, {0.05}, {0.9});
  EXPECT_EQ(kind_of([&] { generate_fixture(m, 1, 1, 100.0); }), ErrorKind::InvalidSpec);
  EXPECT_EQ(kind_of([&] { generate_fixture(m, 10, 1, -1.0); }), ErrorKind::InvalidSpec);
}
