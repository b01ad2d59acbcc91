#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "volkit/estimator.hpp"
#include "volkit/forecast.hpp"
#include "volkit/msgarch.hpp"
#include "volkit/selection.hpp"
#include "volkit/stats.hpp"
#include "volkit/surface.hpp"

namespace volkit {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

struct StatsReport {
  Date from;
  Date to;
  SummaryStats summary;
  TestResult jarque_bera;
  TestResult t_test;
  TestResult adf;            // returns
  TestResult adf_log_price;  // log price level
  TestResult arch_lm;
  TestResult ljung_box;
};

struct StatsOptions {
  int adf_lags = kDefaultAdfLags;
  int arch_lags = kDefaultArchLmLags;
  int ljung_box_lags = kDefaultLjungBoxLags;
};

StatsReport make_stats_report(const PriceSeries& prices, const StatsOptions& options = {});

/// Six significant digits, as used in every CSV output.
std::string format_csv_number(double value);

Json to_json(const SummaryStats& s);
Json to_json(const TestResult& t);
Json to_json(const StatsReport& r);
Json to_json(const VolSeries& v);
Json to_json(const FitResult& f);
Json to_json(const MsFitResult& f);
Json to_json(const GridReport& g);
Json to_json(const VolForecastPath& f, bool annualize);
Json to_json(const std::vector<SmileCurve>& curves);
Json to_json(const std::vector<SpreadRow>& rows);
Json to_json(const VolSurface& s);

/// Adds schema_version and writes indented JSON followed by a newline.
void write_json(std::ostream& out, Json body);

void write_histvol_csv(std::ostream& out, const VolSeries& v);
void write_grid_csv(std::ostream& out, const GridReport& g);
void write_forecast_csv(std::ostream& out, const VolForecastPath& f, bool annualize);
void write_smiles_csv(std::ostream& out, const std::vector<SmileCurve>& curves);
void write_spreads_csv(std::ostream& out, const std::vector<SpreadRow>& rows);
void write_surface_csv(std::ostream& out, const VolSurface& s);

}  // namespace volkit
