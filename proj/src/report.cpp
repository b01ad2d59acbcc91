#include "volkit/report.hpp"

#include <cmath>
#include <cstdio>

namespace volkit {

namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json optional_number(const std::optional<double>& v) {
  return v ? number_or_null(*v) : Json(nullptr);
}

Json optional_vector(const std::vector<std::optional<double>>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(optional_number(x));
  return out;
}

Json to_json(const GarchModel& m) {
  Json params = Json::object();
  const auto names = parameter_names(m);
  const auto values = parameter_values(m);
  for (std::size_t i = 0; i < names.size(); ++i) params[names[i]] = values[i];
  return Json{{"family", to_string(m.family)}, {"p", m.p}, {"q", m.q}, {"params", params}};
}

Json to_json(const ParamVector& v) {
  return Json{{"omega", v.omega}, {"alpha1", v.alpha.at(0)}, {"beta1", v.beta.at(0)}};
}

}  // namespace

StatsReport make_stats_report(const PriceSeries& prices, const StatsOptions& o) {
  const ReturnSeries r = log_returns(prices);
  std::vector<double> log_price;
  for (double p : prices.prices()) log_price.push_back(std::log(p));
  const ReturnSeries level(std::vector<Date>(prices.dates().begin(), prices.dates().end()),
                           std::move(log_price));
  StatsReport rep;
  rep.from = prices.first_date();
  rep.to = prices.last_date();
  rep.summary = describe(r);
  rep.jarque_bera = jarque_bera(r);
  rep.t_test = t_test_zero_mean(r);
  rep.adf = adf_test(r, o.adf_lags);
  rep.adf_log_price = adf_test(level, o.adf_lags);
  rep.arch_lm = arch_lm_test(r, o.arch_lags);
  rep.ljung_box = ljung_box_squared(r, o.ljung_box_lags);
  return rep;
}

std::string format_csv_number(double value) {
  if (!std::isfinite(value)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

Json to_json(const SummaryStats& s) {
  return Json{{"n", s.n},
              {"mean", s.mean},
              {"median", s.median},
              {"st_deviation", s.st_deviation},
              {"skewness", s.skewness},
              {"kurtosis", s.kurtosis},
              {"min", s.min},
              {"max", s.max},
              {"jarque_bera", s.jarque_bera}};
}

Json to_json(const TestResult& t) {
  return Json{{"statistic", number_or_null(t.statistic)},
              {"p_value", t.p_value},
              {"df_or_lags", t.df_or_lags},
              {"reject_at_5pct", t.reject_at_5pct}};
}

Json to_json(const StatsReport& r) {
  return Json{{"from", format_date(r.from)},
              {"to", format_date(r.to)},
              {"summary", to_json(r.summary)},
              {"tests",
               {{"jarque_bera", to_json(r.jarque_bera)},
                {"t_test_zero_mean", to_json(r.t_test)},
                {"adf_returns", to_json(r.adf)},
                {"adf_log_price", to_json(r.adf_log_price)},
                {"arch_lm", to_json(r.arch_lm)},
                {"ljung_box_squared", to_json(r.ljung_box)}}}};
}

Json to_json(const VolSeries& v) {
  Json points = Json::array();
  for (const auto& p : v.points) points.push_back({{"date", format_date(p.date)}, {"sigma", p.sigma}});
  return Json{{"window", v.window}, {"points", points}};
}

Json to_json(const FitResult& f) {
  return Json{{"model", to_json(f.model)},
              {"parameter_names", parameter_names(f.model)},
              {"log_likelihood", f.log_likelihood},
              {"n", f.n},
              {"k", f.k},
              {"std_errors", optional_vector(f.std_errors)},
              {"p_values", optional_vector(f.p_values)},
              {"converged", f.converged},
              {"iterations", f.iterations},
              {"persistence", persistence(f.model)},
              {"unconditional_variance", optional_number(unconditional_variance(f.model))}};
}

Json to_json(const MsFitResult& f) {
  const auto& t = f.model.transition;
  Json filtered = Json::array();
  for (std::size_t i = 0; i < f.filtered_probabilities.size(); ++i) {
    filtered.push_back({{"date", format_date(f.dates.at(i))},
                        {"regime1", f.filtered_probabilities[i][0]},
                        {"regime2", f.filtered_probabilities[i][1]}});
  }
  return Json{{"model",
               {{"regime1", to_json(f.model.regimes[0])}, {"regime2", to_json(f.model.regimes[1])}}},
              {"transition", {{t[0][0], t[0][1]}, {t[1][0], t[1][1]}}},
              {"stable_probabilities", {f.stable_probabilities[0], f.stable_probabilities[1]}},
              {"log_likelihood", f.log_likelihood},
              {"n", f.n},
              {"k", f.k},
              {"converged", f.converged},
              {"iterations", f.iterations},
              {"next_variance", {f.next_variance[0], f.next_variance[1]}},
              {"filtered_probabilities", filtered}};
}

Json to_json(const GridReport& g) {
  Json rows = Json::array();
  for (const auto& r : g.rows) {
    Json row{{"family", to_string(r.family)},
             {"p", r.p},
             {"q", r.q},
             {"converged", r.converged},
             {"ll", r.fit ? Json(r.fit->log_likelihood) : Json(nullptr)},
             {"k", r.fit ? Json(r.fit->k) : Json(nullptr)},
             {"aic", number_or_null(r.criteria.aic)},
             {"bic", number_or_null(r.criteria.bic)}};
    if (!r.error.empty()) row["error"] = r.error;
    rows.push_back(std::move(row));
  }
  auto winner = [&](const std::optional<std::size_t>& i) {
    if (!i) return Json(nullptr);
    const auto& r = g.rows[*i];
    return Json{{"family", to_string(r.family)}, {"p", r.p}, {"q", r.q}};
  };
  return Json{{"n", g.n},
              {"convention", to_string(g.convention)},
              {"criterion", to_string(g.criterion)},
              {"winner", winner(g.winner())},
              {"best_by_aic", winner(g.best_by_aic)},
              {"best_by_bic", winner(g.best_by_bic)},
              {"rows", rows}};
}

Json to_json(const VolForecastPath& f, bool annualize) {
  Json steps = Json::array();
  for (std::size_t h = 0; h < f.sigma2.size(); ++h) {
    Json s{{"h", h + 1}, {"sigma2", f.sigma2[h]}, {"sigma", f.sigma[h]}};
    if (annualize) s["sigma_annual"] = scale_volatility(f.sigma[h], kDaysPerYear);
    steps.push_back(std::move(s));
  }
  return Json{{"horizon", f.horizon}, {"long_run", optional_number(f.long_run)}, {"steps", steps}};
}

Json to_json(const std::vector<SmileCurve>& curves) {
  Json out = Json::array();
  for (const auto& c : curves) {
    Json points = Json::array();
    for (const auto& p : c.points) {
      points.push_back({{"strike", p.strike}, {"iv", optional_number(p.iv)}, {"status", to_string(p.status)}});
    }
    out.push_back({{"quote_date", format_date(c.quote_date)},
                   {"expiry", format_date(c.expiry_date)},
                   {"kind", to_string(c.kind)},
                   {"side", to_string(c.side)},
                   {"points", points}});
  }
  return Json{{"curves", out}};
}

Json to_json(const std::vector<SpreadRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    out.push_back({{"expiry", format_date(r.expiry_date)},
                   {"kind", to_string(r.kind)},
                   {"strike", r.strike},
                   {"spread", r.spread},
                   {"open_interest", r.open_interest}});
  }
  return Json{{"rows", out}};
}

Json to_json(const VolSurface& s) {
  Json buckets = Json::array();
  for (const auto& b : s.time_buckets) {
    buckets.push_back({{"start", format_date(b.start)}, {"end", format_date(b.end)}});
  }
  Json cells = Json::array();
  for (const auto& row : s.cells) cells.push_back(optional_vector(row));
  return Json{{"time_buckets", buckets}, {"strikes", s.strikes}, {"cells", cells},
              {"missing_cells", s.missing_cells()}};
}

void write_json(std::ostream& out, Json body) {
  Json doc{{"schema_version", kSchemaVersion}};
  for (auto& [key, value] : body.items()) doc[key] = std::move(value);
  out << doc.dump(2) << '\n';
}

void write_histvol_csv(std::ostream& out, const VolSeries& v) {
  out << "date,sigma\n";
  for (const auto& p : v.points) out << format_date(p.date) << ',' << format_csv_number(p.sigma) << '\n';
}

void write_grid_csv(std::ostream& out, const GridReport& g) {
  out << "family,p,q,converged,ll,k,aic,bic\n";
  for (const auto& r : g.rows) {
    out << to_string(r.family) << ',' << r.p << ',' << r.q << ',' << (r.converged ? "true" : "false")
        << ',' << (r.fit ? format_csv_number(r.fit->log_likelihood) : "") << ','
        << (r.fit ? std::to_string(r.fit->k) : "") << ',' << format_csv_number(r.criteria.aic)
        << ',' << format_csv_number(r.criteria.bic) << '\n';
  }
}

void write_forecast_csv(std::ostream& out, const VolForecastPath& f, bool annualize) {
  out << "h,sigma2,sigma" << (annualize ? ",sigma_annual" : "") << '\n';
  for (std::size_t h = 0; h < f.sigma2.size(); ++h) {
    out << h + 1 << ',' << format_csv_number(f.sigma2[h]) << ',' << format_csv_number(f.sigma[h]);
    if (annualize) out << ',' << format_csv_number(scale_volatility(f.sigma[h], kDaysPerYear));
    out << '\n';
  }
}

void write_smiles_csv(std::ostream& out, const std::vector<SmileCurve>& curves) {
  out << "expiry,kind,side,strike,iv,status\n";
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      out << format_date(c.expiry_date) << ',' << to_string(c.kind) << ',' << to_string(c.side)
          << ',' << format_csv_number(p.strike) << ',' << (p.iv ? format_csv_number(*p.iv) : "")
          << ',' << to_string(p.status) << '\n';
    }
  }
}

void write_spreads_csv(std::ostream& out, const std::vector<SpreadRow>& rows) {
  out << "expiry,kind,strike,spread,open_interest\n";
  for (const auto& r : rows) {
    out << format_date(r.expiry_date) << ',' << to_string(r.kind) << ','
        << format_csv_number(r.strike) << ',' << format_csv_number(r.spread) << ','
        << r.open_interest << '\n';
  }
}

void write_surface_csv(std::ostream& out, const VolSurface& s) {
  out << "bucket_start,bucket_end,strike,iv\n";
  for (std::size_t b = 0; b < s.time_buckets.size(); ++b) {
    for (std::size_t k = 0; k < s.strikes.size(); ++k) {
      const auto& cell = s.cells[b][k];
      out << format_date(s.time_buckets[b].start) << ',' << format_date(s.time_buckets[b].end)
          << ',' << format_csv_number(s.strikes[k]) << ',' << (cell ? format_csv_number(*cell) : "")
          << '\n';
    }
  }
}

}  // namespace volkit
