#include "volkit/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "volkit/error.hpp"
#include "volkit/forecast.hpp"
#include "volkit/ingest.hpp"
#include "volkit/msgarch.hpp"
#include "volkit/options.hpp"
#include "volkit/report.hpp"
#include "volkit/selection.hpp"
#include "volkit/stats.hpp"
#include "volkit/surface.hpp"

namespace volkit {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string output;
  std::string format;
  std::uint64_t seed = kDefaultSeed;
};

struct Window {
  std::string input;
  std::string from;
  std::string to;
};

struct ModelFlags {
  std::string family = "sgarch";
  int p = 1;
  int q = 1;
  int starts = 5;
  int max_evaluations = 2000;
};

Date to_date(const std::string& text, const char* flag) {
  const auto d = parse_date(text);
  if (!d) throw UsageError(std::string(flag) + ": expected YYYY-MM-DD, got '" + text + "'");
  return *d;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input '" + path + "'");
  return in;
}

PriceSeries load_prices(const std::string& path) {
  auto in = open_input(path);
  return load_price_series(in);
}

OptionChain load_chain(const std::string& path) {
  auto in = open_input(path);
  return load_option_chain(in);
}

PriceSeries windowed(const Window& w) {
  PriceSeries prices = load_prices(w.input);
  if (w.from.empty() && w.to.empty()) return prices;
  const Date from = w.from.empty() ? prices.first_date() : to_date(w.from, "--from");
  const Date to = w.to.empty() ? prices.last_date() : to_date(w.to, "--to");
  return slice_window(prices, from, to);
}

FitOptions fit_options(const ModelFlags& m) {
  FitOptions o;
  o.starts = m.starts;
  o.max_evaluations = m.max_evaluations;
  return o;
}

std::string resolve_format(const Common& c, const char* fallback) {
  const std::string f = c.format.empty() ? fallback : c.format;
  if (f != "json" && f != "csv") throw UsageError("--format must be json or csv");
  return f;
}

template <typename Writer>
void emit(const Common& c, const std::string& default_name, std::ostream& out, Writer&& writer) {
  const std::string path = c.output.empty() ? default_name : c.output;
  if (path == "-") {
    writer(out);
    return;
  }
  // Written to a buffer first so a failing command leaves no partial file.
  std::ostringstream buffer;
  writer(buffer);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open output '" + path + "'");
  file << buffer.str();
  if (!file) throw IoError("failed writing '" + path + "'");
}

std::map<Date, double> spot_map(const std::string& prices_path, const OptionChain& chain) {
  std::map<Date, double> spots = chain.underlying();
  if (!prices_path.empty()) {
    const PriceSeries prices = load_prices(prices_path);
    for (std::size_t i = 0; i < prices.size(); ++i) spots[prices.dates()[i]] = prices.prices()[i];
  }
  return spots;
}

void add_common(CLI::App* sub, Common& c, const char* default_output) {
  sub->add_option("--output,-o", c.output,
                  std::string("output path, '-' for stdout (default ") + default_output + ")");
  sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--seed", c.seed, "seed for every random draw")->capture_default_str();
}

void add_window(CLI::App* sub, Window& w) {
  sub->add_option("--input,-i", w.input, "prices.csv (date,price)")->required();
  sub->add_option("--from", w.from, "first date, inclusive");
  sub->add_option("--to", w.to, "last date, inclusive");
}

void add_model(CLI::App* sub, ModelFlags& m, bool allow_ms) {
  std::vector<std::string> families{"sgarch", "igarch", "gjr", "egarch", "aparch"};
  if (allow_ms) families.emplace_back("msgarch");
  sub->add_option("--family", m.family, "model family")->check(CLI::IsMember(families))->capture_default_str();
  sub->add_option("--p", m.p, "GARCH order (lagged variances)")->check(CLI::Range(1, 3))->capture_default_str();
  sub->add_option("--q", m.q, "ARCH order (lagged shocks)")->check(CLI::Range(1, 3))->capture_default_str();
  sub->add_option("--starts", m.starts, "optimizer starts")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--max-evals", m.max_evaluations, "objective evaluations per start")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

GarchModel simulation_model(Family family, double omega, const std::vector<double>& alpha,
                            const std::vector<double>& beta, const std::vector<double>& gamma,
                            double delta) {
  switch (family) {
    case Family::sgarch: return make_sgarch(omega, alpha, beta);
    case Family::igarch: return make_igarch(omega, alpha, beta);
    case Family::gjr: return make_gjr(omega, alpha, gamma, beta);
    case Family::egarch: return make_egarch(omega, alpha, gamma, beta);
    case Family::aparch: return make_aparch(omega, alpha, gamma, beta, delta);
  }
  throw UsageError("unknown family");
}

int dispatch(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"Volatility analytics: historical, GARCH-family and implied volatility", "volkit"};
  app.require_subcommand(1, 1);
  app.allow_extras(false);

  // stats
  Common stats_c;
  Window stats_w;
  StatsOptions stats_o;
  auto* stats = app.add_subcommand("stats", "descriptive statistics and diagnostic tests");
  add_common(stats, stats_c, "stats-report.json");
  add_window(stats, stats_w);
  stats->add_option("--adf-lags", stats_o.adf_lags)->check(CLI::NonNegativeNumber)->capture_default_str();
  stats->add_option("--arch-lags", stats_o.arch_lags)->check(CLI::PositiveNumber)->capture_default_str();
  stats->add_option("--lb-lags", stats_o.ljung_box_lags)->check(CLI::PositiveNumber)->capture_default_str();

  // histvol
  Common hv_c;
  Window hv_w;
  std::size_t hv_window = kDefaultVolWindow;
  auto* histvol = app.add_subcommand("histvol", "rolling historical daily volatility");
  add_common(histvol, hv_c, "histvol.csv");
  add_window(histvol, hv_w);
  histvol->add_option("--window", hv_window, "rolling window in days")->check(CLI::Range(2, 100000))->capture_default_str();

  // fit
  Common fit_c;
  Window fit_w;
  ModelFlags fit_m;
  auto* fitc = app.add_subcommand("fit", "maximum-likelihood fit of one model");
  add_common(fitc, fit_c, "fit-report.json (msfit-report.json for msgarch)");
  add_window(fitc, fit_w);
  add_model(fitc, fit_m, true);

  // select
  Common sel_c;
  Window sel_w;
  ModelFlags sel_m;
  std::vector<std::string> sel_families{"sgarch"};
  int max_order = 3;
  std::string criterion = "bic";
  std::string convention = "per_observation";
  unsigned threads = 1;
  auto* select = app.add_subcommand("select", "information-criterion grid over (family, p, q)");
  add_common(select, sel_c, "grid-report.csv");
  add_window(select, sel_w);
  select->add_option("--family", sel_families, "families to include (repeatable)")
      ->check(CLI::IsMember({"sgarch", "igarch", "gjr", "egarch", "aparch"}))
      ->capture_default_str();
  select->add_option("--max-order", max_order)->check(CLI::Range(1, 3))->capture_default_str();
  select->add_option("--criterion", criterion)->check(CLI::IsMember({"aic", "bic"}))->capture_default_str();
  select->add_option("--convention", convention)
      ->check(CLI::IsMember({"raw", "per_observation"}))
      ->capture_default_str();
  select->add_option("--threads", threads, "worker threads, 0 = all cores")->capture_default_str();
  select->add_option("--starts", sel_m.starts)->check(CLI::PositiveNumber)->capture_default_str();
  select->add_option("--max-evals", sel_m.max_evaluations)->check(CLI::PositiveNumber)->capture_default_str();

  // forecast
  Common fc_c;
  Window fc_w;
  ModelFlags fc_m;
  std::size_t horizon = 365;
  std::string mode = "fixed";
  std::size_t refit_every = kDefaultRefitEvery;
  bool annualize = false;
  auto* forecast = app.add_subcommand("forecast", "multi-step conditional variance forecast");
  add_common(forecast, fc_c, "forecast.csv");
  add_window(forecast, fc_w);
  add_model(forecast, fc_m, true);
  forecast->add_option("--horizon", horizon)->check(CLI::Range(1, 100000))->capture_default_str();
  forecast->add_option("--mode", mode)->check(CLI::IsMember({"fixed", "mobile"}))->capture_default_str();
  forecast->add_option("--refit-every", refit_every)->check(CLI::Range(1, 100000))->capture_default_str();
  forecast->add_flag("--annualize", annualize, "add sigma * sqrt(365)");

  // iv
  Common iv_c;
  double iv_spot = 0.0, iv_strike = 0.0, iv_price = 0.0, iv_rate = kDefaultRate;
  std::optional<double> iv_tau;
  std::optional<int> iv_days;
  std::string iv_type = "call";
  auto* iv = app.add_subcommand("iv", "invert one option price");
  add_common(iv, iv_c, "-");
  iv->add_option("--spot", iv_spot)->required()->check(CLI::PositiveNumber);
  iv->add_option("--strike", iv_strike)->required()->check(CLI::PositiveNumber);
  iv->add_option("--price", iv_price)->required()->check(CLI::NonNegativeNumber);
  auto* tau_opt = iv->add_option("--tau", iv_tau, "year fraction");
  auto* days_opt = iv->add_option("--days", iv_days, "calendar days to expiry (tau = days / 365)");
  tau_opt->excludes(days_opt);
  iv->add_option("--rate", iv_rate)->capture_default_str();
  iv->add_option("--type", iv_type)->check(CLI::IsMember({"call", "put"}))->capture_default_str();

  // smiles
  Common sm_c;
  std::string sm_options, sm_prices, sm_date, sm_side = "all";
  std::optional<double> sm_spot;
  double sm_rate = kDefaultRate;
  std::int64_t sm_min_oi = 0;
  auto* smiles = app.add_subcommand("smiles", "implied-volatility smiles for one quote date");
  add_common(smiles, sm_c, "smiles.csv");
  smiles->add_option("--options", sm_options, "options.csv")->required();
  smiles->add_option("--date", sm_date, "quote date")->required();
  smiles->add_option("--spot", sm_spot, "underlying price on the quote date");
  smiles->add_option("--prices", sm_prices, "prices.csv supplying the spot");
  smiles->add_option("--rate", sm_rate)->capture_default_str();
  smiles->add_option("--min-open-interest", sm_min_oi)->check(CLI::NonNegativeNumber)->capture_default_str();
  smiles->add_option("--side", sm_side)->check(CLI::IsMember({"bid", "ask", "mid", "all"}))->capture_default_str();

  // spreads
  Common sp_c;
  std::string sp_options, sp_date;
  auto* spreads = app.add_subcommand("spreads", "bid-ask spread and open interest per quote");
  add_common(spreads, sp_c, "spreads.csv");
  spreads->add_option("--options", sp_options, "options.csv")->required();
  spreads->add_option("--date", sp_date, "quote date")->required();

  // surface
  Common su_c;
  std::string su_options, su_prices, su_scheme = "equal_count";
  SurfaceOptions su_o;
  auto* surface = app.add_subcommand("surface", "time-bucket x strike implied-volatility surface");
  add_common(surface, su_c, "surface.csv");
  surface->add_option("--options", su_options, "options.csv")->required();
  surface->add_option("--prices", su_prices, "prices.csv supplying daily spots");
  surface->add_option("--rate", su_o.rate)->capture_default_str();
  surface->add_option("--maturity-days", su_o.maturity_days)->check(CLI::NonNegativeNumber)->capture_default_str();
  surface->add_option("--maturity-tolerance", su_o.maturity_tolerance_days)
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  surface->add_option("--buckets", su_o.buckets)->check(CLI::PositiveNumber)->capture_default_str();
  surface->add_option("--strike-round", su_o.strike_round)->check(CLI::PositiveNumber)->capture_default_str();
  surface->add_option("--min-open-interest", su_o.min_open_interest)
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  surface->add_option("--bucket-scheme", su_scheme)
      ->check(CLI::IsMember({"equal_count", "calendar"}))
      ->capture_default_str();

  // simulate
  Common si_c;
  std::string si_what = "prices";
  std::string si_family = "sgarch";
  std::size_t si_n = 1000;
  double si_omega = 0.0001, si_delta = 2.0, si_start_price = 10000.0;
  std::vector<double> si_alpha{0.0833}, si_beta{0.8644}, si_gamma;
  std::string si_start = "2018-01-01", si_prices_out;
  SyntheticChainSpec si_chain;
  auto* simulate = app.add_subcommand("simulate", "write a synthetic prices.csv or options.csv");
  add_common(simulate, si_c, "prices.csv or options.csv");
  simulate->add_option("--what", si_what)->check(CLI::IsMember({"prices", "options"}))->capture_default_str();
  simulate->add_option("--family", si_family)
      ->check(CLI::IsMember({"sgarch", "igarch", "gjr", "egarch", "aparch"}))
      ->capture_default_str();
  simulate->add_option("--n", si_n, "number of prices")->check(CLI::Range(2, 10000000))->capture_default_str();
  simulate->add_option("--omega", si_omega)->capture_default_str();
  simulate->add_option("--alpha", si_alpha)->capture_default_str();
  simulate->add_option("--beta", si_beta)->capture_default_str();
  simulate->add_option("--gamma", si_gamma);
  simulate->add_option("--delta", si_delta)->capture_default_str();
  simulate->add_option("--start", si_start, "first date")->capture_default_str();
  simulate->add_option("--start-price", si_start_price)->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--days", si_chain.days, "quote dates in the option chain")->capture_default_str();
  simulate->add_option("--sigma", si_chain.sigma, "flat volatility of the option chain")->capture_default_str();
  simulate->add_option("--spot-volatility", si_chain.spot_volatility)->capture_default_str();
  simulate->add_option("--rate", si_chain.rate)->capture_default_str();
  simulate->add_option("--expiry-offsets", si_chain.expiry_offsets)->capture_default_str();
  simulate->add_option("--half-spread", si_chain.relative_half_spread, "relative half spread")
      ->capture_default_str();
  simulate->add_option("--prices-output", si_prices_out, "also write the chain's spots as prices.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  for (auto* sub : app.get_subcommands()) {
    if (sub->get_help_ptr() && sub->get_help_ptr()->count() > 0) {
      out << sub->help();
      return kExitOk;
    }
  }

  if (stats->parsed()) {
    const std::string fmt = resolve_format(stats_c, "json");
    if (fmt != "json") throw UsageError("stats writes json only");
    const StatsReport rep = make_stats_report(windowed(stats_w), stats_o);
    emit(stats_c, "stats-report.json", out, [&](std::ostream& o) { write_json(o, to_json(rep)); });
  } else if (histvol->parsed()) {
    const VolSeries v = historical_volatility(log_returns(windowed(hv_w)), hv_window);
    const std::string fmt = resolve_format(hv_c, "csv");
    emit(hv_c, fmt == "csv" ? "histvol.csv" : "histvol.json", out, [&](std::ostream& o) {
      fmt == "csv" ? write_histvol_csv(o, v) : write_json(o, to_json(v));
    });
  } else if (fitc->parsed()) {
    if (resolve_format(fit_c, "json") != "json") throw UsageError("fit writes json only");
    const ReturnSeries r = log_returns(windowed(fit_w));
    if (fit_m.family == "msgarch") {
      const MsFitResult f = fit_ms(r, fit_options(fit_m));
      emit(fit_c, "msfit-report.json", out, [&](std::ostream& o) { write_json(o, to_json(f)); });
    } else {
      const FitResult f = fit(parse_family(fit_m.family), fit_m.p, fit_m.q, r, fit_options(fit_m));
      emit(fit_c, "fit-report.json", out, [&](std::ostream& o) { write_json(o, to_json(f)); });
    }
  } else if (select->parsed()) {
    std::vector<Family> families;
    for (const auto& f : sel_families) {
      const Family fam = parse_family(f);
      if (std::find(families.begin(), families.end(), fam) == families.end()) families.push_back(fam);
    }
    GridOptions go;
    go.fit = fit_options(sel_m);
    go.threads = threads;
    const GridReport g = grid_search(families, log_returns(windowed(sel_w)), max_order,
                                     parse_criterion(criterion), parse_convention(convention), go);
    const std::string fmt = resolve_format(sel_c, "csv");
    emit(sel_c, fmt == "csv" ? "grid-report.csv" : "grid-report.json", out, [&](std::ostream& o) {
      fmt == "csv" ? write_grid_csv(o, g) : write_json(o, to_json(g));
    });
  } else if (forecast->parsed()) {
    const ReturnSeries r = log_returns(windowed(fc_w));
    VolForecastPath path;
    if (fc_m.family == "msgarch") {
      if (mode != "fixed") throw UsageError("msgarch forecasts support --mode fixed only");
      path = ms_forecast(fit_ms(r, fit_options(fc_m)), horizon);
    } else if (mode == "fixed") {
      const FitResult f = fit(parse_family(fc_m.family), fc_m.p, fc_m.q, r, fit_options(fc_m));
      path = forecast_fixed(f, r, horizon, fc_c.seed);
    } else {
      path = forecast_mobile(parse_family(fc_m.family), fc_m.p, fc_m.q, r, horizon, refit_every,
                             fc_c.seed, fit_options(fc_m));
    }
    const std::string fmt = resolve_format(fc_c, "csv");
    emit(fc_c, fmt == "csv" ? "forecast.csv" : "forecast.json", out, [&](std::ostream& o) {
      fmt == "csv" ? write_forecast_csv(o, path, annualize) : write_json(o, to_json(path, annualize));
    });
  } else if (iv->parsed()) {
    if (!iv_tau && !iv_days) throw UsageError("iv needs --tau or --days");
    const double tau = iv_tau ? *iv_tau : static_cast<double>(*iv_days) / kDaysPerYear;
    if (!(tau > 0.0)) throw UsageError("tau must be > 0");
    const OptionKind kind = iv_type == "call" ? OptionKind::call : OptionKind::put;
    const IvResult res = implied_vol(iv_price, PricingInputs{iv_spot, iv_strike, iv_rate, tau, 0.0}, kind);
    const std::string fmt = resolve_format(iv_c, "json");
    emit(iv_c, "-", out, [&](std::ostream& o) {
      if (fmt == "csv") {
        o << "status,sigma\n" << to_string(res.status) << ','
          << (res.sigma ? format_csv_number(*res.sigma) : "") << '\n';
      } else {
        write_json(o, Json{{"status", to_string(res.status)},
                           {"sigma", res.sigma ? Json(*res.sigma) : Json(nullptr)}});
      }
    });
  } else if (smiles->parsed()) {
    const OptionChain chain = load_chain(sm_options);
    const Date date = to_date(sm_date, "--date");
    double spot = 0.0;
    if (sm_spot) {
      spot = *sm_spot;
    } else {
      const auto spots = spot_map(sm_prices, chain);
      const auto it = spots.find(date);
      if (it == spots.end()) fail(ErrorKind::MissingSpot, "no spot for " + sm_date + "; pass --spot or --prices");
      spot = it->second;
    }
    auto curves = compute_smiles(chain, date, spot, sm_rate, sm_min_oi);
    if (sm_side != "all") {
      const QuoteSide side = parse_side(sm_side);
      std::erase_if(curves, [&](const SmileCurve& c) { return c.side != side; });
    }
    const std::string fmt = resolve_format(sm_c, "csv");
    emit(sm_c, fmt == "csv" ? "smiles.csv" : "smiles.json", out, [&](std::ostream& o) {
      fmt == "csv" ? write_smiles_csv(o, curves) : write_json(o, to_json(curves));
    });
  } else if (spreads->parsed()) {
    const auto rows = spread_report(load_chain(sp_options), to_date(sp_date, "--date"));
    const std::string fmt = resolve_format(sp_c, "csv");
    emit(sp_c, fmt == "csv" ? "spreads.csv" : "spreads.json", out, [&](std::ostream& o) {
      fmt == "csv" ? write_spreads_csv(o, rows) : write_json(o, to_json(rows));
    });
  } else if (surface->parsed()) {
    su_o.scheme = parse_bucket_scheme(su_scheme);
    const OptionChain chain = load_chain(su_options);
    const VolSurface s = build_temporal_surface(chain, spot_map(su_prices, chain), su_o);
    const std::string fmt = resolve_format(su_c, "csv");
    emit(su_c, fmt == "csv" ? "surface.csv" : "surface.json", out, [&](std::ostream& o) {
      fmt == "csv" ? write_surface_csv(o, s) : write_json(o, to_json(s));
    });
  } else if (simulate->parsed()) {
    if (resolve_format(si_c, "csv") != "csv") throw UsageError("simulate writes csv only");
    const Date start = to_date(si_start, "--start");
    if (si_what == "prices") {
      const GarchModel model = simulation_model(parse_family(si_family), si_omega, si_alpha,
                                                si_beta, si_gamma, si_delta);
      const PriceSeries prices = generate_fixture(model, si_n, si_c.seed, si_start_price, start);
      emit(si_c, "prices.csv", out, [&](std::ostream& o) { write_price_series(o, prices); });
    } else {
      si_chain.start = start;
      si_chain.spot = si_start_price;
      si_chain.seed = si_c.seed;
      const OptionChain chain = synthetic_chain(si_chain);
      emit(si_c, "options.csv", out, [&](std::ostream& o) { write_option_chain(o, chain); });
      if (!si_prices_out.empty()) {
        std::vector<Date> dates;
        std::vector<double> values;
        for (const auto& [d, v] : chain.underlying()) {
          dates.push_back(d);
          values.push_back(v);
        }
        const PriceSeries prices(std::move(dates), std::move(values));
        Common pc{si_prices_out, "csv", si_c.seed};
        emit(pc, si_prices_out, out, [&](std::ostream& o) { write_price_series(o, prices); });
      }
    }
  }
  return kExitOk;
}

std::string one_line(std::string text) {
  for (char& ch : text) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  return text;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(argc, argv, out);
  } catch (const UsageError& e) {
    err << "error: usage: " << one_line(e.what()) << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    const bool numerical = category(e.kind()) == ErrorCategory::numerical;
    err << "error: " << one_line(e.what()) << '\n';
    return numerical ? kExitNumerical : kExitData;
  } catch (const IoError& e) {
    err << "error: io: " << one_line(e.what()) << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: internal: " << one_line(e.what()) << '\n';
    return kExitNumerical;
  }
}

}  // namespace volkit
