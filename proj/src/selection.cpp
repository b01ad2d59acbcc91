#include "volkit/selection.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <tuple>

#include "volkit/distributions.hpp"
#include "volkit/error.hpp"

namespace volkit {

std::string_view to_string(Convention c) {
  return c == Convention::raw ? "raw" : "per_observation";
}

std::string_view to_string(Criterion c) { return c == Criterion::aic ? "aic" : "bic"; }

Convention parse_convention(std::string_view text) {
  if (text == "raw") return Convention::raw;
  if (text == "per_observation") return Convention::per_observation;
  fail(ErrorKind::InvalidSpec, "unknown convention '" + std::string(text) + "'");
}

Criterion parse_criterion(std::string_view text) {
  if (text == "aic") return Criterion::aic;
  if (text == "bic") return Criterion::bic;
  fail(ErrorKind::InvalidSpec, "unknown criterion '" + std::string(text) + "'");
}

CriteriaPair information_criteria(double log_likelihood, int k, std::size_t n,
                                  Convention convention) {
  if (n < 2 || k < 0) fail(ErrorKind::InvalidSpec, "information criteria need n >= 2, k >= 0");
  const double kk = static_cast<double>(k);
  CriteriaPair c{-2.0 * log_likelihood + 2.0 * kk,
                 -2.0 * log_likelihood + std::log(static_cast<double>(n)) * kk, convention};
  if (convention == Convention::per_observation) {
    c.aic /= static_cast<double>(n);
    c.bic /= static_cast<double>(n);
  }
  return c;
}

std::optional<std::size_t> select_best(const std::vector<GridRow>& rows,
                                       std::span<const Family> families, Criterion criterion) {
  auto family_rank = [&](Family f) {
    return static_cast<std::size_t>(std::find(families.begin(), families.end(), f) - families.begin());
  };
  auto key = [&](const GridRow& r) {
    const double v = criterion == Criterion::aic ? r.criteria.aic : r.criteria.bic;
    return std::make_tuple(v, r.p + r.q, r.q, family_rank(r.family));
  };
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (!r.fit || !std::isfinite(r.criteria.aic) || !std::isfinite(r.criteria.bic)) continue;
    if (!best || key(r) < key(rows[*best])) best = i;
  }
  return best;
}

GridReport grid_search(std::span<const Family> families, const ReturnSeries& returns,
                       int max_order, Criterion criterion, Convention convention,
                       const GridOptions& options) {
  if (max_order < 1 || max_order > 3) fail(ErrorKind::InvalidSpec, "max_order must be in 1..3");
  GridReport report;
  report.convention = convention;
  report.criterion = criterion;
  report.n = returns.size();
  for (Family f : families) {
    for (int p = 1; p <= max_order; ++p) {
      for (int q = 1; q <= max_order; ++q) {
        GridRow row;
        row.family = f;
        row.p = p;
        row.q = q;
        report.rows.push_back(std::move(row));
      }
    }
  }

  auto run_cell = [&](GridRow& row) {
    try {
      FitResult fr = fit(row.family, row.p, row.q, returns, options.fit);
      row.converged = fr.converged;
      row.raw = information_criteria(fr.log_likelihood, fr.k, fr.n, Convention::raw);
      row.criteria = information_criteria(fr.log_likelihood, fr.k, fr.n, convention);
      row.fit = std::move(fr);
    } catch (const Error& e) {
      row.converged = false;
      row.error = e.what();
      row.criteria = row.raw = CriteriaPair{NAN, NAN, convention};
    }
  };

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                          : options.threads;
  threads = std::min<unsigned>(threads, static_cast<unsigned>(report.rows.size()));
  if (threads <= 1) {
    for (auto& row : report.rows) run_cell(row);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < report.rows.size(); i = next++) run_cell(report.rows[i]);
      });
    }
  }
  report.best_by_aic = select_best(report.rows, families, Criterion::aic);
  report.best_by_bic = select_best(report.rows, families, Criterion::bic);
  return report;
}

TestResult likelihood_ratio_test(double ll_extended, double ll_standard, int df) {
  if (df < 1) fail(ErrorKind::InvalidSpec, "df must be >= 1");
  double lr = 2.0 * (ll_extended - ll_standard);
  if (lr < -1e-8) {
    fail(ErrorKind::NegativeLR, "extended model has lower likelihood (LR = " + std::to_string(lr) + ")");
  }
  lr = std::max(lr, 0.0);
  return make_test_result(lr, chi_square_sf(lr, df), df);
}

}  // namespace volkit
