#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "volkit/estimator.hpp"
#include "volkit/stats.hpp"

namespace volkit {

enum class Convention { raw, per_observation };
enum class Criterion { aic, bic };

std::string_view to_string(Convention c);
std::string_view to_string(Criterion c);
Convention parse_convention(std::string_view text);
Criterion parse_criterion(std::string_view text);

struct CriteriaPair {
  double aic = 0.0;
  double bic = 0.0;
  Convention convention = Convention::raw;
};

/// AIC = -2 LL + 2k, BIC = -2 LL + ln(n) k, where k counts every free parameter
/// (omega included). per_observation divides both by n.
CriteriaPair information_criteria(double log_likelihood, int k, std::size_t n,
                                  Convention convention);

struct GridRow {
  Family family = Family::sgarch;
  int p = 1;
  int q = 1;
  bool converged = false;
  std::optional<FitResult> fit;  // empty when the cell failed
  std::string error;             // reason for a failed cell
  CriteriaPair criteria;         // in the report's convention
  CriteriaPair raw;              // always raw
};

struct GridReport {
  std::vector<GridRow> rows;  // ordered (family, p, q)
  std::optional<std::size_t> best_by_aic;
  std::optional<std::size_t> best_by_bic;
  Convention convention = Convention::per_observation;
  Criterion criterion = Criterion::bic;
  std::size_t n = 0;

  [[nodiscard]] std::optional<std::size_t> winner() const {
    return criterion == Criterion::aic ? best_by_aic : best_by_bic;
  }
};

struct GridOptions {
  FitOptions fit;
  unsigned threads = 1;  // 0 = hardware concurrency
};

/// Fits every (family, p, q) with 1 <= p, q <= max_order. Failed cells are kept with
/// converged = false and never win. Ties go to lower p + q, then lower q, then the
/// earlier family in `families`.
GridReport grid_search(std::span<const Family> families, const ReturnSeries& returns,
                       int max_order = 3, Criterion criterion = Criterion::bic,
                       Convention convention = Convention::per_observation,
                       const GridOptions& options = {});

/// Index of the best row under `criterion`, honouring the tie-break rules.
std::optional<std::size_t> select_best(const std::vector<GridRow>& rows,
                                       std::span<const Family> families, Criterion criterion);

/// LR = 2 (LL_ext - LL_std), chi-square(df). LR in [-1e-8, 0) is clamped to 0;
/// anything lower throws NegativeLR.
TestResult likelihood_ratio_test(double ll_extended, double ll_standard, int df);

}  // namespace volkit
