#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "volkit/error.hpp"
#include "volkit/selection.hpp"

using namespace volkit;

namespace {

const GarchModel kReferenceGarch = make_sgarch(1e-4, {0.0833}, {0.8644});

GridRow row(Family f, int p, int q, double aic, double bic, bool ok = true) {
  GridRow r;
  r.family = f;
  r.p = p;
  r.q = q;
  r.converged = ok;
  r.criteria = CriteriaPair{aic, bic, Convention::raw};
  if (ok) r.fit = FitResult{};
  return r;
}

}  // namespace

TEST(InformationCriteria, OneRegimeFitPerObservation) {
  const auto c = information_criteria(1061.39, 3, 578, Convention::per_observation);
  EXPECT_NEAR(c.aic, -3.6622, 1e-4);
  EXPECT_NEAR(c.bic, -3.6396, 1e-4);
  EXPECT_EQ(c.convention, Convention::per_observation);
}

TEST(InformationCriteria, TwoRegimeFitRaw) {
  const auto c = information_criteria(1146.9371, 8, 578, Convention::raw);
  EXPECT_NEAR(c.aic, -2277.8742, 1e-3);
  EXPECT_NEAR(c.bic, -2242.9976, 1e-3);
}

TEST(InformationCriteria, ZeroCase) {
  const auto c = information_criteria(0.0, 0, 100, Convention::raw);
  EXPECT_EQ(c.aic, 0.0);
  EXPECT_EQ(c.bic, 0.0);
}

TEST(InformationCriteria, ConventionsAndOrdering) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ll(-5000.0, 5000.0);
  for (int i = 0; i < 500; ++i) {
    const double l = ll(rng);
    const int k = static_cast<int>(rng() % 12);
    const std::size_t n = 8 + rng() % 5000;
    const auto raw = information_criteria(l, k, n, Convention::raw);
    const auto per = information_criteria(l, k, n, Convention::per_observation);
    EXPECT_EQ(per.aic, raw.aic / static_cast<double>(n));
    EXPECT_EQ(per.bic, raw.bic / static_cast<double>(n));
    EXPECT_GE(raw.bic, raw.aic);
    EXPECT_GE(per.bic, per.aic);
    const auto more = information_criteria(l, k + 1, n, Convention::raw);
    EXPECT_GT(more.aic, raw.aic);
    EXPECT_GT(more.bic, raw.bic);
  }
}

TEST(LikelihoodRatio, Examples) {
  const auto same = likelihood_ratio_test(100.0, 100.0, 1);
  EXPECT_EQ(same.statistic, 0.0);
  EXPECT_EQ(same.p_value, 1.0);
  EXPECT_NEAR(likelihood_ratio_test(101.92075, 100.0, 1).p_value, 0.05, 1e-5);
  EXPECT_EQ(likelihood_ratio_test(100.0 - 1e-9, 100.0, 2).statistic, 0.0);
  try {
    likelihood_ratio_test(100.0 - 1e-6, 100.0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NegativeLR);
  }
}

TEST(SelectBest, TieBreaksOnOrderThenQThenFamily) {
  const std::vector<Family> fams{Family::sgarch, Family::gjr};
  std::vector<GridRow> rows{row(Family::sgarch, 2, 1, -3.0, -2.0), row(Family::sgarch, 1, 2, -3.0, -2.0),
                            row(Family::gjr, 1, 1, -3.0, -2.0), row(Family::sgarch, 1, 1, -3.0, -2.0)};
  EXPECT_EQ(select_best(rows, fams, Criterion::bic), 3u);
  rows.pop_back();
  EXPECT_EQ(select_best(rows, fams, Criterion::bic), 2u);
  rows.pop_back();
  // (2,1) and (1,2): equal order, lower q wins.
  EXPECT_EQ(select_best(rows, fams, Criterion::aic), 0u);
}

TEST(SelectBest, FailedCellsNeverWin) {
  const std::vector<Family> fams{Family::sgarch};
  std::vector<GridRow> rows{row(Family::sgarch, 1, 1, -1.0, -1.0), row(Family::sgarch, 1, 2, -9.0, -9.0, false)};
  rows[1].criteria = CriteriaPair{NAN, NAN, Convention::raw};
  EXPECT_EQ(select_best(rows, fams, Criterion::bic), 0u);
  rows[0].fit.reset();
  EXPECT_FALSE(select_best(rows, fams, Criterion::bic).has_value());
}

TEST(SelectBest, InvariantUnderRowOrder) {
  const std::vector<Family> fams{Family::sgarch, Family::gjr};
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> v(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<GridRow> rows;
    for (Family f : fams) {
      for (int p = 1; p <= 3; ++p) {
        for (int q = 1; q <= 3; ++q) rows.push_back(row(f, p, q, v(rng), v(rng)));
      }
    }
    const auto key = [](const GridRow& r) { return std::make_tuple(r.family, r.p, r.q); };
    const auto best = key(rows[*select_best(rows, fams, Criterion::bic)]);
    std::shuffle(rows.begin(), rows.end(), rng);
    EXPECT_EQ(key(rows[*select_best(rows, fams, Criterion::bic)]), best);
  }
}

TEST(GridSearch, RowsOrderedAndCounted) {
  const auto r = simulate(kReferenceGarch, 600, 1);
  const std::vector<Family> fams{Family::sgarch};
  const auto g = grid_search(fams, r, 3, Criterion::bic, Convention::per_observation);
  ASSERT_EQ(g.rows.size(), 9u);
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_EQ(g.rows[i].p, static_cast<int>(i / 3) + 1);
    EXPECT_EQ(g.rows[i].q, static_cast<int>(i % 3) + 1);
    ASSERT_TRUE(g.rows[i].fit.has_value());
    const auto raw = information_criteria(g.rows[i].fit->log_likelihood, g.rows[i].fit->k, g.n, Convention::raw);
    EXPECT_EQ(g.rows[i].raw.aic, raw.aic);
  }
  ASSERT_TRUE(g.best_by_bic.has_value());
  for (const auto& x : g.rows) EXPECT_GE(x.criteria.bic, g.rows[*g.best_by_bic].criteria.bic);
  EXPECT_EQ(grid_search(fams, r, 1).rows.size(), 1u);
  EXPECT_THROW(grid_search(fams, r, 4), Error);
}

TEST(GridSearch, ConcurrentEqualsSequential) {
  const auto r = simulate(kReferenceGarch, 500, 2);
  const std::vector<Family> fams{Family::sgarch, Family::gjr};
  GridOptions seq;
  GridOptions par;
  par.threads = 4;
  const auto a = grid_search(fams, r, 2, Criterion::aic, Convention::raw, seq);
  const auto b = grid_search(fams, r, 2, Criterion::aic, Convention::raw, par);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].family, b.rows[i].family);
    EXPECT_EQ(a.rows[i].p, b.rows[i].p);
    EXPECT_EQ(a.rows[i].q, b.rows[i].q);
    EXPECT_EQ(a.rows[i].fit->log_likelihood, b.rows[i].fit->log_likelihood);
    EXPECT_EQ(parameter_values(a.rows[i].fit->model), parameter_values(b.rows[i].fit->model));
    EXPECT_EQ(a.rows[i].criteria.aic, b.rows[i].criteria.aic);
  }
  EXPECT_EQ(a.best_by_aic, b.best_by_aic);
  EXPECT_EQ(a.best_by_bic, b.best_by_bic);
}

TEST(GridSearch, FailingFitsAreRecorded) {
  // 40 returns is below the fitting minimum, so every cell fails.
  const auto g = grid_search(std::vector<Family>{Family::sgarch}, simulate(kReferenceGarch, 40, 1), 2);
  ASSERT_EQ(g.rows.size(), 4u);
  for (const auto& x : g.rows) {
    EXPECT_FALSE(x.converged);
    EXPECT_FALSE(x.fit.has_value());
    EXPECT_FALSE(x.error.empty());
  }
  EXPECT_FALSE(g.winner().has_value());
}
