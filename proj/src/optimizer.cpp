#include "volkit/optimizer.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace volkit {

namespace {

/// Counts evaluations and remembers the best point ever seen.
class Tracker {
 public:
  Tracker(const Objective& f, int budget) : f_(f), budget_(budget) {}

  double operator()(std::span<const double> x) {
    ++count_;
    double v = f_(x);
    if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
    if (v < best_value_) {
      best_value_ = v;
      best_.assign(x.begin(), x.end());
    }
    return v;
  }

  [[nodiscard]] bool exhausted() const { return count_ >= budget_; }
  [[nodiscard]] int count() const { return count_; }
  [[nodiscard]] const std::vector<double>& best() const { return best_; }
  [[nodiscard]] double best_value() const { return best_value_; }

 private:
  const Objective& f_;
  int budget_;
  int count_ = 0;
  std::vector<double> best_;
  double best_value_ = std::numeric_limits<double>::infinity();
};

}  // namespace

OptimizerResult nelder_mead(const Objective& f, std::vector<double> x0, double initial_step,
                            int max_evaluations, double tolerance) {
  const std::size_t dim = x0.size();
  Tracker eval(f, max_evaluations);
  std::vector<std::vector<double>> simplex(dim + 1, x0);
  std::vector<double> values(dim + 1);
  for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += initial_step;
  for (std::size_t i = 0; i <= dim; ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim), trial(dim), trial2(dim);
  auto blend = [&](const std::vector<double>& from, double t, std::vector<double>& out) {
    for (std::size_t k = 0; k < dim; ++k) out[k] = centroid[k] + t * (from[k] - centroid[k]);
  };

  OptimizerResult res;
  while (!eval.exhausted()) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[dim - 1];
    const double spread = values[worst] - values[best];
    if (std::isfinite(values[worst]) && spread <= tolerance * (1.0 + std::abs(values[best]))) {
      res.converged = true;
      break;
    }
    ++res.iterations;
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[i][k] / static_cast<double>(dim);
    }
    blend(simplex[worst], -1.0, trial);
    const double fr = eval(trial);
    if (fr < values[best]) {
      blend(simplex[worst], -2.0, trial2);
      const double fe = eval(trial2);
      if (fe < fr) {
        simplex[worst] = trial2;
        values[worst] = fe;
      } else {
        simplex[worst] = trial;
        values[worst] = fr;
      }
    } else if (fr < values[second]) {
      simplex[worst] = trial;
      values[worst] = fr;
    } else {
      const bool outside = fr < values[worst];
      blend(simplex[worst], outside ? -0.5 : 0.5, trial2);
      const double fc = eval(trial2);
      if (fc < std::min(fr, values[worst])) {
        simplex[worst] = trial2;
        values[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= dim; ++i) {
          if (i == best) continue;
          for (std::size_t k = 0; k < dim; ++k) {
            simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
          }
          values[i] = eval(simplex[i]);
        }
      }
    }
  }
  res.x = eval.best().empty() ? x0 : eval.best();
  res.value = eval.best_value();
  res.evaluations = eval.count();
  return res;
}

OptimizerResult bfgs(const Objective& f, std::vector<double> x0, int max_evaluations,
                     double tolerance) {
  using Eigen::MatrixXd;
  using Eigen::VectorXd;
  const auto dim = static_cast<Eigen::Index>(x0.size());
  Tracker eval(f, max_evaluations);
  OptimizerResult res;

  VectorXd x = Eigen::Map<const VectorXd>(x0.data(), dim);
  std::vector<double> buf(x0.size());
  auto value_at = [&](const VectorXd& p) {
    std::copy(p.data(), p.data() + dim, buf.begin());
    return eval(buf);
  };
  auto gradient_at = [&](const VectorXd& p, VectorXd& g) {
    VectorXd q = p;
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double h = 1e-5 * std::max(1.0, std::abs(p(i)));
      q(i) = p(i) + h;
      const double up = value_at(q);
      q(i) = p(i) - h;
      const double down = value_at(q);
      q(i) = p(i);
      g(i) = (up - down) / (2.0 * h);
    }
    return g.allFinite();
  };

  double fx = value_at(x);
  VectorXd g(dim), g_new(dim);
  MatrixXd inv_h = MatrixXd::Identity(dim, dim);
  if (!std::isfinite(fx) || !gradient_at(x, g)) {
    res.x = x0;
    res.value = eval.best_value();
    res.evaluations = eval.count();
    return res;
  }

  while (!eval.exhausted()) {
    ++res.iterations;
    VectorXd dir = -inv_h * g;
    if (dir.dot(g) >= 0.0) {
      inv_h.setIdentity();
      dir = -g;
    }
    double step = 1.0;
    double f_new = fx;
    VectorXd x_new = x;
    bool accepted = false;
    for (int k = 0; k < 40 && !eval.exhausted(); ++k) {
      x_new = x + step * dir;
      f_new = value_at(x_new);
      if (std::isfinite(f_new) && f_new <= fx + 1e-4 * step * dir.dot(g)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // no descent along the quasi-Newton direction: stationary to working precision
      res.converged = !eval.exhausted();
      break;
    }
    const double improvement = fx - f_new;
    if (!gradient_at(x_new, g_new)) break;
    const VectorXd s = x_new - x;
    const VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const MatrixXd id = MatrixXd::Identity(dim, dim);
      inv_h = (id - rho * s * y.transpose()) * inv_h * (id - rho * y * s.transpose()) +
              rho * s * s.transpose();
    }
    x = x_new;
    fx = f_new;
    g = g_new;
    if (improvement < tolerance) {
      res.converged = true;
      break;
    }
  }
  res.x = eval.best().empty() ? x0 : eval.best();
  res.value = eval.best_value();
  res.evaluations = eval.count();
  return res;
}

OptimizerResult minimize(const Objective& f, std::vector<double> x0,
                         const OptimizerOptions& options) {
  const int simplex_budget =
      std::max(1, static_cast<int>(options.simplex_share * options.max_evaluations));
  OptimizerResult coarse =
      nelder_mead(f, std::move(x0), options.initial_step, simplex_budget, 1e-10);
  const int remaining = std::max(1, options.max_evaluations - coarse.evaluations);
  OptimizerResult fine = bfgs(f, coarse.x, remaining, options.tolerance);
  if (!(fine.value <= coarse.value)) {
    fine.x = coarse.x;
    fine.value = coarse.value;
  }
  fine.evaluations += coarse.evaluations;
  fine.iterations += coarse.iterations;
  return fine;
}

}  // namespace volkit
