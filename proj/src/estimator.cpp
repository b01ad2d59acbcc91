#include "volkit/estimator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "volkit/distributions.hpp"
#include "volkit/error.hpp"
#include "volkit/optimizer.hpp"

namespace volkit {

namespace {

constexpr double kTiny = 1e-12;

/// w_k = e^{u_k} / (1 + sum e^u); the implicit slack is 1 / (1 + sum e^u).
void shares_from_logits(std::span<const double> u, std::span<double> w) {
  double m = 0.0;
  for (double v : u) m = std::max(m, v);
  double denom = std::exp(-m);
  for (std::size_t k = 0; k < u.size(); ++k) {
    w[k] = std::exp(u[k] - m);
    denom += w[k];
  }
  for (double& v : w) v /= denom;
}

void logits_from_shares(std::span<const double> w, std::span<double> u) {
  double total = 0.0;
  for (double v : w) total += std::max(v, kTiny);
  const double scale = total >= 1.0 - 1e-6 ? (1.0 - 1e-6) / total : 1.0;
  const double slack = 1.0 - scale * total;
  for (std::size_t k = 0; k < w.size(); ++k) u[k] = std::log(scale * std::max(w[k], kTiny) / slack);
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) {
  p = std::clamp(p, 1e-9, 1.0 - 1e-9);
  return std::log(p / (1.0 - p));
}

}  // namespace

int free_parameter_count(Family family, int p, int q) {
  switch (family) {
    case Family::sgarch: return 1 + q + p;
    case Family::igarch: return q + p;
    case Family::gjr:
    case Family::egarch: return 1 + 2 * q + p;
    case Family::aparch: return 2 + 2 * q + p;
  }
  return 0;
}

ParamTransform::ParamTransform(Family family, int p, int q)
    : family_(family), p_(p), q_(q), dim_(static_cast<std::size_t>(free_parameter_count(family, p, q))) {
  if (p < 1 || p > 3 || q < 1 || q > 3) fail(ErrorKind::InvalidSpec, "orders must satisfy 1 <= p,q <= 3");
}

GarchModel ParamTransform::to_model(std::span<const double> th) const {
  GarchModel m{family_, p_, q_, {}};
  auto& pv = m.params;
  const auto q = static_cast<std::size_t>(q_);
  const auto p = static_cast<std::size_t>(p_);
  pv.alpha.resize(q);
  pv.beta.resize(p);
  if (has_gamma(family_)) pv.gamma.resize(q);

  if (family_ == Family::egarch) {
    pv.omega = th[0];
    std::copy_n(th.begin() + 1, q, pv.alpha.begin());
    std::copy_n(th.begin() + 1 + q, q, pv.gamma.begin());
    std::copy_n(th.begin() + 1 + 2 * q, p, pv.beta.begin());
    return m;
  }

  pv.omega = std::exp(th[0]);
  std::array<double, 6> w{};
  switch (family_) {
    case Family::sgarch: {
      shares_from_logits(th.subspan(1, q + p), std::span(w).first(q + p));
      std::copy_n(w.begin(), q, pv.alpha.begin());
      std::copy_n(w.begin() + q, p, pv.beta.begin());
      break;
    }
    case Family::igarch: {
      const std::size_t free = q + p - 1;
      shares_from_logits(th.subspan(1, free), std::span(w).first(free));
      std::copy_n(w.begin(), q, pv.alpha.begin());
      std::copy_n(w.begin() + q, p - 1, pv.beta.begin());
      const double used = std::accumulate(w.begin(), w.begin() + free, 0.0);
      pv.beta[p - 1] = 1.0 - used;
      break;
    }
    case Family::gjr: {
      shares_from_logits(th.subspan(1, q + p), std::span(w).first(q + p));
      for (std::size_t i = 0; i < q; ++i) {
        const double lambda = logistic(th[1 + q + p + i]);
        const double effective = w[i];  // alpha + gamma / 2
        pv.alpha[i] = 2.0 * effective * lambda;
        const double upper = 2.0 * effective * (1.0 - lambda);  // alpha + gamma
        pv.gamma[i] = upper - pv.alpha[i];
        if (pv.alpha[i] + pv.gamma[i] < 0.0) pv.gamma[i] = -pv.alpha[i];
      }
      std::copy_n(w.begin() + q, p, pv.beta.begin());
      break;
    }
    case Family::aparch: {
      shares_from_logits(th.subspan(1, q + p), std::span(w).first(q + p));
      pv.delta = std::exp(th[dim_ - 1]);
      constexpr double kGammaEdge = 1.0 - 1e-12;
      for (std::size_t i = 0; i < q; ++i) {
        pv.gamma[i] = std::clamp(std::tanh(th[1 + q + p + i]), -kGammaEdge, kGammaEdge);
        pv.alpha[i] = w[i] / aparch_kappa(pv.gamma[i], pv.delta);
      }
      std::copy_n(w.begin() + q, p, pv.beta.begin());
      break;
    }
    case Family::egarch: break;
  }
  return m;
}

std::vector<double> ParamTransform::from_model(const GarchModel& m) const {
  if (m.family != family_ || m.p != p_ || m.q != q_) {
    fail(ErrorKind::InvalidSpec, "warm start does not match the fitted family/order");
  }
  const auto& pv = m.params;
  const auto q = static_cast<std::size_t>(q_);
  const auto p = static_cast<std::size_t>(p_);
  std::vector<double> th(dim_);
  if (family_ == Family::egarch) {
    th[0] = pv.omega;
    std::copy_n(pv.alpha.begin(), q, th.begin() + 1);
    std::copy_n(pv.gamma.begin(), q, th.begin() + 1 + q);
    std::copy_n(pv.beta.begin(), p, th.begin() + 1 + 2 * q);
    return th;
  }
  th[0] = std::log(std::max(pv.omega, 1e-300));
  std::vector<double> shares;
  switch (family_) {
    case Family::sgarch:
      shares.insert(shares.end(), pv.alpha.begin(), pv.alpha.end());
      shares.insert(shares.end(), pv.beta.begin(), pv.beta.end());
      break;
    case Family::igarch:
      shares.insert(shares.end(), pv.alpha.begin(), pv.alpha.end());
      shares.insert(shares.end(), pv.beta.begin(), pv.beta.end() - 1);
      break;
    case Family::gjr:
      for (std::size_t i = 0; i < q; ++i) shares.push_back(pv.alpha[i] + 0.5 * pv.gamma[i]);
      shares.insert(shares.end(), pv.beta.begin(), pv.beta.end());
      for (std::size_t i = 0; i < q; ++i) {
        const double effective = std::max(pv.alpha[i] + 0.5 * pv.gamma[i], kTiny);
        th[1 + q + p + i] = logit(pv.alpha[i] / (2.0 * effective));
      }
      break;
    case Family::aparch:
      for (std::size_t i = 0; i < q; ++i) {
        shares.push_back(pv.alpha[i] * aparch_kappa(pv.gamma[i], pv.delta));
        th[1 + q + p + i] = std::atanh(std::clamp(pv.gamma[i], -0.999999, 0.999999));
      }
      shares.insert(shares.end(), pv.beta.begin(), pv.beta.end());
      th[dim_ - 1] = std::log(pv.delta);
      break;
    case Family::egarch: break;
  }
  logits_from_shares(shares, std::span(th).subspan(1, shares.size()));
  return th;
}

GarchModel initial_model(Family family, int p, int q, std::span<const double> returns) {
  const double v = presample_variance(returns);
  const auto qs = static_cast<std::size_t>(q);
  const auto ps = static_cast<std::size_t>(p);
  std::vector<double> alpha(qs, 0.05);
  std::vector<double> beta(ps, 0.9 / p);
  std::vector<double> gamma(has_gamma(family) ? qs : 0, 0.0);
  // keep the guess strictly stationary when 0.05 q + 0.9 would reach one
  const double total = 0.05 * q + 0.9;
  if (family != Family::egarch && family != Family::igarch && total >= 0.99) {
    const double s = 0.98 / total;
    for (double& a : alpha) a *= s;
    for (double& b : beta) b *= s;
  }
  if (family == Family::igarch) {
    std::fill(beta.begin(), beta.end(), (1.0 - 0.05 * q) / p);
  }
  double omega = 0.05 * v;
  if (family == Family::egarch) omega = (1.0 - 0.9) * std::log(v);
  GarchModel m{family, p, q, {omega, std::move(alpha), std::move(beta), std::move(gamma), 2.0}};
  return m;
}

namespace {

/// Free natural parameters in reporting order; igarch omits the last beta.
std::vector<double> free_values(const GarchModel& m) {
  std::vector<double> v = parameter_values(m);
  if (m.family == Family::igarch) v.pop_back();
  return v;
}

GarchModel with_free_values(const GarchModel& base, std::span<const double> v) {
  GarchModel m = base;
  auto& pv = m.params;
  std::size_t k = 0;
  pv.omega = v[k++];
  for (auto& a : pv.alpha) a = v[k++];
  if (has_gamma(m.family)) {
    for (auto& g : pv.gamma) g = v[k++];
  }
  const std::size_t nbeta = pv.beta.size() - (m.family == Family::igarch ? 1 : 0);
  for (std::size_t j = 0; j < nbeta; ++j) pv.beta[j] = v[k++];
  if (m.family == Family::igarch) {
    double used = 0.0;
    for (double a : pv.alpha) used += a;
    for (std::size_t j = 0; j < nbeta; ++j) used += pv.beta[j];
    pv.beta.back() = 1.0 - used;
  }
  if (m.family == Family::aparch) pv.delta = v[k++];
  return m;
}

}  // namespace

FitResult fit(Family family, int p, int q, const ReturnSeries& returns, const FitOptions& options) {
  const auto r = returns.values();
  if (r.size() < kMinFitObservations) {
    fail(ErrorKind::TooFewObservations,
         "fit needs >= " + std::to_string(kMinFitObservations) + " returns, got " +
             std::to_string(r.size()));
  }
  const ParamTransform transform(family, p, q);
  const double backcast = presample_variance(r);
  if (!(backcast > 0.0)) fail(ErrorKind::DegenerateSeries, "returns have zero variance");
  {
    double mean = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(r.size());
    bool constant = std::all_of(r.begin(), r.end(), [&](double x) { return x == r[0]; });
    if (constant) fail(ErrorKind::DegenerateSeries, "returns are constant at " + std::to_string(mean));
  }

  const Objective objective = [&](std::span<const double> th) {
    const GarchModel m = transform.to_model(th);
    const double ll = log_likelihood_floored(m, r, backcast, kTrialVarianceFloor);
    return std::isfinite(ll) ? -ll : std::numeric_limits<double>::infinity();
  };

  std::vector<std::vector<double>> starts;
  const std::vector<double> base = transform.from_model(initial_model(family, p, q, r));
  for (int s = 1; s <= std::max(1, options.starts); ++s) {
    std::vector<double> th = base;
    if (s > 1) {
      std::mt19937_64 rng(static_cast<std::uint64_t>(s));
      std::normal_distribution<double> normal(0.0, options.perturbation);
      for (double& x : th) x += normal(rng);
    }
    starts.push_back(std::move(th));
  }
  for (const auto& warm : options.warm_starts) starts.push_back(transform.from_model(warm));

  OptimizerOptions opt;
  opt.max_evaluations = options.max_evaluations;
  opt.tolerance = options.tolerance;

  OptimizerResult best;
  best.value = std::numeric_limits<double>::infinity();
  int iterations = 0;
  for (const auto& th0 : starts) {
    OptimizerResult res = minimize(objective, th0, opt);
    iterations += res.iterations;
    if (best.x.empty() || res.value < best.value) best = std::move(res);
  }

  FitResult out;
  out.model = transform.to_model(best.x);
  validate(out.model);
  out.n = r.size();
  out.k = free_parameter_count(family, p, q);
  out.log_likelihood = log_likelihood(out.model, returns);
  out.converged = best.converged && std::isfinite(out.log_likelihood);
  out.iterations = iterations;
  const std::size_t nparams = parameter_values(out.model).size();
  out.std_errors.assign(nparams, std::nullopt);
  out.p_values.assign(nparams, std::nullopt);
  try {
    ParameterInference inf = standard_errors(out, returns);
    out.std_errors = std::move(inf.std_errors);
    out.p_values = std::move(inf.p_values);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularHessian) throw;
  }
  return out;
}

ParameterInference standard_errors(const FitResult& fr, const ReturnSeries& returns) {
  const auto r = returns.values();
  const double backcast = presample_variance(r);
  const std::vector<double> x0 = free_values(fr.model);
  const auto dim = static_cast<Eigen::Index>(x0.size());
  auto ll = [&](const std::vector<double>& x) {
    return log_likelihood_floored(with_free_values(fr.model, x), r, backcast, kTrialVarianceFloor);
  };

  std::vector<double> h(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) h[i] = 1e-4 * std::max(std::abs(x0[i]), 1e-8);

  const double f0 = ll(x0);
  Eigen::MatrixXd hess(dim, dim);
  std::vector<double> x = x0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    x[ui] = x0[ui] + h[ui];
    const double up = ll(x);
    x[ui] = x0[ui] - h[ui];
    const double down = ll(x);
    x[ui] = x0[ui];
    hess(i, i) = (up - 2.0 * f0 + down) / (h[ui] * h[ui]);
    for (Eigen::Index j = 0; j < i; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      double acc = 0.0;
      for (int si : {1, -1}) {
        for (int sj : {1, -1}) {
          x[ui] = x0[ui] + si * h[ui];
          x[uj] = x0[uj] + sj * h[uj];
          acc += si * sj * ll(x);
        }
      }
      x[ui] = x0[ui];
      x[uj] = x0[uj];
      hess(i, j) = hess(j, i) = acc / (4.0 * h[ui] * h[uj]);
    }
  }
  if (!hess.allFinite()) fail(ErrorKind::SingularHessian, "non-finite Hessian");
  const Eigen::MatrixXd info = -hess;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(info);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
    fail(ErrorKind::SingularHessian, "Hessian is not negative definite");
  }
  const Eigen::MatrixXd cov =
      eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();

  const std::vector<double> values = parameter_values(fr.model);
  ParameterInference out;
  out.std_errors.assign(values.size(), std::nullopt);
  out.p_values.assign(values.size(), std::nullopt);
  // free parameters occupy the leading reporting slots, except igarch's implied last beta
  const std::size_t implied = fr.model.family == Family::igarch ? values.size() - 1 : values.size();
  for (std::size_t i = 0; i < x0.size(); ++i) {
    const double se = std::sqrt(cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
    out.std_errors[i] = se;
    out.p_values[i] = normal_two_sided(values[i] / se);
  }
  if (implied < values.size()) {
    // beta_p = 1 - sum(alpha) - sum(leading beta); omega (index 0) does not enter
    double var = 0.0;
    for (Eigen::Index i = 1; i < dim; ++i) {
      for (Eigen::Index j = 1; j < dim; ++j) var += cov(i, j);
    }
    if (var > 0.0) {
      out.std_errors[implied] = std::sqrt(var);
      out.p_values[implied] = normal_two_sided(values[implied] / std::sqrt(var));
    }
  }
  return out;
}

}  // namespace volkit
