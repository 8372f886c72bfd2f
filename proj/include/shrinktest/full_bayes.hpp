#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "shrinktest/math.hpp"
#include "shrinktest/posterior_shrinkage.hpp"
#include "shrinktest/shrinkage_tables.hpp"

namespace shrinktest {

// Deterministic tensor-grid marginalization over (tau, sigma) under
// tau ~ C+(0,1), pi(sigma) proportional to 1/sigma. The grid replaces MCMC:
// the hyperparameter space is 2-D and quadrature gives reproducible output.

struct HyperGrid {
  std::vector<double> log_tau;
  std::vector<double> log_sigma;
  std::vector<double> tau_weights;    // trapezoid weights in log-space
  std::vector<double> sigma_weights;

  static std::vector<double> log_nodes(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
  }

  static std::vector<double> trapezoid_weights(const std::vector<double>& nodes) {
    std::vector<double> w(nodes.size(), 0.0);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      double h = 0.5 * (nodes[i + 1] - nodes[i]);
      w[i] += h;
      w[i + 1] += h;
    }
    return w;
  }

  static HyperGrid make_default(std::size_t n_tau = 96, std::size_t n_sigma = 48,
                                double tau_lo = 1e-5, double tau_hi = 1e2,
                                double sigma_lo = 0.2, double sigma_hi = 5.0) {
    HyperGrid g;
    g.log_tau = log_nodes(tau_lo, tau_hi, n_tau);
    g.log_sigma = log_nodes(sigma_lo, sigma_hi, n_sigma);
    g.tau_weights = trapezoid_weights(g.log_tau);
    g.sigma_weights = trapezoid_weights(g.log_sigma);
    return g;
  }

  void validate() const {
    if (log_tau.size() < 2 || log_sigma.size() < 2) {
      throw invalid_argument_error("hyper grid needs at least 2 nodes per axis");
    }
    for (std::size_t i = 0; i + 1 < log_tau.size(); ++i) {
      if (!(log_tau[i + 1] > log_tau[i])) {
        throw invalid_argument_error("tau nodes must be strictly increasing");
      }
    }
    for (std::size_t i = 0; i + 1 < log_sigma.size(); ++i) {
      if (!(log_sigma[i + 1] > log_sigma[i])) {
        throw invalid_argument_error("sigma nodes must be strictly increasing");
      }
    }
  }
};

struct HyperPosterior {
  std::size_t n_tau = 0, n_sigma = 0;
  std::vector<double> log_post;    // joint log posterior value at node (i_tau * n_sigma + i_sigma)
  std::vector<double> log_weight;  // log quadrature weight of the node
  double log_normalizer = 0.0;
  std::vector<double> tau_marginal;           // normalized mass per tau node
  std::array<double, 5> tau_quantiles{};      // 5%, 25%, 50%, 75%, 95%
  std::vector<double> tau_nodes;

  double node_mass(std::size_t j, std::size_t k) const {
    return std::exp(log_post[j * n_sigma + k] + log_weight[j * n_sigma + k] - log_normalizer);
  }
};

// log of the one-observation marginal m(x | tau, sigma)
//   = Int phi(x; 0, sigma^2 (1 + lambda^2 tau^2)) pi(lambda^2) d lambda^2
//   = K / (sigma sqrt(2 pi)) * Int (1+t tau^2)^(-1/2) t^(-a-1) L(t) e^(-z^2/(2(1+t tau^2))) dt.
inline double marginal_loglik_one(const ShrinkagePriorSpec& spec, double x, double tau,
                                  double sigma, const QuadratureSettings& qs = {}) {
  if (!(tau > 0.0) || !(sigma > 0.0)) throw invalid_argument_error("tau, sigma must be positive");
  auto den = detail::core_integral(spec, std::abs(x) / sigma, tau,
                                   detail::CoreKind::Denominator, 0.0, qs);
  if (!den.converged) throw numeric_error("marginal likelihood quadrature failed", den.rel_error);
  return std::log(spec.K) - std::log(sigma) - kLogSqrt2Pi + den.log_value;
}

namespace detail {

inline double log_half_cauchy(double tau) {
  return std::log(2.0 / kPi) - std::log1p(tau * tau);
}

}  // namespace detail

inline HyperPosterior hyper_posterior(const ShrinkagePriorSpec& spec, std::span<const double> xs,
                                      const HyperGrid& grid, const QuadratureSettings& qs = {},
                                      CurveCache* cache = nullptr) {
  if (xs.empty()) throw invalid_argument_error("hyper_posterior needs at least one observation");
  grid.validate();
  CurveCache local;
  CurveCache& curves = cache ? *cache : local;

  const std::size_t n_tau = grid.log_tau.size(), n_sigma = grid.log_sigma.size();
  const double n = static_cast<double>(xs.size());
  HyperPosterior post;
  post.n_tau = n_tau;
  post.n_sigma = n_sigma;
  post.log_post.assign(n_tau * n_sigma, 0.0);
  post.log_weight.assign(n_tau * n_sigma, 0.0);
  post.tau_nodes.resize(n_tau);

  for (std::size_t j = 0; j < n_tau; ++j) {
    double tau = std::exp(grid.log_tau[j]);
    post.tau_nodes[j] = tau;
    auto curve = curves.get(spec, tau, /*with_marginal=*/true, qs);
    for (std::size_t k = 0; k < n_sigma; ++k) {
      double sigma = std::exp(grid.log_sigma[k]);
      double ll = n * (std::log(spec.K) - grid.log_sigma[k] - kLogSqrt2Pi);
      for (double x : xs) ll += curve->log_core(std::abs(x) / sigma);
      // Prior in (log tau, log sigma) coordinates: half-Cauchy density with its
      // jacobian tau; pi(sigma) ~ 1/sigma times the jacobian sigma is constant.
      double v = ll + detail::log_half_cauchy(tau) + grid.log_tau[j];
      post.log_post[j * n_sigma + k] = v;
      post.log_weight[j * n_sigma + k] = std::log(grid.tau_weights[j] * grid.sigma_weights[k]);
    }
  }

  std::vector<double> terms(n_tau * n_sigma);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    terms[i] = post.log_post[i] + post.log_weight[i];
  }
  post.log_normalizer = log_sum_exp(terms);
  if (!std::isfinite(post.log_normalizer)) {
    throw degenerate_posterior_error("hyperposterior underflowed at every grid node");
  }

  // Bounds-escape guard on the tau axis (the axis whose range is chosen to
  // cover the sparsity regimes). The sigma edges are exempt: exactly-zero
  // observations legitimately drive sigma to its lower edge, where the
  // improper 1/sigma posterior has no proper limit but the tau marginal and
  // the mixed weights remain well defined.
  double boundary_mass = 0.0;
  for (std::size_t j : {std::size_t{0}, n_tau - 1}) {
    for (std::size_t k = 0; k < n_sigma; ++k) boundary_mass += post.node_mass(j, k);
  }
  if (boundary_mass > 1e-3) {
    throw degenerate_posterior_error(
        "posterior mass " + std::to_string(boundary_mass) + " escaped to the tau grid boundary");
  }

  post.tau_marginal.assign(n_tau, 0.0);
  for (std::size_t j = 0; j < n_tau; ++j) {
    std::vector<double> row(n_sigma);
    for (std::size_t k = 0; k < n_sigma; ++k) {
      row[k] = post.log_post[j * n_sigma + k] + post.log_weight[j * n_sigma + k];
    }
    post.tau_marginal[j] = std::exp(log_sum_exp(row) - post.log_normalizer);
  }

  const double probs[5] = {0.05, 0.25, 0.50, 0.75, 0.95};
  double cum = 0.0;
  std::size_t j = 0;
  for (int qi = 0; qi < 5; ++qi) {
    while (j < n_tau && cum + post.tau_marginal[j] < probs[qi]) {
      cum += post.tau_marginal[j];
      ++j;
    }
    if (j >= n_tau) {
      post.tau_quantiles[qi] = post.tau_nodes[n_tau - 1];
      continue;
    }
    // Linear interpolation in log tau inside the node's mass.
    double frac = (probs[qi] - cum) / std::max(post.tau_marginal[j], 1e-300);
    double lo = (j == 0) ? grid.log_tau[0] : 0.5 * (grid.log_tau[j - 1] + grid.log_tau[j]);
    double hi = (j + 1 == n_tau) ? grid.log_tau[n_tau - 1]
                                 : 0.5 * (grid.log_tau[j] + grid.log_tau[j + 1]);
    post.tau_quantiles[qi] = std::exp(lo + frac * (hi - lo));
  }
  return post;
}

// Full-Bayes shrinkage weights: for each observation, the posterior-mixture
// of E(1-kappa | x_i, tau, sigma) over the (tau, sigma) grid.
inline std::vector<double> fb_shrinkage_weights(const ShrinkagePriorSpec& spec,
                                                std::span<const double> xs, const HyperGrid& grid,
                                                const QuadratureSettings& qs = {},
                                                CurveCache* cache = nullptr,
                                                HyperPosterior* post_out = nullptr) {
  CurveCache local;
  CurveCache& curves = cache ? *cache : local;
  HyperPosterior post = hyper_posterior(spec, xs, grid, qs, &curves);

  const std::size_t n_tau = post.n_tau, n_sigma = post.n_sigma;
  std::vector<double> acc(xs.size(), 0.0);
  for (std::size_t j = 0; j < n_tau; ++j) {
    double row_mass = post.tau_marginal[j];
    if (row_mass < 1e-15) continue;
    auto curve = curves.get(spec, post.tau_nodes[j], /*with_marginal=*/true, qs);
    for (std::size_t k = 0; k < n_sigma; ++k) {
      double mass = post.node_mass(j, k);
      if (mass < 1e-16) continue;
      double sigma = std::exp(grid.log_sigma[k]);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        acc[i] += mass * curve->weight(std::abs(xs[i]) / sigma);
      }
    }
  }
  for (double& w : acc) w = std::clamp(w, 0.0, 1.0);
  if (post_out) *post_out = std::move(post);
  return acc;
}

}  // namespace shrinktest
