#pragma once

// Independent oracles used by the tests: plain trapezoid/Simpson integration,
// prior-sampling Monte Carlo for posterior functionals, and exact binomial
// tails. These deliberately avoid the library's Gauss-Kronrod engine so the
// comparisons are dual-route.

#include <cmath>
#include <functional>
#include <vector>

#include "shrinktest/math.hpp"
#include "shrinktest/prior_families.hpp"
#include "shrinktest/rng.hpp"

namespace testsupport {

using shrinktest::Rng;
using shrinktest::ShrinkagePriorSpec;
using shrinktest::PriorFamily;

inline double trapezoid(const std::function<double(double)>& f, double a, double b,
                        std::size_t n) {
  double h = (b - a) / static_cast<double>(n);
  double s = 0.5 * (f(a) + f(b));
  for (std::size_t i = 1; i < n; ++i) s += f(a + h * static_cast<double>(i));
  return s * h;
}

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      std::size_t n /* even */) {
  double h = (b - a) / static_cast<double>(n);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < n; ++i) {
    s += f(a + h * static_cast<double>(i)) * ((i % 2) ? 4.0 : 2.0);
  }
  return s * h / 3.0;
}

// One draw of lambda^2 from the mixing density. The presets admit closed-form
// beta/exponential sampling, which keeps the oracle free of rejection loops.
inline double draw_lambda2(const ShrinkagePriorSpec& spec, Rng& rng) {
  if (spec.family == PriorFamily::TPBN) {
    double B;
    if (spec.alpha == 0.5 && spec.beta == 0.5) {
      double u = rng.uniform();
      double s = std::sin(0.5 * shrinktest::kPi * u);
      B = s * s;
    } else if (spec.alpha == 1.0) {
      B = 1.0 - std::pow(rng.uniform(), 1.0 / spec.beta);
    } else {
      throw std::runtime_error("test oracle supports TPBN presets only");
    }
    B = std::min(std::max(B, 1e-300), 1.0 - 1e-16);
    return B / (1.0 - B);
  }
  // GDP: gamma_i ~ Gamma(alpha, beta) (alpha = 1 for the preset), then
  // lambda^2 | gamma ~ Exp(gamma^2/2).
  if (spec.alpha != 1.0) throw std::runtime_error("test oracle supports GDP(1,beta) only");
  double gamma = rng.exponential() / spec.beta;
  return 2.0 * rng.exponential() / (gamma * gamma);
}

struct McWeight {
  double value = 0.0;
  double se = 0.0;
};

// Self-normalized Monte Carlo for E(1-kappa | x, tau, sigma) with the prior as
// proposal; the standard error comes from the ratio-estimator delta method.
inline McWeight mc_shrinkage_weight(const ShrinkagePriorSpec& spec, double x, double tau,
                                    double sigma, std::size_t n, Rng& rng) {
  double z2 = (x / sigma) * (x / sigma);
  std::vector<double> fs(n), bs(n);
  for (std::size_t k = 0; k < n; ++k) {
    double l2 = draw_lambda2(spec, rng);
    double s = 1.0 + l2 * tau * tau;
    fs[k] = std::exp(-0.5 * z2 / s) / std::sqrt(s);
    bs[k] = (s - 1.0) / s;
  }
  double A = 0.0, B = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    A += fs[k] * bs[k];
    B += fs[k];
  }
  McWeight out;
  out.value = A / B;
  double ss = 0.0;
  for (std::size_t k = 0; k < n; ++k) ss += shrinktest::sqr(fs[k] * (bs[k] - out.value));
  double sd = std::sqrt(ss / static_cast<double>(n - 1));
  out.se = sd * std::sqrt(static_cast<double>(n)) / B;
  return out;
}

// Monte Carlo for the one-observation marginal density m(x | tau, sigma).
inline McWeight mc_marginal_density(const ShrinkagePriorSpec& spec, double x, double tau,
                                    double sigma, std::size_t n, Rng& rng) {
  std::vector<double> vals(n);
  for (std::size_t k = 0; k < n; ++k) {
    double l2 = draw_lambda2(spec, rng);
    double var = sigma * sigma * (1.0 + l2 * tau * tau);
    vals[k] = std::exp(-0.5 * x * x / var) / std::sqrt(2.0 * shrinktest::kPi * var);
  }
  auto ms = shrinktest::mean_se(vals);
  return {ms.mean, ms.se};
}

// Exact binomial interval probability P(lo <= X <= hi), X ~ Bin(n, p).
inline double binom_interval(std::size_t n, double p, long lo, long hi) {
  double total = 0.0;
  double lq = std::log1p(-p), lp = std::log(p);
  double lgn = std::lgamma(static_cast<double>(n) + 1.0);
  lo = std::max(lo, 0L);
  hi = std::min(hi, static_cast<long>(n));
  for (long k = lo; k <= hi; ++k) {
    double kd = static_cast<double>(k);
    double logterm = lgn - std::lgamma(kd + 1.0) - std::lgamma(static_cast<double>(n) - kd + 1.0) +
                     kd * lp + (static_cast<double>(n) - kd) * lq;
    total += std::exp(logterm);
  }
  return total;
}

}  // namespace testsupport
