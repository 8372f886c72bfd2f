#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "shrinktest/errors.hpp"
#include "shrinktest/math.hpp"
#include "shrinktest/quadrature.hpp"
#include "shrinktest/spline.hpp"

namespace shrinktest {

// Mixing densities of the form pi(lambda^2) = K * (lambda^2)^(-a-1) * L(lambda^2)
// with L slowly varying. Two families are built in:
//   TPBN(alpha, beta): L(t) = (1 + 1/t)^-(alpha+beta),        a = beta
//   GDP(alpha, beta):  L(t) = 2^(a-1) Int_0^inf exp(-beta*sqrt(2u/t)) e^-u u^(a+1-1) du
//                      with a = alpha/2 (exponent in the integrand uses alpha/2)
// Both L are nondecreasing with a finite positive limit, so L_sup = L_limit.

enum class PriorFamily { TPBN, GDP };

inline const char* family_name(PriorFamily f) {
  return f == PriorFamily::TPBN ? "tpbn" : "gdp";
}

namespace detail {

// log(1 + e^u) without overflow.
inline double softplus(double u) {
  if (u > 36.0) return u;
  if (u < -36.0) return std::exp(u);
  return std::log1p(std::exp(u));
}

inline double gdp_log_integrand_u(double u, double t, double alpha, double beta) {
  return -beta * std::sqrt(2.0 * u / t) - u + 0.5 * alpha * std::log(u);
}

// L(t) for the GDP family by adaptive Gauss-Kronrod on (0,inf) mapped through
// u = s/(1-s).
inline double gdp_eval_L(double t, double alpha, double beta, const QuadratureSettings& qs) {
  auto f = [&](double s) {
    double om = 1.0 - s;
    if (!(om > 0.0) || !(s > 0.0)) return 0.0;
    double u = s / om;
    if (!std::isfinite(u)) return 0.0;
    double lg = gdp_log_integrand_u(u, t, alpha, beta);
    double v = std::exp(lg);
    return v / (om * om);
  };
  // Seed segment edges at the integrand's small-t spike (u* ~ alpha^2 t / (2 beta^2))
  // and at the large-t bulk (u ~ alpha/2 + 1). Edges are kept an ulp away from
  // the s = 1 endpoint where the map u = s/(1-s) blows up.
  double ustar = alpha * alpha * t / (2.0 * beta * beta);
  std::vector<double> us = {ustar / 30.0, ustar, 30.0 * ustar, 1e-4, 0.1, 1.0,
                            0.5 * alpha + 1.0, 3.0 * (0.5 * alpha + 2.0), 50.0};
  std::vector<double> pts = {0.0, 1.0};
  for (double u : us) {
    if (u > 0 && std::isfinite(u)) pts.push_back(std::min(u / (1.0 + u), 1.0 - 1e-12));
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  auto res = integrate_segments(f, pts, qs).or_throw("GDP L-integral did not converge");
  return std::pow(2.0, 0.5 * alpha - 1.0) * res.value;
}

// Truncated small-t expansion of the GDP L: with w = sqrt(2u/t),
//   L(t) = 2^(a-1) (t/2)^(a) t Int w^(alpha+1) e^(-beta w) e^(-t w^2/2) dw,
// and the last exponential expanded to second order. Accurate to machine
// precision for t <= e^-40.
inline double gdp_log_L_small_t(double log_t, double alpha, double beta) {
  double t = std::exp(log_t);
  double g0 = std::lgamma(alpha + 2.0);
  double r1 = -(0.5 * t) * std::exp(std::lgamma(alpha + 4.0) - g0) / (beta * beta);
  double r2 = (t * t / 8.0) * std::exp(std::lgamma(alpha + 6.0) - g0) / std::pow(beta, 4.0);
  double log_I = g0 - (alpha + 2.0) * std::log(beta) + std::log1p(r1 + r2);
  return (0.5 * alpha - 1.0) * std::log(2.0) + 0.5 * alpha * (log_t - std::log(2.0)) + log_t +
         log_I;
}

// Lookup table for log L(e^y) of the GDP family; the posterior quadratures
// evaluate L thousands of times per integral, so the direct nested quadrature
// is cached behind a spline once per spec.
class GdpLogLTable {
 public:
  GdpLogLTable(double alpha, double beta, double log_L_limit)
      : alpha_(alpha), beta_(beta), log_L_limit_(log_L_limit) {
    QuadratureSettings qs;
    qs.rel_tol = 1e-10;
    qs.abs_tol = 1e-300;
    qs.max_subdivisions = 400;
    const double y0 = -40.0, y1 = 95.0;
    const int n = 3001;
    const double dy = (y1 - y0) / (n - 1);
    std::vector<double> vals(n);
    for (int i = 0; i < n; ++i) {
      vals[i] = std::log(gdp_eval_L(std::exp(y0 + dy * i), alpha_, beta_, qs));
    }
    // One-sided 4th-order end slopes.
    auto end_slope = [&](int i0, int step) {
      return step * (-25.0 * vals[i0] + 48.0 * vals[i0 + step] - 36.0 * vals[i0 + 2 * step] +
                     16.0 * vals[i0 + 3 * step] - 3.0 * vals[i0 + 4 * step]) /
             (12.0 * dy);
    };
    spline_ = UniformCubicSpline(y0, dy, std::move(vals), end_slope(0, 1), end_slope(n - 1, -1));
  }

  double log_L(double y) const {
    if (y < spline_.x_min()) return gdp_log_L_small_t(y, alpha_, beta_);
    if (y > spline_.x_max()) return log_L_limit_;
    return spline_(y);
  }

 private:
  double alpha_, beta_, log_L_limit_;
  UniformCubicSpline spline_;
};

}  // namespace detail

struct ShrinkagePriorSpec {
  PriorFamily family = PriorFamily::TPBN;
  double alpha = 0.5;
  double beta = 0.5;
  double a = 0.5;        // tail index of the mixing density
  double K = 0.0;        // normalizing constant
  double L_limit = 1.0;  // lim_{t->inf} L(t)
  double L_sup = 1.0;    // sup_t L(t); equals L_limit by monotonicity
  std::string warning;   // set when hyperparameters fall outside the risk theory

  std::shared_ptr<const detail::GdpLogLTable> gdp_table;  // null for TPBN

  // log L(t) with y = log t. TPBN is closed form; GDP goes through the table.
  double log_L(double y) const {
    if (family == PriorFamily::TPBN) return -(alpha + beta) * detail::softplus(-y);
    return gdp_table->log_L(y);
  }

  std::string label() const {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s(%g,%g)", family_name(family), alpha, beta);
    return buf;
  }

  bool operator==(const ShrinkagePriorSpec& o) const {
    return family == o.family && alpha == o.alpha && beta == o.beta;
  }
};

inline ShrinkagePriorSpec make_prior(PriorFamily family, double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw invalid_argument_error("prior hyperparameters must be positive");
  }
  ShrinkagePriorSpec s;
  s.family = family;
  s.alpha = alpha;
  s.beta = beta;
  if (family == PriorFamily::TPBN) {
    s.a = beta;
    s.K = std::exp(std::lgamma(alpha + beta) - std::lgamma(alpha) - std::lgamma(beta));
    s.L_limit = 1.0;
    if (beta >= 1.0) {
      s.warning = "TPBN beta >= 1: outside conditions (I)/(II) of the risk theory";
    }
  } else {
    s.a = 0.5 * alpha;
    s.K = std::exp(alpha * std::log(beta) - std::lgamma(alpha));
    s.L_limit = std::pow(2.0, 0.5 * alpha - 1.0) * std::tgamma(0.5 * alpha + 1.0);
    s.gdp_table = std::make_shared<detail::GdpLogLTable>(alpha, beta, std::log(s.L_limit));
    if (s.a >= 1.0) {
      s.warning = "GDP alpha/2 >= 1: outside conditions (I)/(II) of the risk theory";
    }
  }
  s.L_sup = s.L_limit;
  return s;
}

inline ShrinkagePriorSpec horseshoe() { return make_prior(PriorFamily::TPBN, 0.5, 0.5); }
inline ShrinkagePriorSpec strawderman_berger() { return make_prior(PriorFamily::TPBN, 1.0, 0.5); }
inline ShrinkagePriorSpec normal_exponential_gamma(double beta = 0.6) {
  return make_prior(PriorFamily::TPBN, 1.0, beta);
}
inline ShrinkagePriorSpec standard_double_pareto() { return make_prior(PriorFamily::GDP, 1.0, 1.0); }

// L evaluated by its defining formula: the closed form for TPBN, adaptive
// quadrature of the one-dimensional integral for GDP.
inline double eval_L(const ShrinkagePriorSpec& spec, double t,
                     const QuadratureSettings& qs = {}) {
  if (!(t > 0.0)) throw invalid_argument_error("eval_L requires t > 0");
  if (spec.family == PriorFamily::TPBN) {
    return std::pow(1.0 + 1.0 / t, -(spec.alpha + spec.beta));
  }
  return detail::gdp_eval_L(t, spec.alpha, spec.beta, qs);
}

inline double eval_mixing_density(const ShrinkagePriorSpec& spec, double lambda2,
                                  const QuadratureSettings& qs = {}) {
  if (!(lambda2 > 0.0)) throw invalid_argument_error("eval_mixing_density requires lambda2 > 0");
  return spec.K * std::pow(lambda2, -spec.a - 1.0) * eval_L(spec, lambda2, qs);
}

inline double log_mixing_density(const ShrinkagePriorSpec& spec, double y /* = log lambda2 */) {
  return std::log(spec.K) - (spec.a + 1.0) * y + spec.log_L(y);
}

}  // namespace shrinktest
