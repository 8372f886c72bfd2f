#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "shrinktest/errors.hpp"
#include "shrinktest/math.hpp"
#include "shrinktest/prior_families.hpp"
#include "shrinktest/quadrature.hpp"

namespace shrinktest {

// Posterior functionals of the shrinkage coefficient kappa = 1/(1 + lambda^2 tau^2)
// given one observation. Everything is computed in the t-parameterization
// t = (1/tau^2)(1/kappa - 1) = lambda^2, where the kappa-space integrals become
//
//   Z = tau^(-2a) * Int_0^inf (1+t tau^2)^(-1/2) t^(-a-1) L(t) e^(-z^2/(2(1+t tau^2))) dt,
//
// with z = x/sigma. The t-form integrand is the proper mixing density times
// bounded smooth factors, so there is no endpoint singularity at kappa = 1.
// E(1-kappa | x, tau) carries the extra factor t tau^2/(1+t tau^2).

struct PosteriorQuery {
  double x = 0.0;
  double tau = 1.0;
  double sigma = 1.0;
};

inline void validate(const PosteriorQuery& q) {
  if (!std::isfinite(q.x)) throw invalid_argument_error("x must be finite");
  if (!(q.tau > 0.0)) throw invalid_argument_error("tau must be positive");
  if (!(q.sigma > 0.0)) throw invalid_argument_error("sigma must be positive");
}

// Unnormalized log posterior density of kappa:
//   (a - 1/2) log kappa - (a+1) log(1-kappa) + log L((1/tau^2)(1/kappa - 1)) - kappa (x/sigma)^2 / 2
inline double posterior_kappa_logdensity_unnorm(const ShrinkagePriorSpec& spec,
                                                const PosteriorQuery& q, double kappa) {
  validate(q);
  if (!(kappa > 0.0 && kappa < 1.0)) {
    throw invalid_argument_error("kappa must lie in (0,1)");
  }
  double z = q.x / q.sigma;
  double log_t = std::log1p(-kappa) - std::log(kappa) - 2.0 * std::log(q.tau);
  return (spec.a - 0.5) * std::log(kappa) - (spec.a + 1.0) * std::log1p(-kappa) +
         spec.log_L(log_t) - 0.5 * kappa * z * z;
}

namespace detail {

enum class CoreKind { Denominator, Numerator, TailLow, TailHigh };
// TailLow integrates t in (T, inf)  -> Pr(kappa < eps), T = (1/tau^2)(1/eps - 1)
// TailHigh integrates t in (0, T)   -> Pr(kappa > eta), T = (1/tau^2)(1/eta - 1)

struct LogIntegral {
  double log_value = -std::numeric_limits<double>::infinity();
  double rel_error = 0.0;
  bool converged = true;
};

// Log of the t-integrand at y = log t (includes the jacobian t from dt = t dy).
struct CoreIntegrand {
  const ShrinkagePriorSpec* spec;
  double z2;
  double two_log_tau;
  bool numerator;

  double operator()(double y) const {
    double u = y + two_log_tau;            // log(t tau^2)
    double sp = softplus(u);               // log(1 + t tau^2)
    double v = -spec->a * y + spec->log_L(y) - 0.5 * sp - 0.5 * z2 * std::exp(-sp);
    if (numerator) v += u - sp;            // log of t tau^2/(1+t tau^2)
    return v;
  }
};

// Breakpoints of the integrand in y = log t: the prior bulk (t ~ 1), the
// shrinkage transition (t ~ 1/tau^2) and the likelihood turn-on (t ~ z^2/tau^2).
// Around t = 1/tau^2 a geometric ladder keeps the per-panel variation bounded
// when z^2 is large (the exponential factor climbs with slope up to z^2/4 there).
inline std::vector<double> core_breakpoints(double z2, double log_tau) {
  std::vector<double> pts{0.0};
  double y_tau = -2.0 * log_tau;
  pts.push_back(y_tau);
  if (z2 > 0.0) {
    double y_z = std::log(z2) - 2.0 * log_tau;
    pts.push_back(y_z);
    double w = std::clamp(120.0 / std::max(z2, 30.0), 0.01, 4.0);
    for (int j = 0; j < 12 && w * (1 << j) < 16.0; ++j) {
      pts.push_back(y_tau + w * (1 << j));
      pts.push_back(y_tau - w * (1 << j));
      pts.push_back(y_z + w * (1 << j));
      pts.push_back(y_z - w * (1 << j));
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

template <class F>
LogIntegral log_integrate_core(F&& logf, std::vector<double> pts, bool extend_left,
                               bool extend_right, const QuadratureSettings& qs) {
  // Shift by the max of the log-integrand over the panel skeleton.
  double M = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    M = std::max(M, logf(pts[i]));
    if (i + 1 < pts.size()) M = std::max(M, logf(0.5 * (pts[i] + pts[i + 1])));
  }
  if (!std::isfinite(M)) M = 0.0;
  auto f = [&](double y) { return std::exp(logf(y) - M); };

  QuadratureSettings inner = qs;
  inner.abs_tol = std::max(qs.abs_tol, 1e-14);
  auto res = integrate_segments(f, pts, inner);
  double total = res.value, err = res.error;
  bool converged = res.converged;

  const double step = 15.0;
  if (extend_left) {
    double lo = pts.front();
    for (int i = 0; i < 40; ++i) {
      auto ext = integrate_adaptive(f, lo - step, lo, inner);
      total += ext.value;
      err += ext.error;
      lo -= step;
      if (std::abs(ext.value) <= std::max(1e-16, 1e-13 * std::abs(total))) break;
    }
  }
  if (extend_right) {
    double hi = pts.back();
    for (int i = 0; i < 40; ++i) {
      auto ext = integrate_adaptive(f, hi, hi + step, inner);
      total += ext.value;
      err += ext.error;
      hi += step;
      if (std::abs(ext.value) <= std::max(1e-16, 1e-13 * std::abs(total))) break;
    }
  }

  LogIntegral out;
  if (total > 0.0) {
    out.log_value = M + std::log(total);
    out.rel_error = err / total;
  }
  out.converged = converged && (total <= 0.0 || err <= std::max(qs.rel_tol * total, 1e-12));
  return out;
}

// log of Int (1+t tau^2)^(-1/2) t^(-a-1) L(t) e^(-z^2/(2(1+t tau^2))) [b(t)] dt
// over the full axis or one side of the split point t_split.
inline LogIntegral core_integral(const ShrinkagePriorSpec& spec, double z, double tau,
                                 CoreKind kind, double t_split,
                                 const QuadratureSettings& qs) {
  CoreIntegrand logf{&spec, z * z, 2.0 * std::log(tau),
                     kind == CoreKind::Numerator};
  std::vector<double> pts = core_breakpoints(z * z, std::log(tau));
  bool left = true, right = true;
  if (kind == CoreKind::TailLow || kind == CoreKind::TailHigh) {
    double ys = std::log(t_split);
    std::vector<double> kept;
    kept.push_back(ys);
    for (double p : pts) {
      if (kind == CoreKind::TailLow ? p > ys : p < ys) kept.push_back(p);
    }
    std::sort(kept.begin(), kept.end());
    (kind == CoreKind::TailLow ? left : right) = false;
    pts = std::move(kept);
  }
  // Pad single-point skeletons so integrate_segments has a panel to start from.
  if (pts.size() == 1) pts.push_back(pts.front() + (kind == CoreKind::TailLow ? 1.0 : -1.0));
  std::sort(pts.begin(), pts.end());
  return log_integrate_core(logf, std::move(pts), left, right, qs);
}

struct WeightParts {
  double log_numerator;
  double log_denominator;
};

inline WeightParts weight_parts(const ShrinkagePriorSpec& spec, double z, double tau,
                                const QuadratureSettings& qs) {
  auto den = core_integral(spec, z, tau, CoreKind::Denominator, 0.0, qs);
  if (!den.converged) {
    throw numeric_error("shrinkage-weight denominator quadrature failed", den.rel_error);
  }
  auto num = core_integral(spec, z, tau, CoreKind::Numerator, 0.0, qs);
  if (!num.converged) {
    throw numeric_error("shrinkage-weight numerator quadrature failed", num.rel_error);
  }
  return {num.log_value, den.log_value};
}

}  // namespace detail

// E(1 - kappa | x, tau, sigma), the posterior shrinkage weight in [0,1].
inline double mean_shrinkage_weight(const ShrinkagePriorSpec& spec, const PosteriorQuery& q,
                                    const QuadratureSettings& qs = {}) {
  validate(q);
  auto parts = detail::weight_parts(spec, std::abs(q.x) / q.sigma, q.tau, qs);
  return std::clamp(std::exp(parts.log_numerator - parts.log_denominator), 0.0, 1.0);
}

// Pr(kappa < eps | x, tau, sigma).
inline double tail_prob_kappa_below(const ShrinkagePriorSpec& spec, const PosteriorQuery& q,
                                    double eps, const QuadratureSettings& qs = {}) {
  validate(q);
  if (!(eps > 0.0 && eps < 1.0)) throw invalid_argument_error("eps must lie in (0,1)");
  double z = std::abs(q.x) / q.sigma;
  double T = (1.0 / (q.tau * q.tau)) * (1.0 / eps - 1.0);
  auto den = detail::core_integral(spec, z, q.tau, detail::CoreKind::Denominator, 0.0, qs);
  auto tail = detail::core_integral(spec, z, q.tau, detail::CoreKind::TailLow, T, qs);
  if (!den.converged || !tail.converged) {
    throw numeric_error("tail probability quadrature failed",
                        std::max(den.rel_error, tail.rel_error));
  }
  return std::clamp(std::exp(tail.log_value - den.log_value), 0.0, 1.0);
}

// Pr(kappa > eta | x, tau, sigma).
inline double tail_prob_kappa_above(const ShrinkagePriorSpec& spec, const PosteriorQuery& q,
                                    double eta, const QuadratureSettings& qs = {}) {
  validate(q);
  if (!(eta > 0.0 && eta < 1.0)) throw invalid_argument_error("eta must lie in (0,1)");
  double z = std::abs(q.x) / q.sigma;
  double T = (1.0 / (q.tau * q.tau)) * (1.0 / eta - 1.0);
  auto den = detail::core_integral(spec, z, q.tau, detail::CoreKind::Denominator, 0.0, qs);
  auto tail = detail::core_integral(spec, z, q.tau, detail::CoreKind::TailHigh, T, qs);
  if (!den.converged || !tail.converged) {
    throw numeric_error("tail probability quadrature failed",
                        std::max(den.rel_error, tail.rel_error));
  }
  return std::clamp(std::exp(tail.log_value - den.log_value), 0.0, 1.0);
}

// E(mu | x, tau, sigma) = E(1-kappa | x, tau, sigma) * x.
inline double posterior_mean_mu(const ShrinkagePriorSpec& spec, const PosteriorQuery& q,
                                const QuadratureSettings& qs = {}) {
  return mean_shrinkage_weight(spec, q, qs) * q.x;
}

// log of the normalizer Z of the unnormalized kappa density (the denominator
// integral including its tau^(-2a) prefactor). Test scaffolding for the
// normalization invariant.
inline double log_posterior_kappa_normalizer(const ShrinkagePriorSpec& spec,
                                             const PosteriorQuery& q,
                                             const QuadratureSettings& qs = {}) {
  validate(q);
  auto den = detail::core_integral(spec, std::abs(q.x) / q.sigma, q.tau,
                                   detail::CoreKind::Denominator, 0.0, qs);
  if (!den.converged) throw numeric_error("normalizer quadrature failed", den.rel_error);
  return -2.0 * spec.a * std::log(q.tau) + den.log_value;
}

// Smallest x* >= 0 with mean_shrinkage_weight(x*) = level, found by bisection
// on |x| (the weight is nondecreasing in x^2). |Delta x| <= 1e-10 at exit.
inline double weight_threshold_x(const ShrinkagePriorSpec& spec, double tau, double sigma,
                                 double level, const QuadratureSettings& qs = {}) {
  if (!(tau > 0.0) || !(sigma > 0.0)) throw invalid_argument_error("tau, sigma must be positive");
  if (!(level > 0.0 && level < 1.0)) throw invalid_argument_error("level must lie in (0,1)");
  auto w = [&](double x) { return mean_shrinkage_weight(spec, {x, tau, sigma}, qs); };
  if (w(0.0) >= level) {
    throw no_crossing_error("weight at x = 0 already exceeds the requested level");
  }
  double hi = sigma;
  while (w(hi) <= level) {
    hi *= 2.0;
    if (hi > 1e9) throw no_crossing_error("weight does not reach the requested level");
  }
  double lo = (hi > sigma) ? hi / 2.0 : 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-10; ++i) {
    double mid = 0.5 * (lo + hi);
    (w(mid) > level ? hi : lo) = mid;
  }
  if (hi - lo > 1e-10) throw numeric_error("threshold bisection did not converge", hi - lo);
  return 0.5 * (lo + hi);
}

}  // namespace shrinktest
