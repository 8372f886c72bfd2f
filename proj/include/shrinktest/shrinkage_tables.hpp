#pragma once

#include <cmath>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "shrinktest/posterior_shrinkage.hpp"

namespace shrinktest {

// Spline tables of the two posterior functionals needed in bulk by the
// simulation study and the hyperposterior grid, for one fixed (spec, tau):
//
//   weight(z)      = E(1 - kappa | z, tau, 1)
//   log_core(z)    = log Int (1+t tau^2)^(-1/2) t^(-a-1) L(t) e^(-z^2/(2(1+t tau^2))) dt
//
// with z = |x|/sigma. log_core is tabulated through G(s) = log_core(sqrt(s)) + s/2
// on s = z^2: dG/ds = weight(z)/2 in [0, 1/2] and all higher s-derivatives are
// cumulants of a [0,1] variable, so a clamped spline on s converges fast and the
// exact end slopes are available for free. Beyond z_max the polynomial tail
//   core(z) ~ tau^(2a) L(z^2/tau^2) 2^(a+1/2) Gamma(a+1/2) z^(-(2a+1))
// is used, shifted to match the table at the boundary.
class ShrinkageCurve {
 public:
  ShrinkageCurve(ShrinkagePriorSpec spec, double tau, bool with_marginal,
                 double z_max = 64.0, QuadratureSettings qs = {})
      : spec_(std::move(spec)), tau_(tau), z_max_(z_max), qs_(qs) {
    const double dz = 0.04;
    const int nw = static_cast<int>(std::lround(z_max / dz)) + 1;
    std::vector<double> wv(nw);
    for (int i = 0; i < nw; ++i) wv[i] = exact_weight(dz * i);
    double w_at_zmax = wv[nw - 1];
    double right = (-25.0 * wv[nw - 1] + 48.0 * wv[nw - 2] - 36.0 * wv[nw - 3] +
                    16.0 * wv[nw - 4] - 3.0 * wv[nw - 5]) /
                   (-12.0 * dz);
    weight_spline_ = UniformCubicSpline(0.0, dz, std::move(wv), 0.0, right);

    if (with_marginal) {
      const double ds = 0.5;
      const int ns = static_cast<int>(std::lround(z_max * z_max / ds)) + 1;
      std::vector<double> gv(ns);
      for (int i = 0; i < ns; ++i) {
        double s = ds * i;
        gv[i] = exact_log_core(std::sqrt(s)) + 0.5 * s;
      }
      double g_zmax = gv[ns - 1];
      core_spline_ = UniformCubicSpline(0.0, ds, std::move(gv), 0.5 * weight_spline_(0.0),
                                        0.5 * w_at_zmax);
      // Constant offset making the tail formula continuous at z_max.
      tail_shift_ = (g_zmax - 0.5 * z_max * z_max) - tail_log_core_raw(z_max);
      has_marginal_ = true;
    }
  }

  const ShrinkagePriorSpec& spec() const { return spec_; }
  double tau() const { return tau_; }

  double weight(double z) const {
    z = std::abs(z);
    if (z > z_max_) return exact_weight(z);
    return std::clamp(weight_spline_(z), 0.0, 1.0);
  }

  double log_core(double z) const {
    z = std::abs(z);
    if (!has_marginal_) return exact_log_core(z);
    if (z > z_max_) return tail_log_core_raw(z) + tail_shift_;
    double s = z * z;
    return core_spline_(s) - 0.5 * s;
  }

  // log of the one-observation marginal density m(x | tau, sigma).
  double log_marginal(double x, double sigma) const {
    return std::log(spec_.K) - std::log(sigma) - kLogSqrt2Pi + log_core(std::abs(x) / sigma);
  }

  double exact_weight(double z) const {
    auto parts = detail::weight_parts(spec_, z, tau_, qs_);
    return std::clamp(std::exp(parts.log_numerator - parts.log_denominator), 0.0, 1.0);
  }

  double exact_log_core(double z) const {
    auto den = detail::core_integral(spec_, z, tau_, detail::CoreKind::Denominator, 0.0, qs_);
    if (!den.converged) throw numeric_error("core quadrature failed", den.rel_error);
    return den.log_value;
  }

 private:
  double tail_log_core_raw(double z) const {
    double log_t = 2.0 * (std::log(z) - std::log(tau_));
    return 2.0 * spec_.a * std::log(tau_) + spec_.log_L(log_t) +
           (spec_.a + 0.5) * std::log(2.0) + std::lgamma(spec_.a + 0.5) -
           (2.0 * spec_.a + 1.0) * std::log(z);
  }

  ShrinkagePriorSpec spec_;
  double tau_;
  double z_max_;
  QuadratureSettings qs_;
  UniformCubicSpline weight_spline_;
  UniformCubicSpline core_spline_;
  double tail_shift_ = 0.0;
  bool has_marginal_ = false;
};

// Build-once cache of curves keyed by (family, alpha, beta, tau, marginal).
// Builders run outside the lock; concurrent requesters wait on the future.
class CurveCache {
 public:
  std::shared_ptr<const ShrinkageCurve> get(const ShrinkagePriorSpec& spec, double tau,
                                            bool with_marginal,
                                            const QuadratureSettings& qs = {}) {
    Key key{static_cast<int>(spec.family), spec.alpha, spec.beta, tau, with_marginal};
    std::shared_future<std::shared_ptr<const ShrinkageCurve>> fut;
    std::shared_ptr<std::promise<std::shared_ptr<const ShrinkageCurve>>> prom;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(key);
      if (it == cache_.end()) {
        prom = std::make_shared<std::promise<std::shared_ptr<const ShrinkageCurve>>>();
        fut = prom->get_future().share();
        cache_.emplace(key, fut);
      } else {
        fut = it->second;
      }
    }
    if (prom) {
      try {
        auto curve = std::make_shared<const ShrinkageCurve>(spec, tau, with_marginal, 64.0, qs);
        prom->set_value(curve);
      } catch (...) {
        prom->set_exception(std::current_exception());
        throw;
      }
    }
    return fut.get();
  }

 private:
  using Key = std::tuple<int, double, double, double, bool>;
  std::mutex mu_;
  std::map<Key, std::shared_future<std::shared_ptr<const ShrinkageCurve>>> cache_;
};

}  // namespace shrinktest
