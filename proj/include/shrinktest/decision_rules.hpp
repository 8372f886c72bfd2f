#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shrinktest/full_bayes.hpp"
#include "shrinktest/posterior_shrinkage.hpp"
#include "shrinktest/shrinkage_tables.hpp"
#include "shrinktest/two_groups_oracle.hpp"

namespace shrinktest {

// The multiple testing procedures under study: the tuned-tau and
// empirical-Bayes rules reject when the shrinkage weight strictly exceeds 1/2
// (a statistic of exactly 0.5 is an accept), the full-Bayes rule does the same
// with the (tau, sigma)-mixed weight, plus the Oracle and BH baselines.

enum class ProcedureKind { TunedTau, EmpiricalBayes, FullBayes, Oracle, BH };

struct TauRule {
  enum class Kind { Fixed, ProportionalToP, PowerOfP } kind = Kind::ProportionalToP;
  double value = 1.0;  // fixed tau, the constant k in k*p, or the exponent in p^value

  static TauRule fixed(double tau) { return {Kind::Fixed, tau}; }
  static TauRule proportional(double k = 1.0) { return {Kind::ProportionalToP, k}; }
  static TauRule power(double expo) { return {Kind::PowerOfP, expo}; }

  double resolve(const TwoGroupsParams& params) const {
    switch (kind) {
      case Kind::Fixed:
        return value;
      case Kind::ProportionalToP:
        if (!std::isfinite(params.p)) {
          throw missing_parameter_error("tau rule k*p needs the sparsity p");
        }
        return value * params.p;
      case Kind::PowerOfP:
        if (!std::isfinite(params.p)) {
          throw missing_parameter_error("tau rule p^a needs the sparsity p");
        }
        return std::pow(params.p, value);
    }
    throw invalid_argument_error("unknown tau rule");
  }
};

struct ProcedureSpec {
  ProcedureKind kind = ProcedureKind::Oracle;
  std::optional<ShrinkagePriorSpec> prior;  // required for the shrinkage rules
  TauRule tau_rule = TauRule::proportional(1.0);
  double c1 = 2.0;  // tau-hat exceedance constant, c1 >= 2
  double c2 = 1.0;  // tau-hat denominator constant, c2 >= 1
  std::optional<double> bh_alpha;  // default 1/log m
  std::string label;

  std::string name() const {
    if (!label.empty()) return label;
    switch (kind) {
      case ProcedureKind::Oracle:
        return "oracle";
      case ProcedureKind::BH:
        return "bh";
      case ProcedureKind::TunedTau:
        return "tuned-" + (prior ? prior->label() : std::string("?"));
      case ProcedureKind::EmpiricalBayes:
        return "eb-" + (prior ? prior->label() : std::string("?"));
      case ProcedureKind::FullBayes:
        return "fb-" + (prior ? prior->label() : std::string("?"));
    }
    return "?";
  }
};

struct DecisionVector {
  std::vector<bool> rejections;
  std::vector<double> statistics;
};

struct Confusion {
  std::size_t fp = 0, fn = 0, tp = 0, tn = 0;
  std::size_t misclassified() const { return fp + fn; }
};

// tau-hat = max(1/m, (1/(c2 m)) #{ |x_j| > sqrt(c1 log m) }), truncated below
// by 1/m so it cannot collapse to zero.
inline double estimate_tau_hat(std::span<const double> xs, std::size_t m, double c1 = 2.0,
                               double c2 = 1.0) {
  if (m < 2 || xs.size() != m) {
    throw invalid_argument_error("tau-hat needs m >= 2 observations");
  }
  if (!(c1 >= 2.0)) throw invalid_argument_error("c1 must be >= 2");
  if (!(c2 >= 1.0)) throw invalid_argument_error("c2 must be >= 1");
  double thr = std::sqrt(c1 * std::log(static_cast<double>(m)));
  std::size_t count = 0;
  for (double x : xs) {
    if (std::abs(x) > thr) ++count;
  }
  double md = static_cast<double>(m);
  return std::max(1.0 / md, static_cast<double>(count) / (c2 * md));
}

// Optional evaluation context: a curve cache turns the per-test weight
// evaluations into spline lookups, and the grid overrides the full-Bayes
// default. Results agree with the exact path to within table accuracy.
struct EvalContext {
  CurveCache* cache = nullptr;
  const HyperGrid* grid = nullptr;
  QuadratureSettings settings{};
};

inline DecisionVector run_procedure(const ProcedureSpec& proc, std::span<const double> xs,
                                    const TwoGroupsParams& params, const EvalContext& ctx = {}) {
  if (xs.size() != params.m) {
    throw invalid_argument_error("data length must equal params.m");
  }
  DecisionVector out;
  out.rejections.assign(xs.size(), false);
  out.statistics.assign(xs.size(), 0.0);

  switch (proc.kind) {
    case ProcedureKind::Oracle: {
      OracleQuantities oq = derive_oracle(params);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        out.statistics[i] = xs[i] * xs[i] / oq.sigma2;
        out.rejections[i] = out.statistics[i] > oq.c2;
      }
      return out;
    }
    case ProcedureKind::BH: {
      double alpha =
          proc.bh_alpha.value_or(1.0 / std::log(static_cast<double>(params.m)));
      auto rej = bh_procedure(xs, alpha);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        out.statistics[i] = std::erfc(std::abs(xs[i]) / kSqrt2);  // two-sided p-value
        out.rejections[i] = rej[i];
      }
      return out;
    }
    case ProcedureKind::TunedTau:
    case ProcedureKind::EmpiricalBayes: {
      if (!proc.prior) throw missing_parameter_error("shrinkage procedure needs a prior");
      double tau = proc.kind == ProcedureKind::TunedTau
                       ? proc.tau_rule.resolve(params)
                       : estimate_tau_hat(xs, params.m, proc.c1, proc.c2);
      if (!(tau > 0.0)) throw invalid_argument_error("resolved tau must be positive");
      // sigma is fixed at 1 for these rules; the theory assumes it known.
      if (ctx.cache) {
        auto curve = ctx.cache->get(*proc.prior, tau, /*with_marginal=*/false, ctx.settings);
        for (std::size_t i = 0; i < xs.size(); ++i) {
          out.statistics[i] = curve->weight(std::abs(xs[i]));
        }
      } else {
        for (std::size_t i = 0; i < xs.size(); ++i) {
          out.statistics[i] =
              mean_shrinkage_weight(*proc.prior, {xs[i], tau, 1.0}, ctx.settings);
        }
      }
      for (std::size_t i = 0; i < xs.size(); ++i) {
        out.rejections[i] = out.statistics[i] > 0.5;
      }
      return out;
    }
    case ProcedureKind::FullBayes: {
      if (!proc.prior) throw missing_parameter_error("shrinkage procedure needs a prior");
      static const HyperGrid default_grid = HyperGrid::make_default();
      const HyperGrid& grid = ctx.grid ? *ctx.grid : default_grid;
      auto w = fb_shrinkage_weights(*proc.prior, xs, grid, ctx.settings, ctx.cache);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        out.statistics[i] = w[i];
        out.rejections[i] = w[i] > 0.5;
      }
      return out;
    }
  }
  throw invalid_argument_error("unknown procedure kind");
}

inline Confusion confusion(const DecisionVector& decisions, const std::vector<bool>& truth) {
  if (decisions.rejections.size() != truth.size()) {
    throw invalid_argument_error("decision and truth vectors differ in length");
  }
  Confusion c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    bool r = decisions.rejections[i];
    if (r && truth[i]) ++c.tp;
    else if (r && !truth[i]) ++c.fp;
    else if (!r && truth[i]) ++c.fn;
    else ++c.tn;
  }
  return c;
}

}  // namespace shrinktest
