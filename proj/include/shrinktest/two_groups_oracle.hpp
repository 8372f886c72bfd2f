#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "shrinktest/errors.hpp"
#include "shrinktest/math.hpp"

namespace shrinktest {

// Two-groups model X_i ~ (1-p) N(0, sigma^2) + p N(0, sigma^2 + psi^2) and the
// Bayes Oracle that rejects when X^2 exceeds c^2 = (1 + 1/u)(log v + log(1 + 1/u)),
// u = psi^2, v = u f^2, f = (1-p)/p. General sigma^2 is handled by standardizing
// (x, psi^2) by sigma^2, which keeps a single code path.

struct TwoGroupsParams {
  std::size_t m = 200;
  double p = 0.1;
  double psi2 = 10.0;
  double sigma2 = 1.0;
};

inline void validate(const TwoGroupsParams& params) {
  if (params.m < 1) throw invalid_argument_error("m must be at least 1");
  if (!(params.p > 0.0 && params.p < 1.0)) throw invalid_argument_error("p must lie in (0,1)");
  if (!(params.psi2 > 0.0)) throw invalid_argument_error("psi2 must be positive");
  if (!(params.sigma2 > 0.0)) throw invalid_argument_error("sigma2 must be positive");
}

struct OracleQuantities {
  double u = 0.0;   // psi^2 / sigma^2
  double f = 0.0;   // (1-p)/p
  double v = 0.0;   // u f^2
  double c2 = 0.0;  // oracle threshold on (x/sigma)^2
  double sigma2 = 1.0;
  std::optional<double> C;  // limit of log(v)/u when a sequence is attached
};

inline OracleQuantities derive_oracle(const TwoGroupsParams& params) {
  validate(params);
  OracleQuantities oq;
  oq.sigma2 = params.sigma2;
  oq.u = params.psi2 / params.sigma2;
  oq.f = (1.0 - params.p) / params.p;
  oq.v = oq.u * oq.f * oq.f;
  double body = std::log(oq.v) + std::log1p(1.0 / oq.u);
  if (!(body > 0.0)) {
    throw degenerate_regime_error("oracle threshold degenerate: log v + log(1+1/u) = " +
                                  std::to_string(body));
  }
  oq.c2 = (1.0 + 1.0 / oq.u) * body;
  return oq;
}

inline bool oracle_decide(double x, const OracleQuantities& oq) {
  return x * x / oq.sigma2 > oq.c2;
}

struct OracleErrors {
  double t1 = 0.0;    // type I probability of one test
  double t2 = 0.0;    // type II probability of one test
  double risk = 0.0;  // m [(1-p) t1 + p t2]
};

inline OracleErrors oracle_exact_errors(const TwoGroupsParams& params,
                                        const OracleQuantities& oq) {
  OracleErrors out;
  double c = std::sqrt(oq.c2);
  out.t1 = 2.0 * norm_sf(c);
  out.t2 = 2.0 * norm_cdf(c / std::sqrt(1.0 + oq.u)) - 1.0;
  out.risk = static_cast<double>(params.m) * ((1.0 - params.p) * out.t1 + params.p * out.t2);
  return out;
}

inline OracleErrors oracle_asymptotic_risk(const OracleQuantities& oq, std::size_t m, double p) {
  if (!oq.C) throw missing_limit_error("asymptotic risk needs the sequence limit C");
  OracleErrors out;
  double C = *oq.C;
  out.t1 = std::exp(-0.5 * C) * std::sqrt(2.0 / (kPi * oq.v * std::log(oq.v)));
  out.t2 = 2.0 * norm_cdf(std::sqrt(C)) - 1.0;
  out.risk = static_cast<double>(m) * p * out.t2;
  return out;
}

// Posterior inclusion probability omega(x) = P(nu = 1 | x) of the two-groups
// model; omega(x) > 1/2 exactly when x^2 > c^2 sigma^2.
inline double inclusion_probability(double x, const TwoGroupsParams& params) {
  validate(params);
  double u = params.psi2 / params.sigma2;
  double f = (1.0 - params.p) / params.p;
  double z2 = x * x / params.sigma2;
  double log_odds_against =
      std::log(f) + 0.5 * std::log1p(u) - 0.5 * z2 * u / (1.0 + u);
  return 1.0 / (1.0 + std::exp(log_odds_against));
}

// Benjamini-Hochberg step-up on two-sided normal p-values p_i = 2(1 - Phi(|x_i|)).
inline std::vector<bool> bh_procedure(std::span<const double> xs, double alpha) {
  if (xs.empty()) throw invalid_argument_error("bh_procedure needs at least one observation");
  if (!(alpha > 0.0 && alpha < 1.0)) throw invalid_argument_error("alpha must lie in (0,1)");
  const std::size_t m = xs.size();
  std::vector<double> pvals(m);
  for (std::size_t i = 0; i < m; ++i) pvals[i] = std::erfc(std::abs(xs[i]) / kSqrt2);
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return pvals[i] < pvals[j]; });
  double cutoff = -1.0;
  for (std::size_t k = m; k-- > 0;) {
    if (pvals[order[k]] <= alpha * static_cast<double>(k + 1) / static_cast<double>(m)) {
      cutoff = pvals[order[k]];
      break;
    }
  }
  std::vector<bool> reject(m, false);
  if (cutoff >= 0.0) {
    for (std::size_t i = 0; i < m; ++i) reject[i] = pvals[i] <= cutoff;
  }
  return reject;
}

// Two-groups sequences satisfying the sparse asymptotic scheme: p = k m^(-eps)
// and psi^2 solving log(psi^2 f^2)/psi^2 = C, so that p -> 0, u -> inf,
// v -> inf and log(v)/u -> C along m.
struct AsymptoticSequence {
  double C = 1.0;
  double epsilon = 0.5;
  double k = 1.0;

  TwoGroupsParams params_at(std::size_t m) const {
    if (!(C > 0.0)) throw invalid_argument_error("sequence limit C must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
      throw invalid_argument_error("sequence exponent must lie in (0,1)");
    }
    TwoGroupsParams params;
    params.m = m;
    params.p = k * std::pow(static_cast<double>(m), -epsilon);
    if (!(params.p > 0.0 && params.p < 1.0)) {
      throw invalid_argument_error("sequence produced p outside (0,1)");
    }
    double f = (1.0 - params.p) / params.p;
    auto g = [&](double u) { return std::log(u * f * f) / u - C; };
    double lo = 1.0, hi = 2.0;
    if (g(lo) <= 0.0) throw degenerate_regime_error("sequence has no solution on u >= 1");
    while (g(hi) > 0.0) {
      hi *= 2.0;
      if (hi > 1e15) throw numeric_error("psi^2 bisection failed to bracket");
    }
    for (int i = 0; i < 200 && (hi - lo) > 1e-12 * hi; ++i) {
      double mid = 0.5 * (lo + hi);
      (g(mid) > 0.0 ? lo : hi) = mid;
    }
    params.psi2 = 0.5 * (lo + hi);
    params.sigma2 = 1.0;
    return params;
  }

  OracleQuantities oracle_at(std::size_t m) const {
    OracleQuantities oq = derive_oracle(params_at(m));
    oq.C = C;
    return oq;
  }
};

}  // namespace shrinktest
