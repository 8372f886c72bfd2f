#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "shrinktest/decision_rules.hpp"
#include "shrinktest/posterior_shrinkage.hpp"
#include "shrinktest/rng.hpp"
#include "shrinktest/simulation.hpp"
#include "shrinktest/two_groups_oracle.hpp"

namespace shrinktest {

// Numerical certification of the concentration/moment inequalities and the
// error-probability and risk bounds, over declared parameter grids. Hard
// inequalities get tolerance 1 + 1e-6 (quadrature only); (1 + o(1)) statements
// get declared finite-m slacks. The slacks are versioned test parameters, not
// truth claims.

struct BoundCheckParams {
  double eta = 0.49;   // eta in (0, 1/2); makes the type II constants tight
  double delta = 0.01;
  double eps = 0.5;
  double A0 = 1.0;     // local-boundedness threshold; both built-in L are monotone
  double slack = 1.25;           // o(1) envelopes at the largest desk-scale m
  double small_tau_slack = 1.1;  // small-tau ratios at tau = 1e-4
  double lemma_slack = 1.05;     // slowly-varying asymptotics at x = 1e8
  double hard_slack = 1.0 + 1e-6;
  std::vector<double> tau_grid = {1e-1, 1e-2, 1e-3, 1e-4};
  std::vector<double> x_grid = {0.0, 1.0, 2.0, 3.0};
  std::vector<std::size_t> m_grid = {1000, 10000, 100000, 1000000};
  std::vector<double> hard_eta = {0.1, 0.25, 0.4, 0.49};
  std::vector<double> hard_delta = {0.25, 0.5, 0.75};
  std::vector<double> hard_tau = {1.0, 0.1, 0.01};
  double hard_x_max = 10.0;
  double hard_x_step = 0.5;
  std::size_t mc_reps = 200;
  std::uint64_t seed = 977;
  unsigned threads = 0;  // 0 = hardware concurrency (grid points are independent)
  QuadratureSettings settings{};
};

struct BoundWitness {
  std::string point;
  double observed = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

struct BoundReport {
  std::string check;
  std::string grid;
  double worst_ratio = 0.0;
  double slack = 1.0;
  bool pass = false;
  std::vector<BoundWitness> witnesses;  // up to 5 worst points
  std::vector<BoundWitness> trajectory; // full ratio path, for regressions
};

namespace detail {

inline std::string fmt_point(const char* fmt, double a, double b = 0, double c = 0, double d = 0) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c, d);
  return buf;
}

inline void push_witness(BoundReport& rep, std::string point, double obs, double bound) {
  BoundWitness w{std::move(point), obs, bound, bound != 0.0 ? obs / bound : 0.0};
  rep.trajectory.push_back(w);
  rep.witnesses.push_back(w);
  std::sort(rep.witnesses.begin(), rep.witnesses.end(),
            [](const BoundWitness& a, const BoundWitness& b) { return a.ratio > b.ratio; });
  if (rep.witnesses.size() > 5) rep.witnesses.resize(5);
}

inline void finalize(BoundReport& rep) {
  rep.worst_ratio = 0.0;
  for (const auto& w : rep.trajectory) rep.worst_ratio = std::max(rep.worst_ratio, w.ratio);
  rep.pass = rep.worst_ratio <= rep.slack;
}

// log of Int_T^inf t^(-expo-1) L(t) dt, via y = log t.
inline double log_slow_tail(const ShrinkagePriorSpec& spec, double T, double expo,
                            const QuadratureSettings& qs) {
  auto logf = [&](double y) { return -expo * y + spec.log_L(y); };
  double y0 = std::log(T);
  std::vector<double> pts = {y0, y0 + 5.0, y0 + 15.0};
  auto res = log_integrate_core(logf, pts, false, true, qs);
  if (!res.converged) throw numeric_error("slowly-varying tail integral failed", res.rel_error);
  return res.log_value;
}

// log of Int_A0^x t^(-expo) L(t) dt; the log-axis
// jacobian turns the integrand into e^((1-expo) y) L(e^y).
inline double log_slow_body(const ShrinkagePriorSpec& spec, double A0, double x, double expo,
                            const QuadratureSettings& qs) {
  double y0 = std::log(A0), y1 = std::log(x);
  std::vector<double> pts;
  int n = std::max(2, static_cast<int>(std::ceil((y1 - y0) / 10.0)) + 1);
  for (int i = 0; i < n; ++i) {
    pts.push_back(y0 + (y1 - y0) * static_cast<double>(i) / (n - 1));
  }
  auto logf = [&](double y) { return (1.0 - expo) * y + spec.log_L(y); };
  auto res = log_integrate_core(logf, pts, false, false, qs);
  if (!res.converged) throw numeric_error("slowly-varying body integral failed", res.rel_error);
  return res.log_value;
}

// H(a, eta, delta) of the second concentration inequality.
inline double hard_H(const ShrinkagePriorSpec& spec, double eta, double delta) {
  double ed = eta * delta;
  return (spec.a + 0.5) * std::pow(1.0 - ed, spec.a) /
         (spec.K * std::pow(ed, spec.a + 0.5));
}

// log of tau^(2a) * Delta(tau^2, eta, delta) with Delta = xi * L(T),
// T = (1/tau^2)(1/(eta delta) - 1).
inline double log_tau2a_delta(const ShrinkagePriorSpec& spec, double tau, double eta,
                              double delta, const QuadratureSettings& qs) {
  double T = (1.0 / (tau * tau)) * (1.0 / (eta * delta) - 1.0);
  double log_tail = log_slow_tail(spec, T, spec.a + 0.5, qs);
  double log_asym = -std::log(spec.a + 0.5) - (spec.a + 0.5) * std::log(T) +
                    spec.log_L(std::log(T));
  double log_xi = log_tail - log_asym;
  return 2.0 * spec.a * std::log(tau) + log_xi + spec.log_L(std::log(T));
}

}  // namespace detail

// Pr(kappa > eta | x, tau) <= H(a,eta,delta) e^(-eta(1-delta) x^2/2)
// / (tau^(2a) Delta), uniformly in x, for every tau, eta, delta. Hard
// inequality, checked pointwise over the declared grid.
inline BoundReport check_hard_concentration(const ShrinkagePriorSpec& spec,
                                            const BoundCheckParams& params) {
  BoundReport rep;
  rep.check = "hard-concentration";
  rep.grid = "eta x delta x tau x |x| grid";
  rep.slack = params.hard_slack;

  struct Point {
    double eta, delta, tau, x, H, log_denom;
    double obs = 0.0, bound = 0.0;
  };
  std::vector<Point> points;
  for (double eta : params.hard_eta) {
    for (double delta : params.hard_delta) {
      double H = detail::hard_H(spec, eta, delta);
      for (double tau : params.hard_tau) {
        double log_denom = detail::log_tau2a_delta(spec, tau, eta, delta, params.settings);
        for (double x = 0.0; x <= params.hard_x_max + 1e-9; x += params.hard_x_step) {
          points.push_back({eta, delta, tau, x, H, log_denom});
        }
      }
    }
  }
  // grid points are independent; the fold below is sequential so the report
  // is identical for any thread count
  detail::parallel_for(points.size(), params.threads, [&](std::size_t i) {
    Point& pt = points[i];
    pt.obs = tail_prob_kappa_above(spec, {pt.x, pt.tau, 1.0}, pt.eta, params.settings);
    pt.bound =
        std::exp(std::log(pt.H) - 0.5 * pt.eta * (1.0 - pt.delta) * pt.x * pt.x - pt.log_denom);
  });
  std::size_t vacuous = 0;
  for (const auto& pt : points) {
    if (pt.bound < 1.0) ++vacuous;  // counts points where the bound has bite
    detail::push_witness(
        rep, detail::fmt_point("eta=%g delta=%g tau=%g x=%g", pt.eta, pt.delta, pt.tau, pt.x),
        pt.obs, pt.bound);
  }
  rep.grid += detail::fmt_point(" (%g of %g points non-vacuous)",
                                static_cast<double>(vacuous), static_cast<double>(points.size()));
  detail::finalize(rep);
  return rep;
}

// Small-tau statements: the first concentration inequality, its bounded-L
// bounded-L variant, the moment inequality, and the normalizer asymptote.
// Ratios are recorded along the whole tau grid; the verdict uses the smallest tau.
inline std::vector<BoundReport> check_small_tau_bounds(const ShrinkagePriorSpec& spec,
                                                       const BoundCheckParams& params) {
  std::vector<BoundReport> out;
  const double tau_min = *std::min_element(params.tau_grid.begin(), params.tau_grid.end());
  const auto& qs = params.settings;

  auto verdict_at_tau_min = [&](BoundReport& rep, double slack) {
    rep.slack = slack;
    rep.worst_ratio = 0.0;
    for (const auto& w : rep.trajectory) {
      if (w.point.find(detail::fmt_point("tau=%g", tau_min)) != std::string::npos) {
        rep.worst_ratio = std::max(rep.worst_ratio, w.ratio);
      }
    }
    rep.pass = rep.worst_ratio <= rep.slack;
  };

  {  // Pr(kappa < eps) <= K e^(x^2/2) Int_T^inf t^(-a-1) L(t) dt (1+o(1))
    BoundReport rep;
    rep.check = "small-tau-tail-bound";
    rep.grid = "tau x |x| grid, eps=" + std::to_string(params.eps);
    for (double tau : params.tau_grid) {
      double T = (1.0 / (tau * tau)) * (1.0 / params.eps - 1.0);
      double log_tail = detail::log_slow_tail(spec, T, spec.a, qs);
      for (double x : params.x_grid) {
        double obs = tail_prob_kappa_below(spec, {x, tau, 1.0}, params.eps, qs);
        double bound = std::exp(std::log(spec.K) + 0.5 * x * x + log_tail);
        detail::push_witness(rep, detail::fmt_point("tau=%g x=%g", tau, x), obs, bound);
      }
    }
    verdict_at_tau_min(rep, params.small_tau_slack);
    out.push_back(std::move(rep));
  }

  {  // bounded-L variant with M = sup L: (K M / a) eps^a (1-eps)^-a e^(x^2/2) tau^(2a)
    BoundReport rep;
    rep.check = "small-tau-tail-bound-bounded-L";
    rep.grid = "tau x |x| grid, eps=" + std::to_string(params.eps);
    double cst = spec.K * spec.L_sup / spec.a * std::pow(params.eps, spec.a) *
                 std::pow(1.0 - params.eps, -spec.a);
    for (double tau : params.tau_grid) {
      for (double x : params.x_grid) {
        double obs = tail_prob_kappa_below(spec, {x, tau, 1.0}, params.eps, qs);
        double bound = cst * std::exp(0.5 * x * x) * std::pow(tau, 2.0 * spec.a);
        detail::push_witness(rep, detail::fmt_point("tau=%g x=%g", tau, x), obs, bound);
      }
    }
    verdict_at_tau_min(rep, params.small_tau_slack);
    out.push_back(std::move(rep));
  }

  {  // E(1-kappa) <= (A0 K / (a(1-a))) e^(x^2/2) tau^(2a) L(1/tau^2) (1+o(1))
    if (!(spec.a > 0.0 && spec.a < 1.0)) {
      throw invalid_argument_error("the moment inequality requires a in (0,1)");
    }
    BoundReport rep;
    rep.check = "small-tau-moment-bound";
    rep.grid = "tau x |x| grid";
    double cst = params.A0 * spec.K / (spec.a * (1.0 - spec.a));
    for (double tau : params.tau_grid) {
      double L_here = std::exp(spec.log_L(-2.0 * std::log(tau)));
      for (double x : params.x_grid) {
        double obs = mean_shrinkage_weight(spec, {x, tau, 1.0}, qs);
        double bound = cst * std::exp(0.5 * x * x) * std::pow(tau, 2.0 * spec.a) * L_here;
        detail::push_witness(rep, detail::fmt_point("tau=%g x=%g", tau, x), obs, bound);
      }
    }
    verdict_at_tau_min(rep, params.small_tau_slack);
    out.push_back(std::move(rep));
  }

  {  // normalizer asymptote: K tau^(2a) Z(tau) -> 1 from below; asymptote/exact <= 1/0.95
    BoundReport rep;
    rep.check = "normalizer-asymptote";
    rep.grid = "tau grid, x=0";
    for (double tau : params.tau_grid) {
      auto den = detail::core_integral(spec, 0.0, tau, detail::CoreKind::Denominator, 0.0, qs);
      double exact_ratio = spec.K * std::exp(den.log_value);  // <= 1, -> 1
      detail::push_witness(rep, detail::fmt_point("tau=%g", tau), 1.0, exact_ratio);
    }
    verdict_at_tau_min(rep, 1.0 / 0.95);
    out.push_back(std::move(rep));
  }
  return out;
}

struct ExactErrorsAtTau {
  double x_star = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
};

inline ExactErrorsAtTau exact_rule_errors(const ShrinkagePriorSpec& spec, double tau, double psi2,
                                          const QuadratureSettings& qs = {}) {
  ExactErrorsAtTau out;
  out.x_star = weight_threshold_x(spec, tau, 1.0, 0.5, qs);
  out.t1 = 2.0 * norm_sf(out.x_star);
  out.t2 = 2.0 * norm_cdf(out.x_star / std::sqrt(1.0 + psi2)) - 1.0;
  return out;
}

// Error-probability envelopes along the sparse sequence with tau = p. The
// upper bound on t1 and both t2 envelopes are checked at the largest m; the
// (1-p) t1 / p contribution must shrink along the sequence.
inline std::vector<BoundReport> check_error_probability_bounds(const ShrinkagePriorSpec& spec,
                                                               const AsymptoticSequence& seq,
                                                               const BoundCheckParams& params) {
  if (!(spec.a > 0.0 && spec.a < 1.0)) {
    throw invalid_argument_error("the t1 envelope requires a in (0,1)");
  }
  std::vector<BoundReport> out;
  const double eta = params.eta, delta = params.delta;
  const double a = spec.a, K = spec.K, C = seq.C;
  const std::size_t m_max = *std::max_element(params.m_grid.begin(), params.m_grid.end());

  BoundReport r45{"type1-upper-envelope", "m grid, tau=p", 0, params.slack, false, {}, {}};
  BoundReport r47{"type1-lower-envelope", "m grid, tau=p", 0, params.slack, false, {}, {}};
  BoundReport r46{"type2-upper-envelope", "m grid, tau=p", 0, params.slack, false, {}, {}};
  BoundReport r48{"type2-lower-envelope", "m grid, tau=p", 0, params.slack, false, {}, {}};
  BoundReport rtrend{"t1-contribution-vanishes", "(1-p) t1 / p along m grid", 0, 1.0, false,
                     {}, {}};

  double H = detail::hard_H(spec, eta, delta);
  double b46 = 2.0 * norm_cdf(std::sqrt(2.0 * a * C / (eta * (1.0 - delta)))) - 1.0;
  double b48 = 2.0 * norm_cdf(std::sqrt(2.0 * a) * std::sqrt(C)) - 1.0;

  std::vector<double> contributions;
  for (std::size_t m : params.m_grid) {
    TwoGroupsParams tg = seq.params_at(m);
    double tau = tg.p;
    auto ee = exact_rule_errors(spec, tau, tg.psi2, params.settings);
    double log_inv_tau2 = -2.0 * std::log(tau);
    double L_here = std::exp(spec.log_L(log_inv_tau2));
    double b45 = (1.0 / std::sqrt(kPi * a)) * (2.0 * params.A0 * K / (a * (1.0 - a))) *
                 std::pow(tau, 2.0 * a) * L_here / std::sqrt(log_inv_tau2);
    double b47 = ((0.5 - eta) / std::sqrt(kPi * a)) / H *
                 std::pow(tau, 2.0 * a / (eta * (1.0 - delta))) * L_here /
                 std::sqrt(log_inv_tau2);
    std::string pt = detail::fmt_point("m=%g x*=%g", static_cast<double>(m), ee.x_star);
    detail::push_witness(r45, pt, ee.t1, b45);
    detail::push_witness(r47, pt, b47, ee.t1);  // lower bound: bound/observed <= slack
    detail::push_witness(r46, pt, ee.t2, b46);
    detail::push_witness(r48, pt, b48, ee.t2);
    contributions.push_back((1.0 - tg.p) * ee.t1 / tg.p);
  }

  auto verdict_at_m_max = [&](BoundReport& rep) {
    std::string tag = detail::fmt_point("m=%g", static_cast<double>(m_max));
    rep.worst_ratio = 0.0;
    for (const auto& w : rep.trajectory) {
      if (w.point.find(tag) != std::string::npos) {
        rep.worst_ratio = std::max(rep.worst_ratio, w.ratio);
      }
    }
    rep.pass = rep.worst_ratio <= rep.slack;
  };
  verdict_at_m_max(r45);
  verdict_at_m_max(r47);
  verdict_at_m_max(r46);
  verdict_at_m_max(r48);

  for (std::size_t i = 0; i < contributions.size(); ++i) {
    detail::push_witness(rtrend,
                         detail::fmt_point("m=%g", static_cast<double>(params.m_grid[i])),
                         contributions[i], contributions.front());
  }
  rtrend.worst_ratio = contributions.back() / contributions.front();
  rtrend.pass = rtrend.worst_ratio <= rtrend.slack;

  out.push_back(std::move(r45));
  out.push_back(std::move(r47));
  out.push_back(std::move(r46));
  out.push_back(std::move(r48));
  out.push_back(std::move(rtrend));
  return out;
}

// Diagnostic for sub-optimal tau = p^expo with expo < 1/2: the lower-bound
// aggregate (1-p) t1 / p + t2 must grow along m (the risk ratio diverges).
inline BoundReport check_suboptimal_tau_divergence(const ShrinkagePriorSpec& spec,
                                                   const AsymptoticSequence& seq,
                                                   const BoundCheckParams& params,
                                                   double expo = 0.3,
                                                   double required_growth = 2.0) {
  BoundReport rep;
  rep.check = detail::fmt_point("suboptimal-tau-p^%g-diverges", expo);
  rep.grid = "m grid";
  rep.slack = 1.0 / required_growth;
  std::vector<double> agg;
  for (std::size_t m : params.m_grid) {
    TwoGroupsParams tg = seq.params_at(m);
    double tau = std::pow(tg.p, expo);
    auto ee = exact_rule_errors(spec, tau, tg.psi2, params.settings);
    agg.push_back((1.0 - tg.p) * ee.t1 / tg.p + ee.t2);
    detail::push_witness(rep, detail::fmt_point("m=%g tau=%g", static_cast<double>(m), tau),
                         agg.back(), 1.0);
  }
  // pass when the aggregate grew by the required factor: first/last <= 1/growth
  rep.worst_ratio = agg.front() / agg.back();
  rep.pass = rep.worst_ratio <= rep.slack;
  return rep;
}

// Risk ratio R_OG / R_opt against the display envelope at the largest m, and
// the empirical-Bayes variant by Monte Carlo at moderate m.
inline std::vector<BoundReport> check_risk_ratio(const ShrinkagePriorSpec& spec,
                                                 const AsymptoticSequence& seq,
                                                 const BoundCheckParams& params) {
  std::vector<BoundReport> out;
  const double a = spec.a, C = seq.C;
  const double eta = params.eta, delta = params.delta;
  double denom = 2.0 * norm_cdf(std::sqrt(C)) - 1.0;
  double lower = (2.0 * norm_cdf(std::sqrt(2.0 * a) * std::sqrt(C)) - 1.0) / denom;
  double upper =
      (2.0 * norm_cdf(std::sqrt(2.0 * a / (eta * (1.0 - delta))) * std::sqrt(C)) - 1.0) / denom;

  {
    BoundReport rep;
    rep.check = "risk-ratio-envelope";
    rep.slack = params.slack;
    std::size_t m_max = *std::max_element(params.m_grid.begin(), params.m_grid.end());
    rep.grid = detail::fmt_point("m=%g, envelope [%g, %g]", static_cast<double>(m_max), lower,
                                 upper);
    for (std::size_t m : params.m_grid) {
      TwoGroupsParams tg = seq.params_at(m);
      auto ee = exact_rule_errors(spec, tg.p, tg.psi2, params.settings);
      double r_og = static_cast<double>(m) * ((1.0 - tg.p) * ee.t1 + tg.p * ee.t2);
      OracleQuantities oq = derive_oracle(tg);
      double r_opt = oracle_exact_errors(tg, oq).risk;
      double ratio = r_og / r_opt;
      // normalized so that "inside envelope x slack" reads worst <= slack
      double normalized = std::max(ratio / upper, lower / ratio);
      BoundWitness w{detail::fmt_point("m=%g ratio=%g", static_cast<double>(m), ratio), ratio,
                     upper, normalized};
      rep.trajectory.push_back(w);
      if (m == m_max) {
        rep.worst_ratio = normalized;
        rep.witnesses.push_back(w);
      }
    }
    rep.pass = rep.worst_ratio <= rep.slack;
    out.push_back(std::move(rep));
  }

  {  // EB rule risk by Monte Carlo at m = 1e4: risk / oracle-risk <= upper * 1.5
    BoundReport rep;
    rep.check = "eb-risk-ratio-mc";
    rep.slack = upper * 1.5;
    std::size_t m = 10000;
    TwoGroupsParams tg = seq.params_at(m);
    rep.grid = detail::fmt_point("m=%g, %g replicates", static_cast<double>(m),
                                 static_cast<double>(params.mc_reps));
    OracleQuantities oq = derive_oracle(tg);
    double r_opt = oracle_exact_errors(tg, oq).risk;
    std::map<double, double> thresholds;  // tau-hat -> |x| rejection threshold
    double total_mis = 0.0;
    for (std::size_t rep_i = 0; rep_i < params.mc_reps; ++rep_i) {
      Rng rng(params.seed, 101, rep_i);
      Replicate data = generate_replicate(tg, rng);
      double tau_hat = estimate_tau_hat(data.xs, tg.m, 2.0, 1.0);
      auto it = thresholds.find(tau_hat);
      if (it == thresholds.end()) {
        it = thresholds
                 .emplace(tau_hat, weight_threshold_x(spec, tau_hat, 1.0, 0.5, params.settings))
                 .first;
      }
      double thr = it->second;
      std::size_t mis = 0;
      for (std::size_t i = 0; i < tg.m; ++i) {
        bool rejected = std::abs(data.xs[i]) > thr;
        if (rejected != data.truth[i]) ++mis;
      }
      total_mis += static_cast<double>(mis);
    }
    double emp_risk = total_mis / static_cast<double>(params.mc_reps);
    rep.worst_ratio = emp_risk / r_opt;
    rep.pass = rep.worst_ratio <= rep.slack;
    rep.witnesses.assign(1, BoundWitness{"emp-risk/oracle-risk", emp_risk, r_opt,
                                         emp_risk / r_opt});
    rep.trajectory = rep.witnesses;
    out.push_back(std::move(rep));
  }
  return out;
}

// Slowly-varying function asymptotics (the Appendix lemmas) at desk scale.
inline std::vector<BoundReport> check_slow_variation_lemmas(const ShrinkagePriorSpec& spec,
                                                            const BoundCheckParams& params) {
  std::vector<BoundReport> out;
  const auto& qs = params.settings;

  {  // tail integral over its asymptote (alpha = -(a + 3/2)) -> 1 at x = 1e8
    BoundReport rep;
    rep.check = "slowly-varying-tail-asymptote";
    rep.grid = "x = 1e8, alpha = -(a+3/2)";
    rep.slack = params.lemma_slack;
    double x = 1e8;
    double expo = spec.a + 0.5;  // integrand t^(alpha) L with alpha = -expo-1
    double log_tail = detail::log_slow_tail(spec, x, expo, qs);
    double log_asym = -std::log(expo) - expo * std::log(x) + spec.log_L(std::log(x));
    double ratio = std::exp(log_tail - log_asym);
    detail::push_witness(rep, "x=1e8", ratio, 1.0);
    rep.worst_ratio = std::max(ratio, 1.0 / ratio);
    rep.pass = rep.worst_ratio <= rep.slack;
    out.push_back(std::move(rep));
  }

  {  // body integral over its asymptote (alpha = -a) -> 1 at x = 1e8
    BoundReport rep;
    rep.check = "slowly-varying-body-asymptote";
    rep.grid = "x = 1e8, alpha = -a, A0 = " + std::to_string(params.A0);
    rep.slack = params.lemma_slack;
    double x = 1e8;
    double log_body = detail::log_slow_body(spec, params.A0, x, spec.a, qs);
    double log_asym =
        -std::log(1.0 - spec.a) + (1.0 - spec.a) * std::log(x) + spec.log_L(std::log(x));
    double ratio = std::exp(log_body - log_asym);
    detail::push_witness(rep, "x=1e8", ratio, 1.0);
    rep.worst_ratio = std::max(ratio, 1.0 / ratio);
    rep.pass = rep.worst_ratio <= rep.slack;
    out.push_back(std::move(rep));
  }

  {  // slow variation in logs: log(L(x)/L_limit)/log(x) -> 0; |.| <= 1e-3 at x = 1e10.
    // The limit is normalized out: for families with L_limit != 1 the raw
    // log L(x)/log(x) only decays at rate 1/log(x).
    BoundReport rep;
    rep.check = "slowly-varying-log-ratio";
    rep.grid = "x = 1e10, normalized by L_limit";
    rep.slack = 1.0;
    double x = 1e10;
    double val = std::abs((spec.log_L(std::log(x)) - std::log(spec.L_limit)) / std::log(x));
    detail::push_witness(rep, "x=1e10", val, 1e-3);
    rep.worst_ratio = val / 1e-3;
    rep.pass = rep.worst_ratio <= rep.slack;
    out.push_back(std::move(rep));
  }
  return out;
}

// tau-hat consistency: tau-hat concentrates at alpha_m =
// Pr(|X_1| > sqrt(c1 log m)). The exact alpha_m is used throughout.
inline std::vector<BoundReport> check_eb_tau_consistency(const ShrinkagePriorSpec& /*spec*/,
                                                         const AsymptoticSequence& seq,
                                                         const BoundCheckParams& params) {
  std::vector<BoundReport> out;
  const std::size_t m = 10000;
  const double c1 = 2.0, c2 = 1.0;
  const double thr = std::sqrt(c1 * std::log(static_cast<double>(m)));

  TwoGroupsParams tg = seq.params_at(m);
  double alpha_m = 2.0 * ((1.0 - tg.p) * norm_sf(thr) +
                          tg.p * norm_sf(thr / std::sqrt(1.0 + tg.psi2)));

  {  // fraction of replicates with |tau-hat / alpha_m - 1| < 0.2, required >= 0.95
    BoundReport rep;
    rep.check = "tau-hat-concentration";
    rep.grid = detail::fmt_point("m=%g p=%g alpha_m=%g, %g replicates",
                                 static_cast<double>(m), tg.p, alpha_m,
                                 static_cast<double>(params.mc_reps));
    rep.slack = 1.0;
    std::size_t hits = 0;
    for (std::size_t rep_i = 0; rep_i < params.mc_reps; ++rep_i) {
      Rng rng(params.seed, 201, rep_i);
      Replicate data = generate_replicate(tg, rng);
      double tau_hat = estimate_tau_hat(data.xs, m, c1, c2);
      if (std::abs(tau_hat / alpha_m - 1.0) < 0.2) ++hits;
    }
    double fraction = static_cast<double>(hits) / static_cast<double>(params.mc_reps);
    detail::push_witness(rep, "fraction-within-20pct", 0.95, std::max(fraction, 1e-12));
    rep.worst_ratio = 0.95 / std::max(fraction, 1e-12);
    rep.pass = rep.worst_ratio <= rep.slack;
    out.push_back(std::move(rep));
  }

  {  // all-null data: tau-hat sits at its 1/m floor in >= 99% of replicates
    BoundReport rep;
    rep.check = "tau-hat-floor-under-null";
    rep.grid = detail::fmt_point("m=%g all-null, %g replicates", static_cast<double>(m),
                                 static_cast<double>(params.mc_reps));
    rep.slack = 1.0;
    std::size_t hits = 0;
    std::vector<double> xs(m);
    for (std::size_t rep_i = 0; rep_i < params.mc_reps; ++rep_i) {
      Rng rng(params.seed, 202, rep_i);
      for (auto& x : xs) x = rng.normal();
      if (estimate_tau_hat(xs, m, c1, c2) == 1.0 / static_cast<double>(m)) ++hits;
    }
    double fraction = static_cast<double>(hits) / static_cast<double>(params.mc_reps);
    detail::push_witness(rep, "fraction-at-floor", 0.99, std::max(fraction, 1e-12));
    rep.worst_ratio = 0.99 / std::max(fraction, 1e-12);
    rep.pass = rep.worst_ratio <= rep.slack;
    out.push_back(std::move(rep));
  }

  {  // alpha_m formula vs Monte Carlo exceedance frequency (3 binomial SE)
    BoundReport rep;
    rep.check = "alpha-m-formula-vs-mc";
    rep.grid = "1e6 draws";
    rep.slack = 1.0;
    const std::size_t n = 1000000;
    Rng rng(params.seed, 203, 0);
    std::size_t count = 0;
    double s1 = std::sqrt(1.0 + tg.psi2);
    for (std::size_t i = 0; i < n; ++i) {
      double x = rng.bernoulli(tg.p) ? s1 * rng.normal() : rng.normal();
      if (std::abs(x) > thr) ++count;
    }
    double freq = static_cast<double>(count) / static_cast<double>(n);
    double se = std::sqrt(alpha_m * (1.0 - alpha_m) / static_cast<double>(n));
    rep.worst_ratio = std::abs(freq - alpha_m) / (3.0 * se);
    detail::push_witness(rep, "mc-frequency", freq, alpha_m);
    rep.pass = rep.worst_ratio <= rep.slack;
    out.push_back(std::move(rep));
  }
  return out;
}

inline std::vector<BoundReport> run_bound_suite(const ShrinkagePriorSpec& spec,
                                                const std::string& suite,
                                                const AsymptoticSequence& seq,
                                                const BoundCheckParams& params) {
  std::vector<BoundReport> reports;
  auto append = [&](std::vector<BoundReport> more) {
    for (auto& r : more) reports.push_back(std::move(r));
  };
  if (suite == "hard" || suite == "all") reports.push_back(check_hard_concentration(spec, params));
  if (suite == "small-tau" || suite == "all") append(check_small_tau_bounds(spec, params));
  if (suite == "errors" || suite == "all") {
    append(check_error_probability_bounds(spec, seq, params));
    reports.push_back(check_suboptimal_tau_divergence(spec, seq, params));
  }
  if (suite == "risk" || suite == "all") append(check_risk_ratio(spec, seq, params));
  if (suite == "lemmas" || suite == "all") append(check_slow_variation_lemmas(spec, params));
  if (suite == "eb" || suite == "all") append(check_eb_tau_consistency(spec, seq, params));
  if (reports.empty()) throw invalid_argument_error("unknown bound suite: " + suite);
  return reports;
}

}  // namespace shrinktest
