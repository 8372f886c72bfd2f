#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "shrinktest/decision_rules.hpp"
#include "shrinktest/rng.hpp"

namespace shrinktest {

// Seeded Monte Carlo study of misclassification probabilities. Replicate
// streams are derived from (seed, p-index, rep-index), so results do not
// depend on thread count or scheduling, and all procedures see the same data
// within a replicate.

struct PsiRule {
  enum class Kind { SqrtTwoLogM, Explicit } kind = Kind::SqrtTwoLogM;
  double value = 0.0;  // psi^2 when explicit

  static PsiRule sqrt_two_log_m() { return {Kind::SqrtTwoLogM, 0.0}; }
  static PsiRule explicit_psi2(double psi2) { return {Kind::Explicit, psi2}; }

  double psi2_at(std::size_t m) const {
    if (kind == Kind::Explicit) return value;
    return 2.0 * std::log(static_cast<double>(m));
  }
};

struct SimConfig {
  std::size_t m = 200;
  std::vector<double> p_grid = {0.01, 0.05, 0.10, 0.15, 0.20, 0.25,
                                0.30, 0.35, 0.40, 0.45, 0.50};
  PsiRule psi_rule = PsiRule::sqrt_two_log_m();
  double sigma2 = 1.0;
  std::size_t n_reps = 1000;
  std::uint64_t seed = 20160308;
  std::vector<ProcedureSpec> procedures;
  unsigned threads = 0;  // 0 = hardware concurrency

  void validate() const {
    if (n_reps < 1) throw invalid_argument_error("n_reps must be at least 1");
    if (p_grid.empty()) throw invalid_argument_error("p grid must be nonempty");
    for (double p : p_grid) {
      if (!(p > 0.0 && p < 1.0)) throw invalid_argument_error("p grid values must lie in (0,1)");
    }
    if (procedures.empty()) throw invalid_argument_error("no procedures configured");
  }
};

struct MpEstimate {
  std::string procedure;
  double p = 0.0;
  double mp_mean = 0.0;
  double mp_se = 0.0;
  std::size_t n_reps = 0;
  std::size_t n_dropped = 0;
  std::size_t m = 0;
  double psi2 = 0.0;
  std::uint64_t seed = 0;
};

struct Replicate {
  std::vector<double> xs;
  std::vector<bool> truth;
};

inline Replicate generate_replicate(const TwoGroupsParams& params, Rng& rng) {
  validate(params);
  Replicate rep;
  rep.xs.resize(params.m);
  rep.truth.resize(params.m);
  double s0 = std::sqrt(params.sigma2);
  double s1 = std::sqrt(params.sigma2 + params.psi2);
  for (std::size_t i = 0; i < params.m; ++i) {
    bool signal = rng.bernoulli(params.p);
    rep.truth[i] = signal;
    rep.xs[i] = rng.normal() * (signal ? s1 : s0);
  }
  return rep;
}

namespace detail {

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
  unsigned hw = std::thread::hardware_concurrency();
  unsigned t = threads ? threads : (hw ? hw : 1);
  t = std::min<unsigned>(t, static_cast<unsigned>(std::max<std::size_t>(n, 1)));
  if (t <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (unsigned w = 0; w < t; ++w) {
    pool.emplace_back([&]() {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

inline std::vector<MpEstimate> run_mp_study(const SimConfig& config, CurveCache* cache = nullptr) {
  config.validate();
  CurveCache local;
  CurveCache& curves = cache ? *cache : local;
  HyperGrid grid = HyperGrid::make_default();

  std::vector<MpEstimate> out;
  for (std::size_t ip = 0; ip < config.p_grid.size(); ++ip) {
    TwoGroupsParams params;
    params.m = config.m;
    params.p = config.p_grid[ip];
    params.psi2 = config.psi_rule.psi2_at(config.m);
    params.sigma2 = config.sigma2;

    const std::size_t np = config.procedures.size();
    // mp[rep * np + j]; a replicate failing for one procedure is dropped for all.
    std::vector<double> mp(config.n_reps * np, 0.0);
    std::vector<char> ok(config.n_reps, 1);

    detail::parallel_for(config.n_reps, config.threads, [&](std::size_t rep) {
      Rng rng(config.seed, ip, rep);
      Replicate data = generate_replicate(params, rng);
      EvalContext ctx;
      ctx.cache = &curves;
      ctx.grid = &grid;
      try {
        for (std::size_t j = 0; j < np; ++j) {
          DecisionVector dec = run_procedure(config.procedures[j], data.xs, params, ctx);
          Confusion c = confusion(dec, data.truth);
          mp[rep * np + j] =
              static_cast<double>(c.misclassified()) / static_cast<double>(params.m);
        }
      } catch (const numeric_error&) {
        ok[rep] = 0;
      }
    });

    for (std::size_t j = 0; j < np; ++j) {
      std::vector<double> kept;
      kept.reserve(config.n_reps);
      for (std::size_t rep = 0; rep < config.n_reps; ++rep) {
        if (ok[rep]) kept.push_back(mp[rep * np + j]);
      }
      MeanSe ms = mean_se(kept);
      MpEstimate est;
      est.procedure = config.procedures[j].name();
      est.p = params.p;
      est.mp_mean = ms.mean;
      est.mp_se = ms.se;
      est.n_reps = kept.size();
      est.n_dropped = config.n_reps - kept.size();
      est.m = config.m;
      est.psi2 = params.psi2;
      est.seed = config.seed;
      out.push_back(std::move(est));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const MpEstimate& a, const MpEstimate& b) {
    if (a.p != b.p) return a.p < b.p;
    return a.procedure < b.procedure;
  });
  return out;
}

}  // namespace shrinktest
