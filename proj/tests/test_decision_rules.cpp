#include <catch2/catch_amalgamated.hpp>

#include "shrinktest/decision_rules.hpp"
#include "shrinktest/simulation.hpp"
#include "test_support.hpp"

using namespace shrinktest;
using Catch::Approx;

TEST_CASE("tau-hat counting, floor, and permutation invariance") {
  // m=100: threshold sqrt(2 log 100) = 3.0349; put 7 values above it
  std::vector<double> xs(100, 0.0);
  for (int i = 0; i < 7; ++i) xs[i] = 3.2 + i;
  CHECK(estimate_tau_hat(xs, 100, 2.0, 1.0) == Approx(0.07));
  // no exceedances: the 1/m floor
  std::vector<double> flat(100, 1.0);
  CHECK(estimate_tau_hat(flat, 100, 2.0, 1.0) == Approx(0.01));
  // permutation invariance
  std::vector<double> perm = xs;
  std::reverse(perm.begin(), perm.end());
  CHECK(estimate_tau_hat(perm, 100) == estimate_tau_hat(xs, 100));
  // preconditions
  CHECK_THROWS_AS(estimate_tau_hat(xs, 100, 1.0, 1.0), invalid_argument_error);
  CHECK_THROWS_AS(estimate_tau_hat(xs, 100, 2.0, 0.5), invalid_argument_error);
  CHECK_THROWS_AS(estimate_tau_hat(std::vector<double>{0.0}, 1), invalid_argument_error);
}

TEST_CASE("tau-hat concentrates at the exact exceedance probability") {
  // m=1e4, p=m^-0.5: tau-hat/alpha_m lands within the binomial law; the test
  // calibrates the Monte Carlo fraction against the exact Bin(m, alpha_m)
  // interval probability rather than a round target (the spread at this m is
  // set by sqrt(m alpha_m) and cannot be tightened by more replicates).
  const std::size_t m = 10000;
  const double p = 0.01;
  AsymptoticSequence seq{1.0, 0.5, 1.0};
  TwoGroupsParams tg = seq.params_at(m);
  double thr = std::sqrt(2.0 * std::log(static_cast<double>(m)));
  double alpha_m =
      2.0 * ((1.0 - p) * norm_sf(thr) + p * norm_sf(thr / std::sqrt(1.0 + tg.psi2)));
  long lo = static_cast<long>(std::floor(0.8 * alpha_m * static_cast<double>(m))) + 1;
  long hi = static_cast<long>(std::ceil(1.2 * alpha_m * static_cast<double>(m))) - 1;
  double exact = testsupport::binom_interval(m, alpha_m, lo, hi);

  const std::size_t reps = 400;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    Rng rng(314159, 9, r);
    Replicate data = generate_replicate(tg, rng);
    double th = estimate_tau_hat(data.xs, m, 2.0, 1.0);
    if (std::abs(th / alpha_m - 1.0) < 0.2) ++hits;
  }
  double freq = static_cast<double>(hits) / static_cast<double>(reps);
  double se = std::sqrt(exact * (1.0 - exact) / static_cast<double>(reps));
  INFO("exact interval probability " << exact << ", observed " << freq);
  CHECK(std::abs(freq - exact) <= 3.0 * se);
}

TEST_CASE("oracle procedure delegates to oracle_decide") {
  TwoGroupsParams params{50, 0.1, 10.0, 1.0};
  auto oq = derive_oracle(params);
  Rng rng(1, 2, 3);
  Replicate data = generate_replicate(params, rng);
  ProcedureSpec proc;
  proc.kind = ProcedureKind::Oracle;
  DecisionVector dec = run_procedure(proc, data.xs, params);
  for (std::size_t i = 0; i < data.xs.size(); ++i) {
    CHECK(dec.rejections[i] == oracle_decide(data.xs[i], oq));
  }
}

TEST_CASE("all-zero data rejects nothing under every procedure") {
  TwoGroupsParams params{60, 0.1, 10.5952, 1.0};
  std::vector<double> xs(params.m, 0.0);
  for (auto kind : {ProcedureKind::Oracle, ProcedureKind::BH, ProcedureKind::TunedTau,
                    ProcedureKind::EmpiricalBayes}) {
    ProcedureSpec proc;
    proc.kind = kind;
    proc.prior = horseshoe();
    proc.tau_rule = TauRule::fixed(0.1);
    DecisionVector dec = run_procedure(proc, xs, params);
    for (bool r : dec.rejections) CHECK_FALSE(r);
  }
}

TEST_CASE("empirical Bayes equals tuned-tau evaluated at tau-hat") {
  TwoGroupsParams params{80, 0.15, 10.5952, 1.0};
  Rng rng(42, 1, 0);
  Replicate data = generate_replicate(params, rng);
  double tau_hat = estimate_tau_hat(data.xs, params.m, 2.0, 1.0);

  ProcedureSpec eb;
  eb.kind = ProcedureKind::EmpiricalBayes;
  eb.prior = horseshoe();
  ProcedureSpec tuned;
  tuned.kind = ProcedureKind::TunedTau;
  tuned.prior = horseshoe();
  tuned.tau_rule = TauRule::fixed(tau_hat);

  DecisionVector de = run_procedure(eb, data.xs, params);
  DecisionVector dt = run_procedure(tuned, data.xs, params);
  for (std::size_t i = 0; i < data.xs.size(); ++i) {
    CHECK(de.statistics[i] == dt.statistics[i]);  // same statistic path, bit for bit
    CHECK(de.rejections[i] == dt.rejections[i]);
  }
}

TEST_CASE("tuned-tau rejections are monotone in tau") {
  TwoGroupsParams params{60, 0.1, 10.5952, 1.0};
  Rng rng(7, 7, 7);
  Replicate data = generate_replicate(params, rng);
  std::vector<bool> prev;
  for (double tau : {0.02, 0.1, 0.5}) {
    ProcedureSpec proc;
    proc.kind = ProcedureKind::TunedTau;
    proc.prior = horseshoe();
    proc.tau_rule = TauRule::fixed(tau);
    DecisionVector dec = run_procedure(proc, data.xs, params);
    if (!prev.empty()) {
      for (std::size_t i = 0; i < prev.size(); ++i) {
        if (prev[i]) CHECK(dec.rejections[i]);  // rejection set grows with tau
      }
    }
    prev = dec.rejections;
  }
}

TEST_CASE("tau rules resolve against the model parameters") {
  TwoGroupsParams params{100, 0.04, 9.0, 1.0};
  CHECK(TauRule::proportional(1.0).resolve(params) == Approx(0.04));
  CHECK(TauRule::proportional(2.5).resolve(params) == Approx(0.1));
  CHECK(TauRule::power(0.3).resolve(params) == Approx(std::pow(0.04, 0.3)));
  CHECK(TauRule::fixed(0.33).resolve(params) == Approx(0.33));
  TwoGroupsParams unknown = params;
  unknown.p = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(TauRule::proportional(1.0).resolve(unknown), missing_parameter_error);
  CHECK_THROWS_AS(TauRule::power(0.3).resolve(unknown), missing_parameter_error);
  CHECK(TauRule::fixed(0.33).resolve(unknown) == Approx(0.33));
}

TEST_CASE("tuned-tau tracks the oracle on a seeded sparse replicate") {
  TwoGroupsParams params{200, 0.1, 10.5952, 1.0};
  Rng rng(20160308, 3, 5);
  Replicate data = generate_replicate(params, rng);

  ProcedureSpec tuned;
  tuned.kind = ProcedureKind::TunedTau;
  tuned.prior = horseshoe();
  tuned.tau_rule = TauRule::proportional(1.0);  // tau = p
  DecisionVector dt = run_procedure(tuned, data.xs, params);

  ProcedureSpec oracle;
  oracle.kind = ProcedureKind::Oracle;
  DecisionVector doracle = run_procedure(oracle, data.xs, params);

  std::size_t disagree = 0;
  for (std::size_t i = 0; i < params.m; ++i) {
    if (dt.rejections[i] != doracle.rejections[i]) ++disagree;
  }
  CHECK(static_cast<double>(disagree) / static_cast<double>(params.m) <= 0.03);
}

TEST_CASE("confusion counting") {
  DecisionVector dec;
  dec.rejections = {true, false, true, false, true, false, true, false, true, false};
  dec.statistics.assign(10, 0.0);
  std::vector<bool> truth = {true, false, false, true, true, false, false, false, true, true};
  auto c = confusion(dec, truth);
  // hand count: tp {0,4,8}, fp {2,6}, fn {3,9}, tn {1,5,7}
  CHECK(c.tp == 3);
  CHECK(c.fp == 2);
  CHECK(c.fn == 2);
  CHECK(c.tn == 3);
  CHECK(c.misclassified() == 4);

  auto all_right = confusion({truth, std::vector<double>(10, 0.0)}, truth);
  CHECK(all_right.fp + all_right.fn == 0);
  std::vector<bool> flipped;
  for (bool t : truth) flipped.push_back(!t);
  auto all_wrong = confusion({flipped, std::vector<double>(10, 0.0)}, truth);
  CHECK(all_wrong.fp + all_wrong.fn == 10);

  CHECK_THROWS_AS(confusion(dec, std::vector<bool>(7, false)), invalid_argument_error);
}

TEST_CASE("table-backed context agrees with exact weights") {
  TwoGroupsParams params{100, 0.1, 10.5952, 1.0};
  Rng rng(88, 0, 0);
  Replicate data = generate_replicate(params, rng);
  ProcedureSpec eb;
  eb.kind = ProcedureKind::EmpiricalBayes;
  eb.prior = horseshoe();
  DecisionVector exact = run_procedure(eb, data.xs, params);
  CurveCache cache;
  EvalContext ctx;
  ctx.cache = &cache;
  DecisionVector tabled = run_procedure(eb, data.xs, params, ctx);
  for (std::size_t i = 0; i < params.m; ++i) {
    CHECK(tabled.statistics[i] == Approx(exact.statistics[i]).margin(5e-7));
    CHECK(tabled.rejections[i] == exact.rejections[i]);
  }
}
