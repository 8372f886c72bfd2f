#include <catch2/catch_amalgamated.hpp>

#include "shrinktest/bound_verification.hpp"
#include "test_support.hpp"

using namespace shrinktest;
using Catch::Approx;

namespace {
const AsymptoticSequence kSeq{1.0, 0.5, 1.0};
}

TEST_CASE("hard concentration inequality holds over the declared grid") {
  for (const auto& spec : {horseshoe(), standard_double_pareto()}) {
    BoundCheckParams params;
    auto rep = check_hard_concentration(spec, params);
    INFO(spec.label() << " worst ratio " << rep.worst_ratio);
    CHECK(rep.pass);
    CHECK(rep.worst_ratio <= 1.0 + 1e-6);
    CHECK(rep.witnesses.size() <= 5);
    // the bound actually has bite somewhere (not vacuous everywhere)
    CHECK(rep.grid.find(" (0 of") == std::string::npos);
  }
}

TEST_CASE("hard concentration x=0 row alone") {
  auto hs = horseshoe();
  BoundCheckParams params;
  params.hard_x_max = 0.0;  // only the x = 0 column
  auto rep = check_hard_concentration(hs, params);
  CHECK(rep.pass);
}

TEST_CASE("small-tau bound family") {
  auto hs = horseshoe();
  BoundCheckParams params;
  auto reps = check_small_tau_bounds(hs, params);
  REQUIRE(reps.size() == 4);
  for (const auto& r : reps) {
    INFO(r.check << " worst " << r.worst_ratio << " slack " << r.slack);
    CHECK(r.pass);
  }
  // the exact normalizer ratio K Z(tau) is <= 1 and >= 0.95 at tau = 1e-4
  const auto& a5 = reps[3];
  CHECK(a5.check == "normalizer-asymptote");
  for (const auto& w : a5.trajectory) {
    CHECK(w.bound <= 1.0 + 1e-9);  // exact since (1+t tau^2)^(-1/2) <= 1
  }
  CHECK(a5.worst_ratio <= 1.0 / 0.95);
  // trajectory is recorded for every tau so regressions are visible
  CHECK(reps[0].trajectory.size() == params.tau_grid.size() * params.x_grid.size());
}

TEST_CASE("moment inequality requires a in (0,1)") {
  auto wide = make_prior(PriorFamily::GDP, 2.5, 1.0);  // a = 1.25
  BoundCheckParams params;
  CHECK_THROWS_AS(check_small_tau_bounds(wide, params), invalid_argument_error);
  CHECK_THROWS_AS(check_error_probability_bounds(wide, kSeq, params), invalid_argument_error);
}

TEST_CASE("error probability envelopes along the sequence") {
  auto hs = horseshoe();
  BoundCheckParams params;
  auto reps = check_error_probability_bounds(hs, kSeq, params);
  REQUIRE(reps.size() == 5);
  for (const auto& r : reps) {
    INFO(r.check << " worst " << r.worst_ratio);
    CHECK(r.pass);
  }
  // t2 at m = 1e6 sits inside the displayed envelope with slack 1.25
  double b48 = 2.0 * norm_cdf(std::sqrt(2.0 * hs.a)) - 1.0;
  double b46 = 2.0 * norm_cdf(std::sqrt(2.0 * hs.a / (0.49 * 0.99))) - 1.0;
  auto ee = exact_rule_errors(hs, kSeq.params_at(1000000).p, kSeq.params_at(1000000).psi2);
  CHECK(ee.t2 >= b48 / 1.25);
  CHECK(ee.t2 <= b46 * 1.25);
}

TEST_CASE("suboptimal tau = p^0.3 diverges") {
  auto hs = horseshoe();
  BoundCheckParams params;
  auto rep = check_suboptimal_tau_divergence(hs, kSeq, params);
  INFO("aggregate first/last = " << rep.worst_ratio);
  CHECK(rep.pass);  // grew by at least 2x from m = 1e3 to m = 1e6
}

TEST_CASE("risk ratio envelope and EB Monte Carlo variant") {
  auto hs = horseshoe();
  BoundCheckParams params;
  auto reps = check_risk_ratio(hs, kSeq, params);
  REQUIRE(reps.size() == 2);
  CHECK(reps[0].pass);
  CHECK(reps[1].pass);
  // at a = 1/2 the lower envelope constant is exactly 1
  double lower = (2.0 * norm_cdf(std::sqrt(2.0 * hs.a) * 1.0) - 1.0) /
                 (2.0 * norm_cdf(1.0) - 1.0);
  CHECK(lower == Approx(1.0));
}

TEST_CASE("slow variation lemma suite") {
  for (const auto& spec : {horseshoe(), normal_exponential_gamma(), standard_double_pareto()}) {
    BoundCheckParams params;
    auto reps = check_slow_variation_lemmas(spec, params);
    REQUIRE(reps.size() == 3);
    for (const auto& r : reps) {
      INFO(spec.label() << " " << r.check << " worst " << r.worst_ratio);
      CHECK(r.pass);
    }
  }
}

TEST_CASE("eb tau-hat consistency suite documents the binomial ceiling") {
  auto hs = horseshoe();
  BoundCheckParams params;
  auto reps = check_eb_tau_consistency(hs, kSeq, params);
  REQUIRE(reps.size() == 3);

  // The concentration fraction is governed by the exact Bin(m, alpha_m) law:
  // at m = 1e4, p = 0.01 the 20% band holds with probability ~0.65, so the
  // >= 0.95 requirement cannot be met. The report must agree with the law.
  const auto& conc = reps[0];
  CHECK(conc.check == "tau-hat-concentration");
  TwoGroupsParams tg = kSeq.params_at(10000);
  double thr = std::sqrt(2.0 * std::log(1e4));
  double alpha_m = 2.0 * ((1.0 - tg.p) * norm_sf(thr) +
                          tg.p * norm_sf(thr / std::sqrt(1.0 + tg.psi2)));
  long lo = static_cast<long>(std::floor(0.8 * alpha_m * 1e4)) + 1;
  long hi = static_cast<long>(std::ceil(1.2 * alpha_m * 1e4)) - 1;
  double law = testsupport::binom_interval(10000, alpha_m, lo, hi);
  double observed = 0.95 / conc.worst_ratio;  // invert the report encoding
  INFO("binomial law " << law << " observed fraction " << observed);
  CHECK(std::abs(observed - law) <= 3.0 * std::sqrt(law * (1.0 - law) / 200.0));
  CHECK_FALSE(conc.pass);  // honest failure of the 0.95 requirement

  // all-null floor: exact law P(count <= 1) ~ 0.986, just under the 0.99 ask
  const auto& floor_rep = reps[1];
  double q = 2.0 * norm_sf(thr);
  double p0 = testsupport::binom_interval(10000, q, 0, 1);
  double obs_floor = 0.99 / floor_rep.worst_ratio;
  INFO("floor law " << p0 << " observed " << obs_floor);
  CHECK(std::abs(obs_floor - p0) <= 3.0 * std::sqrt(p0 * (1.0 - p0) / 200.0));

  // the alpha_m formula itself is verified by Monte Carlo
  CHECK(reps[2].pass);
}

TEST_CASE("suite runner dispatches and aggregates") {
  auto hs = horseshoe();
  BoundCheckParams params;
  auto lemmas = run_bound_suite(hs, "lemmas", kSeq, params);
  CHECK(lemmas.size() == 3);
  CHECK_THROWS_AS(run_bound_suite(hs, "nope", kSeq, params), invalid_argument_error);
}
