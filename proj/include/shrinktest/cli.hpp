#pragma once

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "shrinktest/bound_verification.hpp"
#include "shrinktest/decision_rules.hpp"
#include "shrinktest/full_bayes.hpp"
#include "shrinktest/io.hpp"
#include "shrinktest/prior_families.hpp"
#include "shrinktest/simulation.hpp"

namespace shrinktest::cli {

// Exit codes: 0 success, 1 invalid arguments, 2 numeric failure,
// 3 verification failure (any failing bound report).

namespace detail {

struct FamilyArgs {
  std::string family = "horseshoe";
  double alpha = -1.0;
  double beta = -1.0;
};

inline ShrinkagePriorSpec resolve_family(const FamilyArgs& fa) {
  auto pick = [&](double def_a, double def_b, PriorFamily f) {
    double a = fa.alpha > 0 ? fa.alpha : def_a;
    double b = fa.beta > 0 ? fa.beta : def_b;
    return make_prior(f, a, b);
  };
  if (fa.family == "horseshoe" || fa.family == "hs") {
    return pick(0.5, 0.5, PriorFamily::TPBN);
  }
  if (fa.family == "strawderman-berger" || fa.family == "sb") {
    return pick(1.0, 0.5, PriorFamily::TPBN);
  }
  if (fa.family == "neg" || fa.family == "normal-exponential-gamma") {
    return pick(1.0, 0.6, PriorFamily::TPBN);
  }
  if (fa.family == "standard-double-pareto" || fa.family == "sdp") {
    return pick(1.0, 1.0, PriorFamily::GDP);
  }
  if (fa.family == "tpbn") {
    if (fa.alpha <= 0 || fa.beta <= 0) {
      throw invalid_argument_error("tpbn requires --alpha and --beta");
    }
    return make_prior(PriorFamily::TPBN, fa.alpha, fa.beta);
  }
  if (fa.family == "gdp") {
    if (fa.alpha <= 0 || fa.beta <= 0) {
      throw invalid_argument_error("gdp requires --alpha and --beta");
    }
    return make_prior(PriorFamily::GDP, fa.alpha, fa.beta);
  }
  throw invalid_argument_error("unknown family: " + fa.family);
}

inline void add_family_options(CLI::App* cmd, FamilyArgs& fa) {
  cmd->add_option("--family", fa.family,
                  "horseshoe|strawderman-berger|neg|standard-double-pareto|tpbn|gdp");
  cmd->add_option("--alpha", fa.alpha, "family hyperparameter alpha");
  cmd->add_option("--beta", fa.beta, "family hyperparameter beta");
}

inline std::vector<double> read_data_column(const std::string& path) {
  std::string content = read_file(path);
  std::vector<double> xs;
  std::size_t pos = 0;
  bool first = true;
  while (pos < content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string::npos) eol = content.size();
    std::string line = content.substr(pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t comma = line.find(',');
    std::string tok = comma == std::string::npos ? line : line.substr(0, comma);
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str()) {
      if (first) {  // header row
        first = false;
        continue;
      }
      throw invalid_argument_error("cannot parse data value: " + tok);
    }
    first = false;
    xs.push_back(v);
  }
  if (xs.empty()) throw invalid_argument_error("data file has no values: " + path);
  return xs;
}

inline TauRule parse_tau_rule(const std::string& s) {
  if (s == "p") return TauRule::proportional(1.0);
  if (s.rfind("p^", 0) == 0) return TauRule::power(std::stod(s.substr(2)));
  auto star = s.find("*p");
  if (star != std::string::npos && star + 2 == s.size()) {
    return TauRule::proportional(std::stod(s.substr(0, star)));
  }
  return TauRule::fixed(std::stod(s));  // bare number = fixed tau
}

inline std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("SHRINKTEST_SEED");
  if (!s || !*s) return std::nullopt;
  return std::strtoull(s, nullptr, 10);
}

inline ProcedureSpec procedure_from_json(const nlohmann::json& j) {
  ProcedureSpec proc;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "oracle") {
    proc.kind = ProcedureKind::Oracle;
  } else if (kind == "bh") {
    proc.kind = ProcedureKind::BH;
    if (j.contains("bh_alpha")) proc.bh_alpha = j["bh_alpha"].get<double>();
  } else {
    if (kind == "tuned") proc.kind = ProcedureKind::TunedTau;
    else if (kind == "eb") proc.kind = ProcedureKind::EmpiricalBayes;
    else if (kind == "fb") proc.kind = ProcedureKind::FullBayes;
    else throw invalid_argument_error("unknown procedure kind: " + kind);
    FamilyArgs fa;
    fa.family = j.value("family", std::string("horseshoe"));
    fa.alpha = j.value("alpha", -1.0);
    fa.beta = j.value("beta", -1.0);
    proc.prior = resolve_family(fa);
    if (j.contains("tau_rule")) {
      if (j["tau_rule"].is_number()) {
        proc.tau_rule = TauRule::fixed(j["tau_rule"].get<double>());
      } else {
        proc.tau_rule = parse_tau_rule(j["tau_rule"].get<std::string>());
      }
    }
    proc.c1 = j.value("c1", 2.0);
    proc.c2 = j.value("c2", 1.0);
  }
  if (j.contains("label")) proc.label = j["label"].get<std::string>();
  return proc;
}

inline SimConfig sim_config_from_json(const nlohmann::json& j) {
  SimConfig cfg;
  cfg.m = j.value("m", static_cast<std::uint64_t>(200));
  if (j.contains("p_grid")) cfg.p_grid = j["p_grid"].get<std::vector<double>>();
  if (j.contains("psi2")) {
    cfg.psi_rule = PsiRule::explicit_psi2(j["psi2"].get<double>());
  }
  cfg.sigma2 = j.value("sigma2", 1.0);
  cfg.n_reps = j.value("n_reps", static_cast<std::uint64_t>(1000));
  cfg.seed = j.value("seed", static_cast<std::uint64_t>(20160308));
  cfg.threads = j.value("threads", 0u);
  if (j.contains("procedures")) {
    for (const auto& pj : j["procedures"]) cfg.procedures.push_back(procedure_from_json(pj));
  }
  return cfg;
}

inline nlohmann::json sim_config_to_json(const SimConfig& cfg) {
  nlohmann::json j;
  j["m"] = cfg.m;
  j["p_grid"] = cfg.p_grid;
  if (cfg.psi_rule.kind == PsiRule::Kind::Explicit) j["psi2"] = cfg.psi_rule.value;
  else j["psi_rule"] = "sqrt(2 log m)";
  j["sigma2"] = cfg.sigma2;
  j["n_reps"] = cfg.n_reps;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  nlohmann::json procs = nlohmann::json::array();
  for (const auto& p : cfg.procedures) procs.push_back(p.name());
  j["procedures"] = procs;
  return j;
}

}  // namespace detail

inline int dispatch(std::vector<std::string> args) {
  CLI::App app{"shrinktest: multiple testing with global-local shrinkage priors"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("--quiet", quiet, "suppress progress on stderr");

  // priors check
  auto* priors = app.add_subcommand("priors", "prior family utilities");
  auto* priors_check = priors->add_subcommand("check", "derived constants and invariant checks");
  detail::FamilyArgs pc_fa;
  detail::add_family_options(priors_check, pc_fa);

  // weight
  auto* weight_cmd = app.add_subcommand("weight", "posterior shrinkage weight at one point");
  detail::FamilyArgs w_fa;
  detail::add_family_options(weight_cmd, w_fa);
  double w_x = 0.0, w_tau = 1.0, w_sigma = 1.0;
  weight_cmd->add_option("--x", w_x, "observation")->required();
  weight_cmd->add_option("--tau", w_tau, "global shrinkage parameter")->required();
  weight_cmd->add_option("--sigma", w_sigma, "noise scale (default 1)");

  // profile
  auto* profile_cmd = app.add_subcommand("profile", "weight/posterior-mean curve as CSV");
  detail::FamilyArgs p_fa;
  detail::add_family_options(profile_cmd, p_fa);
  double pr_tau = 1.0, pr_sigma = 1.0, pr_xmax = 10.0;
  std::size_t pr_steps = 101;
  std::string pr_out;
  profile_cmd->add_option("--tau", pr_tau)->required();
  profile_cmd->add_option("--sigma", pr_sigma);
  profile_cmd->add_option("--xmax", pr_xmax, "curve spans [-xmax, xmax]")->required();
  profile_cmd->add_option("--steps", pr_steps, "number of points");
  profile_cmd->add_option("--out", pr_out, "output CSV (default stdout)");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "Bayes Oracle quantities as JSON");
  std::size_t o_m = 200;
  double o_p = 0.1, o_psi2 = 10.0, o_sigma2 = 1.0;
  oracle_cmd->add_option("--m", o_m)->required();
  oracle_cmd->add_option("--p", o_p)->required();
  oracle_cmd->add_option("--psi2", o_psi2)->required();
  oracle_cmd->add_option("--sigma2", o_sigma2);

  // classify
  auto* classify_cmd = app.add_subcommand("classify", "run one procedure on a data file");
  detail::FamilyArgs c_fa;
  detail::add_family_options(classify_cmd, c_fa);
  std::string c_proc = "eb", c_data, c_out = "decisions.csv", c_tau_rule;
  double c_tau = -1.0, c_p = -1.0, c_psi2 = -1.0;
  classify_cmd->add_option("--proc", c_proc, "oracle|bh|tuned|eb|fb")->required();
  classify_cmd->add_option("--data", c_data, "CSV with one observation per row")->required();
  classify_cmd->add_option("--out", c_out, "output CSV");
  classify_cmd->add_option("--tau", c_tau, "fixed tau for the tuned rule");
  classify_cmd->add_option("--tau-rule", c_tau_rule, "p | p^A | k*p");
  classify_cmd->add_option("--p", c_p, "sparsity (oracle / tau rules that need it)");
  classify_cmd->add_option("--psi2", c_psi2, "signal variance (oracle)");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo misclassification study");
  std::string s_config, s_out = "mp.csv";
  unsigned s_threads = 0;
  bool s_threads_set = false;
  sim_cmd->add_option("--config", s_config, "JSON config")->required();
  sim_cmd->add_option("--out", s_out, "output CSV");
  sim_cmd->add_option("--threads", s_threads, "worker threads (default: hardware)")
      ->each([&](const std::string&) { s_threads_set = true; });

  // tau-posterior
  auto* tp_cmd = app.add_subcommand("tau-posterior", "grid posterior of tau given data");
  detail::FamilyArgs t_fa;
  detail::add_family_options(tp_cmd, t_fa);
  std::string t_data, t_out = "tau_marginal.csv";
  std::size_t t_ntau = 96, t_nsigma = 48;
  tp_cmd->add_option("--data", t_data)->required();
  tp_cmd->add_option("--out", t_out, "marginal CSV (tau, density)");
  tp_cmd->add_option("--grid-tau", t_ntau, "tau nodes");
  tp_cmd->add_option("--grid-sigma", t_nsigma, "sigma nodes");

  // verify-bounds
  auto* vb_cmd = app.add_subcommand("verify-bounds", "numeric certification of the bounds");
  detail::FamilyArgs v_fa;
  detail::add_family_options(vb_cmd, v_fa);
  std::string v_suite = "all", v_report = "report.json";
  double v_C = 1.0, v_eps_seq = 0.5;
  std::uint64_t v_seed = 977;
  unsigned v_threads = 0;
  vb_cmd->add_option("--suite", v_suite, "hard|small-tau|errors|risk|lemmas|eb|all");
  vb_cmd->add_option("--report", v_report, "report JSON path");
  vb_cmd->add_option("--C", v_C, "sequence limit log(v)/u");
  vb_cmd->add_option("--eps-seq", v_eps_seq, "sequence exponent in p = m^-eps");
  vb_cmd->add_option("--seed", v_seed, "Monte Carlo seed");
  vb_cmd->add_option("--threads", v_threads, "worker threads for grid evaluation");

  // plot
  auto* plot_cmd = app.add_subcommand("plot", "render an MP CSV as SVG");
  std::string pl_in, pl_out = "mp.svg";
  plot_cmd->add_option("--in", pl_in, "mp.csv from simulate")->required();
  plot_cmd->add_option("--out", pl_out, "SVG path");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, std::cout, std::cerr);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*priors_check) {
      ShrinkagePriorSpec spec = detail::resolve_family(pc_fa);
      nlohmann::json j;
      j["family"] = family_name(spec.family);
      j["alpha"] = spec.alpha;
      j["beta"] = spec.beta;
      j["a"] = spec.a;
      j["K"] = spec.K;
      j["L_limit"] = spec.L_limit;
      j["L_sup"] = spec.L_sup;
      if (!spec.warning.empty()) j["warning"] = spec.warning;
      // invariant checks: normalization, monotone bounded L, slow variation
      // (the +y is the log-axis jacobian of the density integral)
      auto logf = [&](double y) { return log_mixing_density(spec, y) + y; };
      auto res = shrinktest::detail::log_integrate_core(
          logf, {-30.0, -10.0, 0.0, 10.0, 30.0}, true, true, {});
      double norm = std::exp(res.log_value);
      j["normalization"] = norm;
      j["normalization_ok"] = std::abs(norm - 1.0) <= 1e-6;
      bool monotone = true, bounded = true;
      double prev = 0.0;
      for (int i = 0; i <= 1000; ++i) {
        double y = -23.0 + 46.0 * i / 1000.0;
        double L = std::exp(spec.log_L(y));
        if (i > 0 && L < prev * (1.0 - 1e-12)) monotone = false;
        if (L > spec.L_sup * (1.0 + 1e-9)) bounded = false;
        prev = L;
      }
      j["L_nondecreasing"] = monotone;
      j["L_bounded_by_sup"] = bounded;
      double worst_sv = 0.0;
      for (double c : {0.5, 2.0, 10.0}) {
        double r = eval_L(spec, c * 1e8) / eval_L(spec, 1e8);
        worst_sv = std::max(worst_sv, std::abs(r - 1.0));
      }
      j["slow_variation_max_dev"] = worst_sv;
      j["slow_variation_ok"] = worst_sv <= 1e-3;
      std::cout << j.dump(2) << std::endl;
      return 0;
    }

    if (*weight_cmd) {
      ShrinkagePriorSpec spec = detail::resolve_family(w_fa);
      PosteriorQuery q{w_x, w_tau, w_sigma};
      nlohmann::json j;
      j["x"] = w_x;
      j["tau"] = w_tau;
      j["sigma"] = w_sigma;
      j["weight"] = mean_shrinkage_weight(spec, q);
      j["posterior_mean"] = posterior_mean_mu(spec, q);
      std::cout << j.dump(2) << std::endl;
      return 0;
    }

    if (*profile_cmd) {
      ShrinkagePriorSpec spec = detail::resolve_family(p_fa);
      std::ostringstream csv;
      csv << "x,weight,posterior_mean\n";
      std::size_t steps = std::max<std::size_t>(pr_steps, 2);
      for (std::size_t i = 0; i < steps; ++i) {
        double x = -pr_xmax + 2.0 * pr_xmax * static_cast<double>(i) /
                                  static_cast<double>(steps - 1);
        double w = mean_shrinkage_weight(spec, {x, pr_tau, pr_sigma});
        csv << fmt17(x) << ',' << fmt17(w) << ',' << fmt17(w * x) << '\n';
      }
      if (pr_out.empty()) {
        std::cout << csv.str();
      } else {
        write_file(pr_out, csv.str());
        RunManifest man("profile", {{"tau", pr_tau}, {"xmax", pr_xmax}, {"steps", steps}}, 0);
        man.add_output(pr_out, csv.str());
        man.write(pr_out + ".manifest.json");
      }
      return 0;
    }

    if (*oracle_cmd) {
      TwoGroupsParams params{o_m, o_p, o_psi2, o_sigma2};
      OracleQuantities oq = derive_oracle(params);
      OracleErrors exact = oracle_exact_errors(params, oq);
      oq.C = std::log(oq.v) / oq.u;  // finite-m plug-in for the sequence limit
      OracleErrors asym = oracle_asymptotic_risk(oq, params.m, params.p);
      nlohmann::json j;
      j["m"] = params.m;
      j["p"] = params.p;
      j["psi2"] = params.psi2;
      j["sigma2"] = params.sigma2;
      j["u"] = oq.u;
      j["f"] = oq.f;
      j["v"] = oq.v;
      j["c2"] = oq.c2;
      j["t1"] = exact.t1;
      j["t2"] = exact.t2;
      j["risk"] = exact.risk;
      j["C_plugin"] = *oq.C;
      j["t1_asymptotic"] = asym.t1;
      j["t2_asymptotic"] = asym.t2;
      j["risk_asymptotic"] = asym.risk;
      std::cout << j.dump(2) << std::endl;
      return 0;
    }

    if (*classify_cmd) {
      std::vector<double> xs = detail::read_data_column(c_data);
      TwoGroupsParams params;
      params.m = xs.size();
      params.p = c_p > 0 ? c_p : std::numeric_limits<double>::quiet_NaN();
      params.psi2 = c_psi2 > 0 ? c_psi2 : 1.0;
      params.sigma2 = 1.0;
      ProcedureSpec proc;
      if (c_proc == "oracle") proc.kind = ProcedureKind::Oracle;
      else if (c_proc == "bh") proc.kind = ProcedureKind::BH;
      else if (c_proc == "tuned") proc.kind = ProcedureKind::TunedTau;
      else if (c_proc == "eb") proc.kind = ProcedureKind::EmpiricalBayes;
      else if (c_proc == "fb") proc.kind = ProcedureKind::FullBayes;
      else throw invalid_argument_error("unknown procedure: " + c_proc);
      if (proc.kind != ProcedureKind::Oracle && proc.kind != ProcedureKind::BH) {
        proc.prior = detail::resolve_family(c_fa);
      }
      if (c_tau > 0) proc.tau_rule = TauRule::fixed(c_tau);
      else if (!c_tau_rule.empty()) proc.tau_rule = detail::parse_tau_rule(c_tau_rule);
      if (proc.kind == ProcedureKind::Oracle) {
        if (!(c_p > 0) || !(c_psi2 > 0)) {
          throw missing_parameter_error("oracle needs --p and --psi2");
        }
      }
      if (proc.kind == ProcedureKind::TunedTau && c_tau <= 0 && c_tau_rule.empty()) {
        throw missing_parameter_error("tuned procedure needs --tau or --tau-rule");
      }
      DecisionVector dec = run_procedure(proc, xs, params);
      std::ostringstream csv;
      csv << "index,x,statistic,reject\n";
      for (std::size_t i = 0; i < xs.size(); ++i) {
        csv << i << ',' << fmt17(xs[i]) << ',' << fmt17(dec.statistics[i]) << ','
            << (dec.rejections[i] ? 1 : 0) << '\n';
      }
      write_file(c_out, csv.str());
      RunManifest man("classify", {{"proc", c_proc}, {"data", c_data}}, 0);
      man.add_output(c_out, csv.str());
      man.write(c_out + ".manifest.json");
      if (!quiet) std::cerr << "wrote " << c_out << "\n";
      return 0;
    }

    if (*sim_cmd) {
      nlohmann::json cfg_json = nlohmann::json::parse(read_file(s_config));
      SimConfig cfg = detail::sim_config_from_json(cfg_json);
      if (auto seed = detail::env_seed()) cfg.seed = *seed;
      if (s_threads_set) cfg.threads = s_threads;
      if (!quiet) {
        std::cerr << "simulate: m=" << cfg.m << " reps=" << cfg.n_reps
                  << " p-grid size=" << cfg.p_grid.size() << "\n";
      }
      auto rows = run_mp_study(cfg);
      std::string csv = mp_estimates_csv(rows);
      write_file(s_out, csv);
      std::size_t dropped = 0;
      for (const auto& r : rows) dropped = std::max(dropped, r.n_dropped);
      // the manifest's config re-runs the study byte-identically
      nlohmann::json resolved = cfg_json;
      resolved["seed"] = cfg.seed;
      resolved["threads"] = cfg.threads;
      RunManifest man("simulate", resolved, cfg.seed);
      man.add_output(s_out, csv);
      man.note("procedures", detail::sim_config_to_json(cfg)["procedures"]);
      man.note("dropped_replicates", dropped);
      man.write(s_out + ".manifest.json");
      if (!quiet) {
        std::cerr << "wrote " << s_out;
        if (dropped) std::cerr << " (" << dropped << " replicates dropped)";
        std::cerr << "\n";
      }
      return 0;
    }

    if (*tp_cmd) {
      ShrinkagePriorSpec spec = detail::resolve_family(t_fa);
      std::vector<double> xs = detail::read_data_column(t_data);
      HyperGrid grid = HyperGrid::make_default(t_ntau, t_nsigma);
      HyperPosterior post = hyper_posterior(spec, xs, grid);
      std::ostringstream csv;
      csv << "tau,density\n";
      for (std::size_t j = 0; j < post.n_tau; ++j) {
        double width = post.tau_nodes[j] * grid.tau_weights[j];  // d tau per node
        csv << fmt17(post.tau_nodes[j]) << ',' << fmt17(post.tau_marginal[j] / width) << '\n';
      }
      write_file(t_out, csv.str());
      nlohmann::json j;
      j["tau_q05"] = post.tau_quantiles[0];
      j["tau_q25"] = post.tau_quantiles[1];
      j["tau_q50"] = post.tau_quantiles[2];
      j["tau_q75"] = post.tau_quantiles[3];
      j["tau_q95"] = post.tau_quantiles[4];
      j["marginal_csv"] = t_out;
      std::cout << j.dump(2) << std::endl;
      RunManifest man("tau-posterior", {{"data", t_data}}, 0);
      man.add_output(t_out, csv.str());
      man.write(t_out + ".manifest.json");
      return 0;
    }

    if (*vb_cmd) {
      ShrinkagePriorSpec spec = detail::resolve_family(v_fa);
      BoundCheckParams params;
      if (auto seed = detail::env_seed()) v_seed = *seed;
      params.seed = v_seed;
      params.threads = v_threads;
      AsymptoticSequence seq{v_C, v_eps_seq, 1.0};
      auto reports = run_bound_suite(spec, v_suite, seq, params);
      bool all_pass = true;
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& r : reports) {
        arr.push_back(bound_report_json(r));
        all_pass = all_pass && r.pass;
        if (!quiet) {
          std::cerr << (r.pass ? "pass " : "FAIL ") << r.check << " worst=" << r.worst_ratio
                    << " slack=" << r.slack << "\n";
        }
      }
      nlohmann::json j;
      j["family"] = spec.label();
      j["suite"] = v_suite;
      j["sequence"] = {{"C", v_C}, {"epsilon", v_eps_seq}};
      j["seed"] = v_seed;
      j["all_pass"] = all_pass;
      j["reports"] = arr;
      std::string text = j.dump(2) + "\n";
      write_file(v_report, text);
      RunManifest man("verify-bounds", {{"family", spec.label()}, {"suite", v_suite}}, v_seed);
      man.add_output(v_report, text);
      man.write(v_report + ".manifest.json");
      return all_pass ? 0 : 3;
    }

    if (*plot_cmd) {
      std::string csv = read_file(pl_in);
      std::vector<MpEstimate> rows;
      std::size_t pos = csv.find('\n');  // skip header
      while (pos != std::string::npos && pos + 1 < csv.size()) {
        std::size_t eol = csv.find('\n', pos + 1);
        std::string line = csv.substr(pos + 1, eol == std::string::npos ? eol : eol - pos - 1);
        pos = eol;
        if (line.empty()) continue;
        MpEstimate row;
        char proc[128] = {0};
        double mp, se, psi2;
        unsigned long nr, m;
        unsigned long long seed;
        if (std::sscanf(line.c_str(), "%lf,%127[^,],%lf,%lf,%lu,%lu,%lf,%llu", &row.p, proc,
                        &mp, &se, &nr, &m, &psi2, &seed) >= 4) {
          row.procedure = proc;
          row.mp_mean = mp;
          row.mp_se = se;
          rows.push_back(row);
        }
      }
      std::string svg = mp_plot_svg(rows);
      write_file(pl_out, svg);
      RunManifest man("plot", {{"in", pl_in}}, 0);
      man.add_output(pl_out, svg);
      man.write(pl_out + ".manifest.json");
      return 0;
    }
  } catch (const invalid_argument_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const numeric_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

inline int dispatch(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.push_back(argv[i]);
  return dispatch(std::move(args));
}

}  // namespace shrinktest::cli
