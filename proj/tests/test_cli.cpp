#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "shrinktest/cli.hpp"

using namespace shrinktest;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("shrinktest-test-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

struct CaptureStdout {
  CaptureStdout() { old = std::cout.rdbuf(buffer.rdbuf()); }
  ~CaptureStdout() { std::cout.rdbuf(old); }
  std::ostringstream buffer;
  std::streambuf* old;
};

int run(std::vector<std::string> args, std::string* out = nullptr) {
  CaptureStdout cap;
  int code = cli::dispatch(std::move(args));
  if (out) *out = cap.buffer.str();
  return code;
}

}  // namespace

TEST_CASE("numeric output round-trips through 17 significant digits") {
  for (double x : {0.1, 1.0 / 3.0, 858.2, 2.0 * std::log(200.0), 1e-300, -0.123456789012345678}) {
    CHECK(std::strtod(fmt17(x).c_str(), nullptr) == x);
  }
}

TEST_CASE("oracle subcommand prints JSON and exits zero") {
  std::string out;
  int code = run({"oracle", "--m", "200", "--p", "0.1", "--psi2", "10.5952"}, &out);
  CHECK(code == 0);
  auto j = nlohmann::json::parse(out);
  CHECK(j["f"].get<double>() == Catch::Approx(9.0));
  CHECK(j["v"].get<double>() == Catch::Approx(858.2).epsilon(1e-3));
  CHECK(j["c2"].get<double>() > 0.0);
  CHECK(j["t1"].get<double>() > 0.0);
  CHECK(j["risk"].get<double>() > 0.0);
  CHECK(j.contains("risk_asymptotic"));
}

TEST_CASE("unknown subcommand and missing arguments exit 1") {
  CHECK(run({"frobnicate"}) == 1);
  CHECK(run({"simulate"}) == 1);             // --config required
  CHECK(run({"oracle", "--m", "10"}) == 1);  // --p, --psi2 required
  CHECK(run({"weight", "--x", "1", "--tau", "0.5", "--family", "unknown-prior"}) == 1);
}

TEST_CASE("weight and priors check subcommands") {
  std::string out;
  CHECK(run({"weight", "--family", "horseshoe", "--x", "2", "--tau", "0.5"}, &out) == 0);
  auto j = nlohmann::json::parse(out);
  CHECK(j["weight"].get<double>() == Catch::Approx(0.38778).epsilon(1e-4));
  CHECK(j["posterior_mean"].get<double>() ==
        Catch::Approx(2.0 * j["weight"].get<double>()).epsilon(1e-12));

  CHECK(run({"priors", "check", "--family", "standard-double-pareto"}, &out) == 0);
  j = nlohmann::json::parse(out);
  CHECK(j["a"].get<double>() == Catch::Approx(0.5));
  CHECK(j["K"].get<double>() == Catch::Approx(1.0));
  CHECK(j["normalization_ok"].get<bool>());
  CHECK(j["L_nondecreasing"].get<bool>());
  CHECK(j["slow_variation_ok"].get<bool>());
}

TEST_CASE("profile emits a CSV curve") {
  TempDir tmp;
  std::string out_path = tmp.file("profile.csv");
  CHECK(run({"profile", "--family", "horseshoe", "--tau", "0.1", "--xmax", "4", "--steps", "9",
             "--out", out_path}) == 0);
  std::string csv = read_file(out_path);
  CHECK(csv.rfind("x,weight,posterior_mean\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);  // header + 9 rows
  CHECK(fs::exists(out_path + ".manifest.json"));
}

TEST_CASE("classify round trip on a small data file") {
  TempDir tmp;
  std::string data = tmp.file("data.csv");
  write_file(data, "x\n0.1\n-0.4\n7.9\n0.3\n-6.2\n1.1\n0.0\n0.2\n-0.1\n0.05\n");
  std::string out_path = tmp.file("decisions.csv");
  CHECK(run({"classify", "--proc", "eb", "--family", "horseshoe", "--data", data, "--out",
             out_path}) == 0);
  std::string csv = read_file(out_path);
  CHECK(csv.rfind("index,x,statistic,reject\n", 0) == 0);
  // the two large observations are rejected, the rest kept
  std::size_t rejects = 0;
  for (std::size_t pos = csv.find('\n'); pos != std::string::npos; pos = csv.find('\n', pos + 1)) {
    if (csv.compare(pos + 1, 2, "2,") == 0 || csv.compare(pos + 1, 2, "4,") == 0) {
      if (csv.find(",1\n", pos + 1) != std::string::npos) ++rejects;
    }
  }
  CHECK(csv.find("7.9") != std::string::npos);

  // tuned without tau or rule is a usage error
  CHECK(run({"classify", "--proc", "tuned", "--family", "horseshoe", "--data", data, "--out",
             out_path}) == 1);
  // tau rule that needs p without p errors out
  CHECK(run({"classify", "--proc", "tuned", "--family", "horseshoe", "--tau-rule", "p", "--data",
             data, "--out", out_path}) == 1);
  // oracle needs p and psi2
  CHECK(run({"classify", "--proc", "oracle", "--data", data, "--out", out_path}) == 1);
  CHECK(run({"classify", "--proc", "oracle", "--p", "0.2", "--psi2", "10", "--data", data,
             "--out", out_path}) == 0);
}

TEST_CASE("simulate writes CSV plus manifest, and SHRINKTEST_SEED overrides") {
  TempDir tmp;
  nlohmann::json cfg = {
      {"m", 50},
      {"p_grid", {0.1}},
      {"n_reps", 8},
      {"seed", 4242},
      {"procedures", {{{"kind", "oracle"}}, {{"kind", "bh"}}}},
  };
  std::string cfg_path = tmp.file("config.json");
  write_file(cfg_path, cfg.dump());
  std::string out_path = tmp.file("mp.csv");
  CHECK(run({"--quiet", "simulate", "--config", cfg_path, "--out", out_path}) == 0);
  std::string csv1 = read_file(out_path);
  CHECK(csv1.rfind("p,procedure,mp_mean,", 0) == 0);
  CHECK(csv1.find("oracle") != std::string::npos);
  CHECK(csv1.find("bh") != std::string::npos);

  auto manifest = nlohmann::json::parse(read_file(out_path + ".manifest.json"));
  CHECK(manifest["seed"].get<std::uint64_t>() == 4242);
  CHECK(manifest["outputs"].contains(out_path));
  CHECK(manifest["outputs"][out_path].get<std::string>() == digest_hex(csv1));

  // re-running from the manifest's resolved config reproduces the bytes
  std::string cfg2_path = tmp.file("config2.json");
  write_file(cfg2_path, manifest["config"].dump());
  std::string out2_path = tmp.file("mp2.csv");
  CHECK(run({"--quiet", "simulate", "--config", cfg2_path, "--out", out2_path}) == 0);
  CHECK(read_file(out2_path) == csv1);

  // the environment seed takes precedence over the config
  setenv("SHRINKTEST_SEED", "777", 1);
  CHECK(run({"--quiet", "simulate", "--config", cfg_path, "--out", out_path}) == 0);
  unsetenv("SHRINKTEST_SEED");
  auto manifest2 = nlohmann::json::parse(read_file(out_path + ".manifest.json"));
  CHECK(manifest2["seed"].get<std::uint64_t>() == 777);
}

TEST_CASE("verify-bounds exit codes: pass suites 0, failing suite 3") {
  TempDir tmp;
  std::string report = tmp.file("report.json");
  CHECK(run({"--quiet", "verify-bounds", "--family", "horseshoe", "--suite", "lemmas",
             "--report", report}) == 0);
  auto j = nlohmann::json::parse(read_file(report));
  CHECK(j["all_pass"].get<bool>());
  CHECK(j["reports"].size() == 3);
  for (const auto& r : j["reports"]) {
    CHECK(r["verdict"].get<std::string>() == "pass");
    CHECK(r.contains("worst_ratio"));
    CHECK(r.contains("slack"));
    CHECK(r.contains("witnesses"));
  }
  // the eb suite carries the infeasible 0.95 concentration requirement
  CHECK(run({"--quiet", "verify-bounds", "--family", "horseshoe", "--suite", "eb", "--report",
             report}) == 3);
  j = nlohmann::json::parse(read_file(report));
  CHECK_FALSE(j["all_pass"].get<bool>());
}

TEST_CASE("plot renders an SVG from an mp CSV") {
  TempDir tmp;
  std::string csv =
      "p,procedure,mp_mean,mp_se,n_reps,m,psi2,seed\n"
      "0.01,oracle,0.007,0.0002,1000,200,10.59,1\n"
      "0.1,oracle,0.06,0.0006,1000,200,10.59,1\n"
      "0.01,eb-tpbn(0.5,0.5),0.008,0.0002,1000,200,10.59,1\n"
      "0.1,eb-tpbn(0.5,0.5),0.07,0.0006,1000,200,10.59,1\n";
  std::string in_path = tmp.file("mp.csv");
  write_file(in_path, csv);
  std::string out_path = tmp.file("mp.svg");
  CHECK(run({"plot", "--in", in_path, "--out", out_path}) == 0);
  std::string svg = read_file(out_path);
  CHECK(svg.find("<svg") == 0);
  CHECK(std::count(svg.begin(), svg.end(), '\n') > 10);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("oracle") != std::string::npos);
}

TEST_CASE("numeric failure maps to exit code 2") {
  // observations far outside the tau grid drive the posterior onto the tau
  // boundary; the bounds-escape guard is a numeric failure
  TempDir tmp;
  std::string data = tmp.file("huge.csv");
  write_file(data, "1e8\n-1e8\n");
  CHECK(run({"tau-posterior", "--family", "horseshoe", "--data", data, "--grid-tau", "12",
             "--grid-sigma", "6", "--out", tmp.file("m.csv")}) == 2);
}

TEST_CASE("tau-posterior emits quantiles and a marginal CSV") {
  TempDir tmp;
  std::string data = tmp.file("data.csv");
  std::string content = "x\n";
  Rng rng(5, 5, 5);
  for (int i = 0; i < 40; ++i) content += fmt17(rng.normal()) + "\n";
  content += "6.2\n-5.8\n7.1\n";
  write_file(data, content);
  std::string out_path = tmp.file("marginal.csv");
  std::string out;
  CHECK(run({"tau-posterior", "--family", "horseshoe", "--data", data, "--grid-tau", "48",
             "--grid-sigma", "24", "--out", out_path}, &out) == 0);
  auto j = nlohmann::json::parse(out);
  CHECK(j["tau_q05"].get<double>() <= j["tau_q50"].get<double>());
  CHECK(j["tau_q50"].get<double>() <= j["tau_q95"].get<double>());
  std::string csv = read_file(out_path);
  CHECK(csv.rfind("tau,density\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 49);
}
