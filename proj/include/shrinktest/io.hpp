#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "shrinktest/bound_verification.hpp"
#include "shrinktest/errors.hpp"
#include "shrinktest/simulation.hpp"

namespace shrinktest {

inline constexpr const char* kToolVersion = "0.1.0";

// 17 significant digits round-trip a double exactly; '.' decimal separator
// regardless of locale (snprintf is never fed a modified locale here).
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

inline std::string digest_hex(const std::string& data) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(data)));
  return buf;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invalid_argument_error("cannot open output file: " + path);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_argument_error("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Every file-producing run drops a manifest beside its outputs: tool version,
// resolved config, seed, timestamps, and a content digest per output file.
class RunManifest {
 public:
  RunManifest(std::string subcommand, nlohmann::json config, std::uint64_t seed)
      : subcommand_(std::move(subcommand)), config_(std::move(config)), seed_(seed),
        start_(now_iso()) {}

  void add_output(const std::string& path, const std::string& content) {
    outputs_[path] = digest_hex(content);
  }

  void note(const std::string& key, nlohmann::json value) { notes_[key] = std::move(value); }

  void write(const std::string& path) const {
    nlohmann::json j;
    j["tool"] = "shrinktest";
    j["version"] = kToolVersion;
    j["subcommand"] = subcommand_;
    j["config"] = config_;
    j["seed"] = seed_;
    j["started"] = start_;
    j["finished"] = now_iso();
    j["outputs"] = outputs_;
    j["digest_algorithm"] = "fnv1a64";
    for (const auto& [k, v] : notes_.items()) j[k] = v;
    write_file(path, j.dump(2) + "\n");
  }

 private:
  static std::string now_iso() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }

  std::string subcommand_;
  nlohmann::json config_;
  std::uint64_t seed_;
  std::string start_;
  std::map<std::string, std::string> outputs_;
  nlohmann::json notes_ = nlohmann::json::object();
};

inline std::string mp_estimates_csv(const std::vector<MpEstimate>& rows) {
  std::ostringstream out;
  out << "p,procedure,mp_mean,mp_se,n_reps,m,psi2,seed\n";
  for (const auto& r : rows) {
    out << fmt17(r.p) << ',' << r.procedure << ',' << fmt17(r.mp_mean) << ',' << fmt17(r.mp_se)
        << ',' << r.n_reps << ',' << r.m << ',' << fmt17(r.psi2) << ',' << r.seed << '\n';
  }
  return out.str();
}

inline nlohmann::json bound_report_json(const BoundReport& rep) {
  nlohmann::json j;
  j["check"] = rep.check;
  j["grid"] = rep.grid;
  j["worst_ratio"] = rep.worst_ratio;
  j["slack"] = rep.slack;
  j["verdict"] = rep.pass ? "pass" : "fail";
  nlohmann::json ws = nlohmann::json::array();
  for (const auto& w : rep.witnesses) {
    ws.push_back({{"point", w.point},
                  {"observed", w.observed},
                  {"bound", w.bound},
                  {"ratio", w.ratio}});
  }
  j["witnesses"] = ws;
  nlohmann::json traj = nlohmann::json::array();
  for (const auto& w : rep.trajectory) {
    traj.push_back({{"point", w.point}, {"ratio", w.ratio}});
  }
  j["trajectory"] = traj;
  return j;
}

// Minimal standalone SVG with one polyline per procedure (MP versus p).
inline std::string mp_plot_svg(const std::vector<MpEstimate>& rows, int width = 720,
                               int height = 480) {
  if (rows.empty()) throw invalid_argument_error("no rows to plot");
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  double px0 = 1e300, px1 = -1e300, py1 = 0.0;
  for (const auto& r : rows) {
    series[r.procedure].push_back({r.p, r.mp_mean});
    px0 = std::min(px0, r.p);
    px1 = std::max(px1, r.p);
    py1 = std::max(py1, r.mp_mean);
  }
  if (px1 <= px0) px1 = px0 + 1e-6;
  py1 = std::max(py1 * 1.1, 1e-6);
  const int ml = 64, mr = 24, mt = 24, mb = 48;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto X = [&](double p) { return ml + pw * (p - px0) / (px1 - px0); };
  auto Y = [&](double mp) { return mt + ph * (1.0 - mp / py1); };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // axes and ticks
  s << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
    << mt + ph << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
    << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    double p = px0 + (px1 - px0) * i / 5.0;
    double mp = py1 * i / 5.0;
    char lab[32];
    std::snprintf(lab, sizeof(lab), "%.3g", p);
    s << "<text x=\"" << X(p) << "\" y=\"" << mt + ph + 18
      << "\" font-size=\"11\" text-anchor=\"middle\">" << lab << "</text>\n";
    std::snprintf(lab, sizeof(lab), "%.3g", mp);
    s << "<text x=\"" << ml - 6 << "\" y=\"" << Y(mp) + 4
      << "\" font-size=\"11\" text-anchor=\"end\">" << lab << "</text>\n";
  }
  s << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 10
    << "\" font-size=\"13\" text-anchor=\"middle\">p</text>\n";
  s << "<text x=\"16\" y=\"" << mt + ph / 2
    << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << mt + ph / 2
    << ")\">misclassification probability</text>\n";
  int ci = 0, ly = mt + 8;
  for (const auto& [name, pts] : series) {
    const char* color = palette[ci % 8];
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [p, mp] : pts) s << X(p) << ',' << Y(mp) << ' ';
    s << "\"/>\n";
    for (const auto& [p, mp] : pts) {
      s << "<circle cx=\"" << X(p) << "\" cy=\"" << Y(mp) << "\" r=\"2.4\" fill=\"" << color
        << "\"/>\n";
    }
    s << "<text x=\"" << ml + pw - 150 << "\" y=\"" << ly << "\" font-size=\"12\" fill=\"" << color
      << "\">" << name << "</text>\n";
    ly += 16;
    ++ci;
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace shrinktest
