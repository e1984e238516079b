#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "catpacket_cli/app.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("catpacket_cli_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

struct Invocation {
  int code = -1;
  std::string out;
  std::string err;
};

Invocation invoke(const std::string& command, const fs::path& config, const fs::path& out) {
  const std::string cfg = config.string();
  const std::string dst = out.string();
  const char* argv[] = {"catpacket", command.c_str(), "--config", cfg.c_str(), "--out", dst.c_str(),
                        "--threads", "2"};
  std::ostringstream o;
  std::ostringstream e;
  Invocation r;
  r.code = catpacket::cli::run(8, argv, o, e);
  r.out = o.str();
  r.err = e.str();
  return r;
}

fs::path write_config(const TempDir& dir, const std::string& name, const std::string& text) {
  const auto p = dir.path / name;
  std::ofstream(p) << text;
  return p;
}

fs::path write_config(const TempDir& dir, const std::string& name, const json& doc) {
  return write_config(dir, name, doc.dump(2));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Csv {
  std::string comment;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    FAIL("missing column " << name);
    return 0;
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Csv read_csv(const fs::path& p) {
  std::ifstream in(p);
  Csv csv;
  std::string line;
  std::getline(in, csv.comment);
  std::getline(in, line);
  csv.header = split(line);
  while (std::getline(in, line)) {
    std::vector<double> row;
    for (const auto& cell : split(line)) row.push_back(std::strtod(cell.c_str(), nullptr));
    csv.rows.push_back(std::move(row));
  }
  return csv;
}

json sweep_doc() {
  return json{{"dispersion", {{"kind", "quadratic"}, {"mass", 1.0}}},
              {"profile", {{"p0", 1.41}, {"sigma", 4.47}}},
              {"cat", {{"modes", 2}}},
              {"tau", {{"min", 0.0}, {"max", 30.0}, {"count", 61}}},
              {"barrier", {{"kind", "rectangular"}, {"height", 2.0}, {"right", 1.0}}}};
}

json bw_doc(double width, double tau_max, std::size_t count) {
  return json{{"profile", {{"p0", 1.4142135623730951}, {"sigma", 4.242640687119285}}},
              {"cat", {{"modes", 2}}},
              {"tau", {{"min", 0.0}, {"max", tau_max}, {"count", count}}},
              {"barrier",
               {{"kind", "breit_wigner"},
                {"resonances", json::array({{{"energy", 1.0}, {"width", width}}})}}},
              {"overlays", json::array({"closed_form"})}};
}

}  // namespace

TEST_CASE("configuration errors exit 1 and name the offending key") {
  TempDir dir;
  auto doc = sweep_doc();
  doc["profile"]["sigmaa"] = 1.0;
  auto r = invoke("sweep", write_config(dir, "a.json", doc), dir.path / "a.csv");
  CHECK(r.code == 1);
  CHECK(r.err.find("code=config_invalid") != std::string::npos);
  CHECK(r.err.find("path=profile.sigmaa") != std::string::npos);
  CHECK_FALSE(fs::exists(dir.path / "a.csv"));

  r = invoke("sweep", write_config(dir, "b.json", std::string("{\n  \"profile\": {\n    \"p0\": ,\n}")),
             dir.path / "b.csv");
  CHECK(r.code == 1);
  CHECK(r.err.find("line 3") != std::string::npos);

  doc = sweep_doc();
  doc["cat"] = {{"delays", {0.0, 2.0, 1.0}}};
  r = invoke("sweep", write_config(dir, "c.json", doc), dir.path / "c.csv");
  CHECK(r.code == 1);

  doc = sweep_doc();
  doc["profile"]["sigma"] = -1.0;
  r = invoke("sweep", write_config(dir, "d.json", doc), dir.path / "d.csv");
  CHECK(r.code == 1);
  CHECK(r.err.find("path=profile") != std::string::npos);

  r = invoke("sweep", dir.path / "missing.json", dir.path / "e.csv");
  CHECK(r.code == 1);
}

TEST_CASE("command line usage errors") {
  std::ostringstream o;
  std::ostringstream e;
  const char* no_out[] = {"catpacket", "sweep", "--config", "x.json"};
  CHECK(catpacket::cli::run(4, no_out, o, e) == 1);
  const char* unknown[] = {"catpacket", "frobnicate"};
  CHECK(catpacket::cli::run(2, unknown, o, e) == 1);
  const char* help[] = {"catpacket", "--help"};
  CHECK(catpacket::cli::run(2, help, o, e) == 0);
  CHECK(o.str().find("barrier-scan") != std::string::npos);
}

TEST_CASE("unreachable accuracy target exits 2 with the failing delay") {
  TempDir dir;
  auto doc = sweep_doc();
  doc["quadrature"] = {{"k_sigma", 6.0}, {"rel_tol", 1e-12}};
  const auto r = invoke("sweep", write_config(dir, "acc.json", doc), dir.path / "acc.csv");
  CHECK(r.code == 2);
  CHECK(r.err.find("code=accuracy_failure") != std::string::npos);
  CHECK(r.err.find("estimate=") != std::string::npos);
  CHECK(r.err.find("tau=") != std::string::npos);
  CHECK_FALSE(fs::exists(dir.path / "acc.csv"));
}

TEST_CASE("sweep CSV carries the config hash and round-trips exactly") {
  TempDir dir;
  const auto cfg = write_config(dir, "s.json", sweep_doc());
  const auto out = dir.path / "s.csv";
  REQUIRE(invoke("sweep", cfg, out).code == 0);
  const auto csv = read_csv(out);
  CHECK(csv.comment.rfind("# config_hash=", 0) == 0);
  CHECK(csv.comment.size() == std::string("# config_hash=").size() + 16);
  REQUIRE(csv.rows.size() == 61);
  CHECK(csv.header.front() == "tau");

  const auto first = slurp(out);
  CHECK(first.find('\r') == std::string::npos);
  REQUIRE(invoke("sweep", cfg, out).code == 0);
  CHECK(slurp(out) == first);

  // Shortest round-trip formatting: re-reading and re-printing is lossless.
  const auto ip = csv.column("p_t");
  const auto iind = csv.column("p_t_ind");
  const auto idp = csv.column("delta_p");
  for (const auto& row : csv.rows) {
    CHECK(row[idp] == doctest::Approx(row[ip] - row[iind]).epsilon(1e-12).scale(1e-12));
    CHECK(row[ip] >= 0.0);
    CHECK(row[ip] <= 1.0);
  }

  const auto diag = json::parse(slurp(dir.path / "s.diagnostics.json"));
  CHECK(diag["config_hash"] == csv.comment.substr(14));
  CHECK(diag["modes"] == 2);
  CHECK(diag.contains("overlap_threshold_tau"));

  for (const auto& entry : fs::directory_iterator(dir.path)) {
    CHECK(entry.path().filename().string().find(".tmp.") == std::string::npos);
  }
}

TEST_CASE("config hash tracks the resolved configuration") {
  TempDir dir;
  auto doc = sweep_doc();
  REQUIRE(invoke("sweep", write_config(dir, "a.json", doc), dir.path / "a.csv").code == 0);
  // Spelling out a default does not change the resolved configuration.
  doc["barrier"]["left"] = 0.0;
  REQUIRE(invoke("sweep", write_config(dir, "b.json", doc), dir.path / "b.csv").code == 0);
  doc["barrier"]["height"] = 2.5;
  REQUIRE(invoke("sweep", write_config(dir, "c.json", doc), dir.path / "c.csv").code == 0);
  const auto a = read_csv(dir.path / "a.csv").comment;
  CHECK(a == read_csv(dir.path / "b.csv").comment);
  CHECK(a != read_csv(dir.path / "c.csv").comment);
}

TEST_CASE("single-mode sweep has no interference") {
  TempDir dir;
  auto doc = sweep_doc();
  doc["cat"]["modes"] = 1;
  const auto out = dir.path / "n1.csv";
  REQUIRE(invoke("sweep", write_config(dir, "n1.json", doc), out).code == 0);
  const auto csv = read_csv(out);
  const auto idp = csv.column("delta_p");
  for (const auto& row : csv.rows) CHECK(std::abs(row[idp]) <= 1e-12);
}

TEST_CASE("explicit delay template sweep") {
  TempDir dir;
  auto doc = sweep_doc();
  doc["cat"] = {{"delays", {0.0, 1.0, 3.0}}};
  const auto out = dir.path / "d.csv";
  REQUIRE(invoke("sweep", write_config(dir, "d.json", doc), out).code == 0);
  const auto diag = json::parse(slurp(dir.path / "d.diagnostics.json"));
  CHECK(diag["modes"] == 3);

  doc["overlays"] = json::array({"closed_form"});
  doc["overlay_resonances"] = json::array({{{"energy", 1.0}, {"width", 0.014}}});
  CHECK(invoke("sweep", write_config(dir, "e.json", doc), out).code == 1);
}

TEST_CASE("barrier scan") {
  TempDir dir;
  json doc{{"profile", {{"p0", 1.41}, {"sigma", 4.47}}},
           {"barrier", {{"kind", "rectangular"}, {"height", 2.0}, {"right", 1.0}}},
           {"momentum", {{"min", 0.05}, {"max", 1.95}, {"count", 80}}}};
  auto out = dir.path / "rect.csv";
  REQUIRE(invoke("barrier-scan", write_config(dir, "rect.json", doc), out).code == 0);
  auto csv = read_csv(out);
  auto it2 = csv.column("t2");
  for (std::size_t i = 1; i < csv.rows.size(); ++i) CHECK(csv.rows[i][it2] > csv.rows[i - 1][it2]);

  doc["barrier"] = {{"kind", "breit_wigner"},
                    {"resonances", json::array({{{"energy", 0.9}, {"width", 0.3}},
                                                {{"energy", 1.0}, {"width", 0.3}}})}};
  doc["momentum"] = {{"min", 0.5}, {"max", 2.0}, {"count", 400}};
  out = dir.path / "bw.csv";
  REQUIRE(invoke("barrier-scan", write_config(dir, "bw.json", doc), out).code == 0);
  csv = read_csv(out);
  it2 = csv.column("t2");
  double peak = 0.0;
  for (const auto& row : csv.rows) {
    CHECK(row[it2] <= 1.0);
    peak = std::max(peak, row[it2]);
  }
  CHECK(peak == doctest::Approx(1.0));

  doc["barrier"] = {{"kind", "piecewise"}, {"segments", json::array()}};
  out = dir.path / "empty.csv";
  REQUIRE(invoke("barrier-scan", write_config(dir, "empty.json", doc), out).code == 0);
  csv = read_csv(out);
  it2 = csv.column("t2");
  for (const auto& row : csv.rows) CHECK(row[it2] == 1.0);
}

TEST_CASE("waveform vanishes ahead of the front and decays behind it") {
  TempDir dir;
  const json doc{{"resonance", {{"energy", 1.0}, {"width", 0.05}}},
                 {"speed", 1.0},
                 {"amplitude", 1.0},
                 {"y", {{"min", -200.0}, {"max", 10.0}, {"count", 421}}}};
  const auto out = dir.path / "w.csv";
  REQUIRE(invoke("waveform", write_config(dir, "w.json", doc), out).code == 0);
  const auto csv = read_csv(out);
  const auto iy = csv.column("y");
  const auto ia = csv.column("abs_phi");
  double prev = 0.0;
  for (const auto& row : csv.rows) {
    if (row[iy] > 0.0) {
      CHECK(row[ia] == 0.0);
    } else {
      const double front = 2.0 * std::numbers::pi * 0.05;
      CHECK(row[ia] == doctest::Approx(front * std::exp(0.05 * row[iy])).epsilon(1e-12));
      CHECK(row[ia] >= prev);
      prev = row[ia];
    }
  }
}

TEST_CASE("resonance search on a double barrier") {
  TempDir dir;
  json doc{{"barrier", {{"kind", "double_barrier"}, {"height", 5.0}, {"barrier_width", 0.6}, {"gap", 1.6}}},
           {"energy", {{"min", 0.05}, {"max", 2.0}}}};
  auto out = dir.path / "r.json";
  REQUIRE(invoke("resonances", write_config(dir, "r.json", doc), out).code == 0);
  auto report = json::parse(slurp(out));
  REQUIRE(report["resonances"].size() == 1);
  CHECK(report["resonances"][0]["peak_t2"].get<double>() >= 0.999);
  CHECK(report["resonances"][0]["E_r"].get<double>() == doctest::Approx(0.9514).epsilon(1e-3));
  CHECK(report["resonances"][0]["Gamma"].get<double>() > 0.0);

  doc["energy"] = {{"min", 1.2}, {"max", 1.3}};
  out = dir.path / "none.json";
  REQUIRE(invoke("resonances", write_config(dir, "none.json", doc), out).code == 0);
  report = json::parse(slurp(out));
  CHECK(report["resonances"].empty());
}

TEST_CASE("compare passes for a narrow resonance and flags a wide one") {
  TempDir dir;
  auto out = dir.path / "narrow.json";
  REQUIRE(invoke("compare", write_config(dir, "narrow.json", bw_doc(0.014, 150.0, 300)), out).code == 0);
  auto report = json::parse(slurp(out));
  CHECK(report["breakdown"] == false);
  CHECK(report["overlays"][0]["max_relative_deviation"].get<double>() <= 0.05);
  CHECK(report["algebraic_check"]["max_scaled_deviation"].get<double>() <= 1e-10);

  out = dir.path / "wide.json";
  const auto r = invoke("compare", write_config(dir, "wide.json", bw_doc(0.2, 40.0, 200)), out);
  CHECK(r.code == 0);
  report = json::parse(slurp(out));
  CHECK(report["breakdown"] == true);
  CHECK(report["algebraic_check"]["passed"] == true);
}

TEST_CASE("shipped configurations parse") {
  const fs::path root = CATPACKET_CONFIG_DIR;
  TempDir dir;
  for (const auto* name : {"fig2_scan.json", "double_barrier_resonances.json"}) {
    const std::string command = std::string(name) == "fig2_scan.json" ? "barrier-scan" : "resonances";
    CHECK(invoke(command, root / name, dir.path / "o").code == 0);
  }
  CHECK(invoke("waveform", root / "fig6.json", dir.path / "w.csv").code == 0);
}

TEST_CASE("single narrow resonance oscillates at the resonance energy") {
  const fs::path root = CATPACKET_CONFIG_DIR;
  TempDir dir;
  const auto out = dir.path / "fig3.csv";
  REQUIRE(invoke("sweep", root / "fig3.json", out).code == 0);
  const auto diag = json::parse(slurp(dir.path / "fig3.diagnostics.json"));
  REQUIRE(diag["oscillation"].is_object());
  CHECK(diag["oscillation"]["frequency"].get<double>() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(diag["oscillation"]["decay_rate"].get<double>() == doctest::Approx(0.014).epsilon(2e-2));
}
