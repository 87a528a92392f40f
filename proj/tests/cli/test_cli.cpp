#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "cli.hpp"
#include "config.hpp"
#include "doctest.h"
#include "magobs/io.hpp"

namespace fs = std::filesystem;
using magobs::cli::json;

namespace {

const fs::path kConfigs = MAGOBS_CONFIG_DIR;
const fs::path kScratch = MAGOBS_TEST_OUT;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + MAGOBS_EXE + "\" " + args + " 2>/dev/null >/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh(const std::string& name) {
  const fs::path p = kScratch / name;
  fs::remove_all(p);
  return p;
}

fs::path write_config(const std::string& name, const json& j) {
  fs::create_directories(kScratch);
  const fs::path p = kScratch / (name + ".json");
  std::ofstream(p) << j.dump(2);
  return p;
}

std::vector<std::vector<double>> read_csv(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

std::string header(const fs::path& p) {
  const std::string s = slurp(p);
  return s.substr(0, s.find('\n'));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config helpers") {
  using namespace magobs::cli;
  const auto g = parse_grid(json{{"start", -1.0}, {"stop", 1.0}, {"step", 0.5}}, "g");
  CHECK(g == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
  CHECK(parse_grid(json::array({3, 1}), "g") == std::vector<double>{3.0, 1.0});
  CHECK_THROWS_AS(parse_grid(json{{"start", 0.0}, {"stop", 1.0}, {"step", 0.0}}, "g"), ConfigError);
  CHECK_THROWS_AS(parse_grid(json{{"start", 0.0}, {"stop", 1.0}, {"stride", 1.0}}, "g"), ConfigError);

  const auto f = parse_field(json::parse(R"([{"k1": 0, "k2": 1, "re": 0.5}])"), "f");
  CHECK(f.coeff({0, -1}) == magobs::cplx(0.5));
  CHECK_THROWS_AS(parse_field(json::parse(R"([{"k1": 0, "k2": 1, "amp": 0.5}])"), "f"), ConfigError);

  CHECK(parse_region(json::object()).is_full());
  CHECK_THROWS_AS(parse_region(json{{"region", {{"rects", {{0, 1, 2}}}}}}), ConfigError);
  CHECK_THROWS_AS(get_int(json{{"N", 1.5}}, "N", 0), ConfigError);
}

TEST_CASE("sha256") {
  CHECK(magobs::cli::sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("toy model check-mgcc") {
  const fs::path out = fresh("toy");
  REQUIRE(run("check-mgcc --config \"" + (kConfigs / "toy_mgcc.json").string() + "\" --out \"" +
              out.string() + "\"") == 0);
  const auto rep = json::parse(slurp(out / "mgcc_report.json"));
  CHECK(rep.at("overall") == "violated");
  CHECK(rep.at("offending_directions") == json::array({json::array({1, 0})}));
  CHECK(header(out / "mgcc_directions.csv") == "p,q,verdict,n_crit,covered,ell");
  const auto w = json::parse(slurp(out / "witness.json"));
  CHECK(w.at("found") == true);

  const auto m = json::parse(slurp(out / "manifest.json"));
  CHECK(m.at("status") == "ok");
  CHECK(m.at("config_sha256") == magobs::cli::sha256_hex(slurp(kConfigs / "toy_mgcc.json")));
  for (const char* key : {"command", "versions", "wall_time_seconds", "warnings", "outputs"})
    CHECK(m.contains(key));
}

TEST_CASE("verify-beyond-cutoff audits extra directions") {
  const fs::path a = fresh("audit_off");
  const fs::path b = fresh("audit_on");
  const std::string cfg = "--config \"" + (kConfigs / "toy_mgcc.json").string() + "\"";
  REQUIRE(run("check-mgcc " + cfg + " --out \"" + a.string() + "\"") == 0);
  REQUIRE(run("check-mgcc " + cfg + " --verify-beyond-cutoff --out \"" + b.string() + "\"") == 0);
  CHECK(json::parse(slurp(b / "mgcc_report.json")).at("directions").size() >
        json::parse(slurp(a / "mgcc_report.json")).at("directions").size());
}

TEST_CASE("obs-constant on the full torus") {
  const fs::path out = fresh("obs_full");
  REQUIRE(run("obs-constant --config \"" + (kConfigs / "obs_full_torus.json").string() +
              "\" --out \"" + out.string() + "\"") == 0);
  const auto rows = read_csv(out / "obs.csv");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0][3] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("quasimode default config records the residual order") {
  const fs::path out = fresh("quasimode");
  REQUIRE(run("quasimode --config \"" + (kConfigs / "quasimode.json").string() + "\" --out \"" +
              out.string() + "\"") == 0);
  CHECK(header(out / "residual.csv") == "hbar,residual_l2,exterior_mass");
  const auto rows = read_csv(out / "residual.csv");
  REQUIRE(rows.size() == 5);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rows) {
    const double x = std::log(r[0]);
    const double y = std::log(r[1]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = double(rows.size());
  CHECK((n * sxy - sx * sy) / (n * sxx - sx * sx) >= 2.3);
  CHECK(json::parse(slurp(out / "wkb.json")).size() == 5);
}

TEST_CASE("every shipped config runs") {
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"gcc", "gcc_strip"},         {"simulate", "simulate"},        {"obs-constant", "obs_strips"},
      {"sharp-obs", "sharp_obs"},   {"resolvent-scan", "resolvent"}, {"witness", "witness"},
      {"control", "control"},       {"damped", "damped"},            {"normal-form", "normal_form"}};
  for (const auto& [cmd, cfg] : runs) {
    const fs::path out = fresh("all_" + cfg);
    CHECK_MESSAGE(run(cmd + " --config \"" + (kConfigs / (cfg + ".json")).string() + "\" --out \"" +
                      out.string() + "\"") == 0,
                  cmd);
    CHECK(json::parse(slurp(out / "manifest.json")).at("status") == "ok");
  }
  const fs::path sim = kScratch / "all_simulate";
  CHECK(fs::file_size(sim / "operator.bin") == 1089u * 1089u * 16u);
  CHECK(header(sim / "trajectory.csv") == "t,norm,energy");
  CHECK(header(kScratch / "all_witness" / "witness.csv") == "k,mass_ratio");
  CHECK(header(kScratch / "all_resolvent" / "resolvent.csv") == "lambda,C");
  CHECK(header(kScratch / "all_normal_form" / "remainder.csv") == "h,alpha,remainder_norm");
}

TEST_CASE("identical configs give identical CSV bytes") {
  const fs::path a = fresh("det_a");
  const fs::path b = fresh("det_b");
  const std::string cfg = "--config \"" + (kConfigs / "control.json").string() + "\"";
  REQUIRE(run("control " + cfg + " --out \"" + a.string() + "\"") == 0);
  REQUIRE(run("control " + cfg + " --threads 2 --out \"" + b.string() + "\"") == 0);
  CHECK(slurp(a / "control.csv") == slurp(b / "control.csv"));

  const fs::path c = fresh("det_c");
  const fs::path d = fresh("det_d");
  const std::string mg = "--config \"" + (kConfigs / "toy_mgcc.json").string() + "\"";
  REQUIRE(run("check-mgcc " + mg + " --out \"" + c.string() + "\"") == 0);
  REQUIRE(run("check-mgcc " + mg + " --out \"" + d.string() + "\"") == 0);
  CHECK(slurp(c / "mgcc_directions.csv") == slurp(d / "mgcc_directions.csv"));
}

TEST_CASE("config errors exit with status 2 and a report") {
  const fs::path out = fresh("bad_key");
  const auto cfg = write_config("bad_key", {{"region", {{"rects", json::array()}}}, {"colour", "red"}});
  CHECK(run("gcc --config \"" + cfg.string() + "\" --out \"" + out.string() + "\"") == 2);
  const auto err = json::parse(slurp(out / "error.json"));
  CHECK(err.at("kind") == "config");
  CHECK(err.at("command") == "gcc");
  CHECK(json::parse(slurp(out / "manifest.json")).at("status") == "error");

  const auto nested = write_config("bad_nested", {{"obs", {{"T", 1.0}, {"Tee", 2.0}}}});
  CHECK(run("obs-constant --config \"" + nested.string() + "\" --out \"" + fresh("bad_nested").string() + "\"") == 2);

  CHECK(run("gcc --config \"" + (kScratch / "missing.json").string() + "\"") == 2);
  CHECK(run("no-such-command --config x") == 2);
  CHECK(run("gcc") == 2);
}

TEST_CASE("numerical preconditions exit with status 3") {
  const auto cfg = write_config("trunc", {{"N", 2}, {"fields", {{"A1", {{{"k1", 0}, {"k2", 3}, {"re", 0.5}}}}}}});
  const fs::path out = fresh("trunc");
  CHECK(run("simulate --config \"" + cfg.string() + "\" --out \"" + out.string() + "\"") == 3);
  const auto err = json::parse(slurp(out / "error.json"));
  CHECK(err.at("kind") == "truncation");
  CHECK(err.at("dropped_mass").get<double>() > 0.0);
}

TEST_CASE("x-dependent data is rejected where the model needs y-only fields") {
  const auto cfg = write_config("xdep", {{"fields", {{"A1", {{{"k1", 1}, {"k2", 0}, {"re", 0.5}}}}}}});
  CHECK(run("quasimode --config \"" + cfg.string() + "\" --out \"" + fresh("xdep").string() + "\"") == 2);
  CHECK(run("normal-form --config \"" + cfg.string() + "\" --out \"" + fresh("xdep_nf").string() + "\"") == 2);
}

TEST_CASE("unresolved energy shells are reported as warnings") {
  auto j = json::parse(slurp(kConfigs / "sharp_obs.json"));
  j["N"] = 10;
  j["sharp_obs"]["h_list"] = {0.125, 0.1};
  const auto cfg = write_config("warn", j);
  const fs::path out = fresh("warn");
  REQUIRE(run("sharp-obs --config \"" + cfg.string() + "\" --out \"" + out.string() + "\"") == 0);
  CHECK_FALSE(json::parse(slurp(out / "manifest.json")).at("warnings").empty());
}

}  // TEST_SUITE
