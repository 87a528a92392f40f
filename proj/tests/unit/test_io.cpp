#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "magobs/errors.hpp"
#include "magobs/io.hpp"

using namespace magobs;
using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::filesystem::path scratch(const char* name) {
  const auto p = std::filesystem::temp_directory_path() / "magobs_io_test" / name;
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("CSV text") {
  io::Csv csv({"a", "b"});
  csv.row({io::Csv::num(0.1), io::Csv::num(3)});
  CHECK(csv.str() == "a,b\n0.10000000000000001,3\n");
  CHECK_THROWS_AS(csv.row({"1"}), InvalidInput);
  CHECK(std::stod(io::Csv::num(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("CSV headers") {
  auto header = [](const io::Csv& c) { return c.str().substr(0, c.str().find('\n')); };
  CHECK(header(io::residual_csv({})) == "hbar,residual_l2,exterior_mass");
  CHECK(header(io::witness_csv({})) == "k,mass_ratio");
  CHECK(header(io::resolvent_csv({})) == "lambda,C");
  CHECK(header(io::obs_csv({})) == "h,T_eff,lambda_min,C_obs,dim");
  CHECK(header(io::remainder_csv({})) == "h,alpha,remainder_norm");
}

TEST_CASE("field JSON round trip") {
  const auto f = FourierField2D::cosine({1, -2}, 0.3) + FourierField2D::constant(0.25);
  const auto g = io::field_from_json(io::field_json(f));
  for (int i = -2; i <= 2; ++i)
    for (int j = -2; j <= 2; ++j) CHECK(g.coeff({i, j}) == f.coeff({i, j}));
  CHECK_THROWS(io::field_from_json(R"([{"k1": 0, "k2": 1, "re": 1, "phase": 2}])"));
}

TEST_CASE("MGCC report JSON") {
  const VectorPotential a{FourierField2D::cosine({0, 1}, 1.0), FourierField2D(0)};
  const auto rep = mgcc_check(a, Region::horizontal_strip(1.0, 2.0));
  const auto j = json::parse(io::mgcc_json(rep));
  CHECK(j.at("overall") == "violated");
  CHECK(j.at("offending_directions") == json::array({json::array({1, 0})}));
  CHECK(j.at("directions").size() == rep.directions.size());
}

TEST_CASE("WKB JSON carries every coefficient") {
  QuasimodeParams p;
  p.r1 = {1.0, 0.0, -0.5, -0.1, 1.0 / 24};
  p.r2 = {0.3, 0.2, 0.0, 0.0, 0.0};
  const auto w = build_wkb(p, 0.1);
  const auto j = json::parse(io::wkb_json(w, p));
  CHECK(j.at("beta1").size() == 4);
  CHECK(j.at("beta2").size() == 7);
  CHECK(j.contains("c0"));
  CHECK(j.contains("lambda0"));
  CHECK(j.at("hbar") == 0.1);
}

TEST_CASE("atomic writes leave no temporary behind") {
  const auto dir = scratch("atomic");
  io::write_file_atomic((dir / "sub" / "x.txt").string(), "hello");
  CHECK(slurp(dir / "sub" / "x.txt") == "hello");
  io::write_file_atomic((dir / "sub" / "x.txt").string(), "again");
  CHECK(slurp(dir / "sub" / "x.txt") == "again");
  CHECK_FALSE(std::filesystem::exists(dir / "sub" / "x.txt.tmp"));
}

TEST_CASE("operator dump") {
  const auto dir = scratch("dump");
  const VectorPotential a{FourierField2D::cosine({0, 1}, 1.0), FourierField2D(0)};
  const auto h = assemble(a, FourierField2D(0), ModeBasis(4));
  io::dump_operator((dir / "op").string(), h);
  const std::string bin = slurp(dir / "op.bin");
  REQUIRE(bin.size() == std::size_t(81 * 81) * sizeof(cplx));
  CMatrix back(81, 81);
  std::memcpy(back.data(), bin.data(), bin.size());
  CHECK(back == h.entries);
  const auto j = json::parse(slurp(dir / "op.json"));
  CHECK(j.at("N") == 4);
  CHECK(j.at("dim") == 81);
}

}  // TEST_SUITE
