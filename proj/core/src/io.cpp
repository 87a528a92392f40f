#include "magobs/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "json.hpp"
#include "magobs/errors.hpp"
#include "magobs/linalg.hpp"

namespace magobs::io {

using nlohmann::json;

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

// ---------------------------------------------------------------- CSV

Csv::Csv(std::vector<std::string> header) : header_(std::move(header)) {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) text_ += ',';
    text_ += header_[i];
  }
  text_ += '\n';
}

Csv& Csv::row(const std::vector<std::string>& cells) {
  if (cells.size() != header_.size()) throw InvalidInput("Csv: row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
  return *this;
}

std::string Csv::num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string Csv::num(long long v) { return std::to_string(v); }

// ---------------------------------------------------------------- JSON

namespace {

json field_to(const FourierField2D& f) {
  json arr = json::array();
  for (const auto& [k, c] : f.modes())
    arr.push_back({{"k1", k.k1}, {"k2", k.k2}, {"re", c.real()}, {"im", c.imag()}});
  return arr;
}

json circle_to(const CircleFunction& f) {
  json modes = json::array();
  for (int m = -f.max_mode(); m <= f.max_mode(); ++m) {
    const cplx c = f.coeff(m);
    if (c != cplx{}) modes.push_back({{"m", m}, {"re", c.real()}, {"im", c.imag()}});
  }
  return {{"ell", f.circumference()}, {"modes", modes}};
}

json complex_list(const std::vector<cplx>& v) {
  json arr = json::array();
  for (const auto& c : v) arr.push_back({{"re", c.real()}, {"im", c.imag()}});
  return arr;
}

json arcs_to(const ArcSet& a) {
  json arcs = json::array();
  for (const auto& [s, e] : a.arcs()) arcs.push_back({s, e});
  return {{"ell", a.circumference()}, {"full", a.is_full()}, {"arcs", arcs}};
}

}  // namespace

std::string field_json(const FourierField2D& f) { return field_to(f).dump(); }

FourierField2D field_from_json(const std::string& text, bool is_real) {
  const json j = json::parse(text);
  if (!j.is_array()) throw InvalidInput("field: expected an array of mode records");
  std::vector<std::pair<Mode, cplx>> modes;
  for (const auto& rec : j) {
    for (const auto& [key, value] : rec.items()) {
      if (key != "k1" && key != "k2" && key != "re" && key != "im")
        throw InvalidInput("field: unknown key '" + key + "' in mode record");
    }
    modes.emplace_back(Mode{rec.at("k1").get<int>(), rec.at("k2").get<int>()},
                       cplx{rec.value("re", 0.0), rec.value("im", 0.0)});
  }
  return FourierField2D::from_modes(modes, is_real);
}

std::string circle_json(const CircleFunction& f) { return circle_to(f).dump(); }

std::string mgcc_json(const MgccReport& report) {
  json dirs = json::array();
  for (const auto& rec : report.directions) {
    json crit = json::array();
    for (const auto& cp : rec.critical.points)
      crit.push_back({{"s", cp.position},
                      {"second_derivative", cp.second_derivative},
                      {"degenerate", cp.degenerate}});
    dirs.push_back({{"p", rec.direction.p()},
                    {"q", rec.direction.q()},
                    {"verdict", to_string(rec.verdict)},
                    {"covered", rec.covered},
                    {"a_gamma", circle_to(rec.a_gamma)},
                    {"all_critical", rec.critical.all_critical},
                    {"critical_points", crit},
                    {"projection", arcs_to(rec.projection)}});
  }
  json offending = json::array();
  for (const auto& rec : report.directions)
    if (rec.verdict == MgccVerdict::violated || rec.verdict == MgccVerdict::boundary_case)
      offending.push_back({rec.direction.p(), rec.direction.q()});
  return json{{"overall", to_string(report.overall)},
              {"cutoff", report.cutoff},
              {"offending_directions", offending},
              {"directions", dirs}}
      .dump(2);
}

Csv mgcc_csv(const MgccReport& report) {
  Csv csv({"p", "q", "verdict", "n_crit", "covered", "ell"});
  for (const auto& rec : report.directions) {
    const long long n_crit = rec.critical.all_critical
                                 ? -1
                                 : static_cast<long long>(rec.critical.points.size());
    csv.row({Csv::num(rec.direction.p()), Csv::num(rec.direction.q()), to_string(rec.verdict),
             Csv::num(n_crit), rec.covered ? "1" : "0", Csv::num(rec.projection.circumference())});
  }
  return csv;
}

std::string gcc_json(const GccReport& report) {
  json off = json::array();
  for (const auto& o : report.offenders)
    off.push_back({{"p", o.direction.p()}, {"q", o.direction.q()}, {"offset", o.offset}});
  return json{{"holds", report.holds}, {"cutoff", report.cutoff}, {"offenders", off}}.dump(2);
}

std::string wkb_json(const WkbSolution& wkb, const QuasimodeParams& params) {
  json p = {{"beta", params.beta},     {"a1_0", params.a1_0}, {"r1", params.r1},
            {"r2", params.r2},         {"w0", params.w0},     {"b", params.b},
            {"y_star", params.y_star}, {"sign", params.sign}};
  return json{{"hbar", wkb.hbar},
              {"params", p},
              {"beta1", complex_list(wkb.beta1)},
              {"beta2", complex_list(wkb.beta2)},
              {"c0", {{"re", wkb.c0.real()}, {"im", wkb.c0.imag()}}},
              {"lambda0", {{"re", wkb.lambda0.real()}, {"im", wkb.lambda0.imag()}}}}
      .dump(2);
}

Csv obs_csv(const std::vector<ObsReport>& reports) {
  Csv csv({"h", "T_eff", "lambda_min", "C_obs", "dim"});
  for (const auto& r : reports)
    csv.row({Csv::num(r.h), Csv::num(r.t), Csv::num(r.lambda_min), Csv::num(r.c_obs),
             Csv::num(r.dim)});
  return csv;
}

Csv resolvent_csv(const ResolventScan& scan) {
  Csv csv({"lambda", "C"});
  for (std::size_t i = 0; i < scan.lambdas.size(); ++i)
    csv.row({Csv::num(scan.lambdas[i]), Csv::num(scan.constants[i])});
  return csv;
}

Csv residual_csv(const ResidualScan& scan) {
  Csv csv({"hbar", "residual_l2", "exterior_mass"});
  for (const auto& r : scan.records)
    csv.row({Csv::num(r.hbar), Csv::num(r.residual_l2), Csv::num(r.exterior_mass)});
  return csv;
}

Csv witness_csv(const std::vector<WitnessRecord>& records) {
  Csv csv({"k", "mass_ratio"});
  for (const auto& r : records) csv.row({Csv::num(r.k), Csv::num(r.mass_ratio)});
  return csv;
}

Csv remainder_csv(const RemainderScan& scan) {
  Csv csv({"h", "alpha", "remainder_norm"});
  for (const auto& r : scan.records)
    csv.row({Csv::num(r.h), Csv::num(r.alpha), Csv::num(r.remainder_norm)});
  return csv;
}

Csv spectrum_csv(const RVector& values) {
  Csv csv({"index", "eigenvalue"});
  for (Eigen::Index i = 0; i < values.size(); ++i)
    csv.row({Csv::num(static_cast<long long>(i)), Csv::num(values[i])});
  return csv;
}

Csv control_csv(const HumResult& hum) {
  Csv csv({"t", "mode_index", "re", "im"});
  for (std::size_t j = 0; j < hum.times.size(); ++j)
    for (Eigen::Index i = 0; i < hum.control[j].size(); ++i)
      csv.row({Csv::num(hum.times[j]), Csv::num(static_cast<long long>(i)),
               Csv::num(hum.control[j][i].real()), Csv::num(hum.control[j][i].imag())});
  return csv;
}

void dump_operator(const std::string& stem, const HermitianOperator& op) {
  const auto& m = op.entries;
  std::string bytes(reinterpret_cast<const char*>(m.data()),
                    static_cast<std::size_t>(m.size()) * sizeof(cplx));
  write_file_atomic(stem + ".bin", bytes);
  const Mode c = op.basis.center();
  const json header = {{"N", op.basis.bandwidth()},
                       {"n1", op.basis.half_width_x()},
                       {"n2", op.basis.half_width_y()},
                       {"center", {c.k1, c.k2}},
                       {"dim", m.rows()},
                       {"ordering", "lexicographic (k1 major, k2 minor)"},
                       {"layout", "column-major complex128"},
                       {"hermitian_defect", hermitian_defect(m)}};
  write_file_atomic(stem + ".json", header.dump(2));
}

}  // namespace magobs::io
