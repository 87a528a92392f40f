#include "cli.hpp"

#include <openssl/evp.h>
#include <openssl/opensslv.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "config.hpp"
#include "magobs/errors.hpp"
#include "magobs/fields.hpp"
#include "magobs/geometry.hpp"
#include "magobs/io.hpp"
#include "magobs/obs.hpp"
#include "magobs/parallel.hpp"
#include "magobs/quasimode.hpp"
#include "magobs/spectral.hpp"
#include "magobs/weyl.hpp"

#ifndef MAGOBS_VERSION
#define MAGOBS_VERSION "unknown"
#endif

namespace magobs::cli {

namespace {

struct Context {
  json root;
  std::filesystem::path out;
  bool verify_beyond_cutoff = false;
  std::vector<std::string> warnings;
  std::vector<std::string> outputs;
  json results = json::object();

  void write(const std::string& name, const std::string& content) {
    io::write_file_atomic((out / name).string(), content);
    outputs.push_back(name);
  }
};

int basis_size(const json& root) {
  const int n = get_int(root, "N", 12);
  if (n < 1 || n > 40) throw ConfigError("N must lie in [1, 40]");
  return n;
}

void warn_unresolved(Context& ctx, double h, double rho, int n) {
  if ((1.0 + rho) / (h * h) > double(n) * n)
    ctx.warnings.push_back("h = " + std::to_string(h) +
                           ": energy shell reaches beyond the resolved window N^2 = " +
                           std::to_string(n * n));
}

// Fraction of a state's mass within `margin` modes of the basis edge.
double edge_mass(const ModeVector& s, int margin) {
  double m = 0.0;
  for (std::size_t i = 0; i < s.basis.size(); ++i)
    if (s.basis.interior_margin(s.basis.mode(i)) < margin)
      m += std::norm(s.coeffs[static_cast<Eigen::Index>(i)]);
  return m / s.coeffs.squaredNorm();
}

CircleFunction y_only(const FourierField2D& f, const char* name) {
  if (!f.is_x_independent()) throw InvalidInput(std::string(name) + " must depend on y only");
  return y_profile(f);
}

// ---------------------------------------------------------------- commands

void cmd_check_mgcc(Context& ctx) {
  const json b = block(ctx.root, "mgcc");
  check_keys(b, {"tol", "audit_span"}, "mgcc");
  const Fields f = parse_fields(ctx.root);
  const Region region = parse_region(ctx.root);
  MgccOptions opt;
  opt.tol = get_double(b, "tol", 1e-6);
  opt.audit_span = get_int(b, "audit_span", 0);
  if (ctx.verify_beyond_cutoff) opt.audit_span = std::max(opt.audit_span, 4);
  const MgccReport rep = mgcc_check(f.a, region, opt);
  ctx.write("mgcc_report.json", io::mgcc_json(rep));
  ctx.write("mgcc_directions.csv", io::mgcc_csv(rep).str());

  const WitnessResult w = optimality_witness(f.a, region, opt.tol);
  json wj = {{"found", w.witness.has_value()}, {"note", w.note}};
  if (w.witness) {
    wj["p"] = w.witness->direction.p();
    wj["q"] = w.witness->direction.q();
    wj["critical_point"] = w.witness->critical_point.position;
    wj["second_derivative"] = w.witness->critical_point.second_derivative;
    wj["offset"] = w.witness->offset;
  }
  ctx.write("witness.json", wj.dump(2));

  json offending = json::array();
  for (const auto& r : rep.directions)
    if (r.verdict == MgccVerdict::violated || r.verdict == MgccVerdict::boundary_case)
      offending.push_back({r.direction.p(), r.direction.q()});
  ctx.results = {{"overall", to_string(rep.overall)},
                 {"cutoff", rep.cutoff},
                 {"offending_directions", offending},
                 {"witness", wj}};
}

void cmd_gcc(Context& ctx) {
  const GccReport rep = gcc_check(parse_region(ctx.root));
  ctx.write("gcc_report.json", io::gcc_json(rep));
  ctx.results = {{"holds", rep.holds}, {"cutoff", rep.cutoff}};
}

void cmd_simulate(Context& ctx) {
  const json b = block(ctx.root, "simulate");
  check_keys(b, {"times", "initial"}, "simulate");
  const Fields f = parse_fields(ctx.root);
  const ModeBasis basis(basis_size(ctx.root));
  const HermitianOperator h = assemble(f.a, f.v, basis);
  if (get_bool(ctx.root, "dump_operator", false)) {
    io::dump_operator((ctx.out / "operator").string(), h);
    ctx.outputs.push_back("operator.bin");
    ctx.outputs.push_back("operator.json");
  }
  const EigenDecomposition eig = eigendecompose(h);
  ctx.write("spectrum.csv", io::spectrum_csv(eig.values).str());

  const ModeVector u0 =
      parse_packet(b.contains("initial") ? b.at("initial") : json::object(), basis, "simulate.initial");
  const int margin = std::max(f.a.bandwidth(), f.v.bandwidth());
  if (edge_mass(u0, 2 * margin + 1) > 1e-10)
    ctx.warnings.push_back("initial state has mass near the basis edge");
  const std::vector<double> times =
      b.contains("times") ? parse_grid(b.at("times"), "simulate.times") : std::vector<double>{0.0, 1.0};

  io::Csv csv({"t", "norm", "energy"});
  double drift = 0.0;
  const double e0 = energy(eig, u0);
  for (double t : times) {
    const ModeVector ut = propagate(eig, u0, t);
    const double e = energy(eig, ut);
    drift = std::max(drift, std::abs(e - e0));
    csv.row({io::Csv::num(t), io::Csv::num(ut.norm()), io::Csv::num(e)});
  }
  ctx.write("trajectory.csv", csv.str());
  ctx.results = {{"dim", basis.size()}, {"energy", e0}, {"energy_drift", drift}};
}

void cmd_obs_constant(Context& ctx) {
  const json b = block(ctx.root, "obs");
  check_keys(b, {"T", "h", "rho", "projector"}, "obs");
  const Fields f = parse_fields(ctx.root);
  const Region region = parse_region(ctx.root);
  const int n = basis_size(ctx.root);
  const ModeBasis basis(n);
  const double t = get_double(b, "T", 1.0);
  const std::string proj = get_string(b, "projector", "none");
  if (proj != "none" && proj != "hard" && proj != "smooth")
    throw ConfigError("obs.projector: expected none, hard or smooth");

  const EigenDecomposition eig = eigendecompose(assemble(f.a, f.v, basis));
  const CMatrix g = gramian(eig, region_mass_matrix(region, basis), t);
  ObsReport r;
  double h = 0.0;
  double rho = 0.0;
  if (proj == "none") {
    r = observability_constant(g, eig.vectors);
  } else {
    h = get_double(b, "h", 0.25);
    rho = get_double(b, "rho", 0.3);
    warn_unresolved(ctx, h, rho, n);
    const SpectralProjector p = spectral_projector(
        eig, {h, rho, proj == "hard" ? ProjectorProfile::hard : ProjectorProfile::smooth});
    if (p.empty()) throw NumericalError("obs: projector range is empty");
    r = observability_constant(g, p.range);
  }
  r.t = t;
  r.h = h;
  r.rho = rho;
  ctx.write("obs.csv", io::obs_csv({r}).str());
  ctx.results = {{"lambda_min", r.lambda_min}, {"C_obs", r.c_obs}, {"dim", r.dim}};
}

void cmd_sharp_obs(Context& ctx) {
  const json b = block(ctx.root, "sharp_obs");
  check_keys(b, {"T", "h_list", "rho", "geometry"}, "sharp_obs");
  const Fields f = parse_fields(ctx.root);
  SharpObsInput in{f.a, f.v, parse_region(ctx.root)};
  in.n = basis_size(ctx.root);
  in.t = get_double(b, "T", 1.0);
  in.h_list = get_double_list(b, "h_list", {1.0 / 8, 1.0 / 12, 1.0 / 16});
  in.rho = get_double(b, "rho", 0.3);
  in.geometry = get_string(b, "geometry", "");
  for (double h : in.h_list) warn_unresolved(ctx, h, in.rho, in.n);
  const auto reports = sharp_obs_experiment(in);
  json rates = json::array();
  for (const auto& r : reports) {
    if (!r.note.empty()) ctx.warnings.push_back("h = " + std::to_string(r.h) + ": " + r.note);
    rates.push_back(r.rate);
  }
  ctx.write("sharp_obs.csv", io::obs_csv(reports).str());
  ctx.results = {{"normalized_rates", rates}};
}

void cmd_resolvent_scan(Context& ctx) {
  const json b = block(ctx.root, "resolvent");
  check_keys(b, {"lambdas"}, "resolvent");
  const Fields f = parse_fields(ctx.root);
  const ModeBasis basis(basis_size(ctx.root));
  const std::vector<double> lambdas =
      b.contains("lambdas") ? parse_grid(b.at("lambdas"), "resolvent.lambdas")
                            : parse_grid(json{{"start", -400.0}, {"stop", 400.0}, {"step", 10.0}}, "");
  const EigenDecomposition eig = eigendecompose(assemble(f.a, f.v, basis));
  const ResolventScan scan =
      resolvent_scan(eig, region_mass_matrix(parse_region(ctx.root), basis), lambdas);
  const double n2 = double(basis.bandwidth()) * basis.bandwidth();
  if (!lambdas.empty() && lambdas.front() < -n2)
    ctx.warnings.push_back("lambda grid reaches below -N^2 where the truncated spectrum is unresolved");
  ctx.write("resolvent.csv", io::resolvent_csv(scan).str());
  ctx.results = {{"max_constant", scan.max_constant}};
}

void cmd_quasimode(Context& ctx) {
  const json b = block(ctx.root, "quasimode");
  check_keys(b, {"y_star", "b", "hbar_list", "grid"}, "quasimode");
  const Fields f = parse_fields(ctx.root);
  const QuasimodeParams params = extract_params_from_fields(
      y_only(f.a.a1, "A1"), y_only(f.a.a2, "A2"), y_only(f.v, "V"), get_double(b, "y_star", 0.0),
      get_double(b, "b", 1.0));
  const auto hbars = get_double_list(b, "hbar_list", {0.2, 0.14, 0.1, 0.07, 0.05});
  const ResidualScan scan = residual_scan(params, hbars, get_int(b, "grid", 4096));
  ctx.write("residual.csv", io::residual_csv(scan).str());

  json wkb = json::array();
  for (double hb : hbars) wkb.push_back(json::parse(io::wkb_json(build_wkb(params, hb), params)));
  ctx.write("wkb.json", wkb.dump(2));
  ctx.results = {{"slope", scan.slope}, {"sign", params.sign}, {"beta", params.beta}};
}

void cmd_witness(Context& ctx) {
  const json b = block(ctx.root, "witness");
  check_keys(b, {"k_list", "T", "y_star", "b", "M", "samples"}, "witness");
  const Fields f = parse_fields(ctx.root);
  WitnessInput in;
  in.a = f.a;
  in.v = f.v;
  in.region = parse_region(ctx.root);
  in.k_list = get_int_list(b, "k_list", {8, 12, 16, 20});
  in.t = get_double(b, "T", 1.0);
  in.y_star = get_double(b, "y_star", 0.0);
  in.b = get_double(b, "b", 1.0);
  in.m = get_int(b, "M", 48);
  in.samples = get_int(b, "samples", 21);
  const auto recs = witness_experiment(in);
  ctx.write("witness.csv", io::witness_csv(recs).str());
  json ext = json::array();
  for (const auto& r : recs) ext.push_back({{"k", r.k}, {"exterior_fraction", r.exterior_fraction}});
  ctx.results = {{"exterior", ext},
                 {"final_over_first", recs.back().mass_ratio / recs.front().mass_ratio}};
}

void cmd_control(Context& ctx) {
  const json b = block(ctx.root, "control");
  check_keys(b, {"T", "reg", "samples", "psi0", "psi1"}, "control");
  const Fields f = parse_fields(ctx.root);
  const ModeBasis basis(basis_size(ctx.root));
  const EigenDecomposition eig = eigendecompose(assemble(f.a, f.v, basis));
  const CMatrix m = region_mass_matrix(parse_region(ctx.root), basis);
  const ModeVector psi0 = parse_packet(b.contains("psi0") ? b.at("psi0") : json::object(), basis, "control.psi0");
  const ModeVector psi1 = parse_packet(b.contains("psi1") ? b.at("psi1") : json{{"mean", {1.0, 1.0}}}, basis, "control.psi1");
  const HumResult hum = hum_control(eig, m, get_double(b, "T", 1.0), psi0.coeffs, psi1.coeffs,
                                    get_double(b, "reg", 1e-10), get_int(b, "samples", 11));
  ctx.write("control.csv", io::control_csv(hum).str());
  const json summary = {{"error", hum.error},
                        {"relative_error", hum.relative_error},
                        {"gramian_lambda_min", hum.gramian_lambda_min}};
  ctx.write("control_summary.json", summary.dump(2));
  ctx.results = summary;
}

void cmd_damped(Context& ctx) {
  const json b = block(ctx.root, "damped");
  check_keys(b, {"a", "times", "seed"}, "damped");
  if (!b.contains("a")) throw ConfigError("damped: missing damping field 'a'");
  const Fields f = parse_fields(ctx.root);
  const ModeBasis basis(basis_size(ctx.root));
  const HermitianOperator h = assemble(f.a, f.v, basis);
  const CMatrix h_eff = damped_operator(h, parse_field(b.at("a"), "damped.a"));
  const double alpha = spectral_abscissa(h_eff);

  std::mt19937_64 rng(static_cast<std::uint64_t>(get_int(b, "seed", 1)));
  std::normal_distribution<double> n01;
  CVector psi(static_cast<Eigen::Index>(basis.size()));
  for (Eigen::Index i = 0; i < psi.size(); ++i) psi[i] = {n01(rng), n01(rng)};
  psi /= psi.norm();
  const std::vector<double> times =
      b.contains("times") ? parse_grid(b.at("times"), "damped.times")
                          : parse_grid(json{{"start", 0.0}, {"stop", 20.0}, {"step", 0.5}}, "");
  const auto norms = damped_norms(h_eff, psi, times);
  io::Csv csv({"t", "norm"});
  for (std::size_t i = 0; i < times.size(); ++i)
    csv.row({io::Csv::num(times[i]), io::Csv::num(norms[i])});
  ctx.write("damped.csv", csv.str());
  ctx.write("damped_summary.json", json{{"alpha", alpha}}.dump(2));
  ctx.results = {{"alpha", alpha}};
}

void cmd_normal_form(Context& ctx) {
  const json b = block(ctx.root, "normal_form");
  check_keys(b, {"h_list", "alpha", "n1", "n2", "apply_gauge"}, "normal_form");
  Fields f = parse_fields(ctx.root);
  if (get_bool(b, "apply_gauge", false)) f.a = first_averaging(f.a);
  const RemainderScan scan =
      remainder_scan(f.a, f.v, get_double_list(b, "h_list", {1.0 / 32, 1.0 / 48, 1.0 / 64}),
                     get_double(b, "alpha", 0.3), get_int(b, "n1", 8), get_int(b, "n2", 24));
  ctx.write("remainder.csv", io::remainder_csv(scan).str());
  json g2 = json::array();
  for (const auto& r : scan.records) g2.push_back(r.g2_norm);
  ctx.results = {{"slope", scan.slope}, {"g2_norms", g2}};
}

const std::map<std::string, std::function<void(Context&)>>& commands() {
  static const std::map<std::string, std::function<void(Context&)>> table = {
      {"check-mgcc", cmd_check_mgcc},   {"gcc", cmd_gcc},
      {"simulate", cmd_simulate},       {"obs-constant", cmd_obs_constant},
      {"sharp-obs", cmd_sharp_obs},     {"resolvent-scan", cmd_resolvent_scan},
      {"quasimode", cmd_quasimode},     {"witness", cmd_witness},
      {"control", cmd_control},         {"damped", cmd_damped},
      {"normal-form", cmd_normal_form},
  };
  return table;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

json versions() {
  return {{"magobs", MAGOBS_VERSION},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                        "." + std::to_string(EIGEN_MINOR_VERSION)},
          {"openssl", OPENSSL_VERSION_TEXT},
          {"compiler", __VERSION__}};
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, fn] : commands()) v.push_back(k);
    return v;
  }();
  return names;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    static const char* hex = "0123456789abcdef";
    os << hex[md[i] >> 4] << hex[md[i] & 15];
  }
  return os.str();
}

int run(int argc, char** argv) {
  CLI::App app{"Observability experiments for magnetic Schrodinger operators on the 2-torus"};
  std::string command;
  std::string config_path;
  std::string out_dir;
  unsigned threads = 0;
  bool verify = false;
  app.add_option("command", command, "Experiment to run")
      ->required()
      ->check(CLI::IsMember(command_names()));
  app.add_option("--config", config_path, "JSON experiment configuration")->required();
  app.add_option("--out", out_dir, "Output directory (overrides the config's \"output\")");
  app.add_option("--threads", threads, "Worker threads, 0 = auto");
  app.add_flag("--verify-beyond-cutoff", verify,
               "Also check directions beyond the cutoff in check-mgcc");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const auto t0 = std::chrono::steady_clock::now();
  Context ctx;
  ctx.verify_beyond_cutoff = verify;
  if (!out_dir.empty()) ctx.out = out_dir;
  set_num_threads(threads);

  std::string raw;
  int status = kExitOk;
  json error;
  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + config_path);
    raw.assign(std::istreambuf_iterator<char>(in), {});
    try {
      ctx.root = json::parse(raw);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    check_keys(ctx.root,
               {"description", "output", "N", "fields", "region", "dump_operator", "mgcc",
                "simulate", "obs", "sharp_obs", "resolvent", "quasimode", "witness", "control",
                "damped", "normal_form"},
               "config");
    if (out_dir.empty()) ctx.out = get_string(ctx.root, "output", "out");
    std::filesystem::create_directories(ctx.out);
    commands().at(command)(ctx);
  } catch (const ConfigError& e) {
    status = kExitConfig;
    error = {{"kind", "config"}, {"message", e.what()}};
  } catch (const json::exception& e) {
    status = kExitConfig;
    error = {{"kind", "config"}, {"message", e.what()}};
  } catch (const InvalidInput& e) {
    status = kExitConfig;
    error = {{"kind", "invalid-input"}, {"message", e.what()}};
  } catch (const TruncationError& e) {
    status = kExitNumerical;
    error = {{"kind", "truncation"}, {"message", e.what()}, {"dropped_mass", e.dropped_mass()}};
  } catch (const std::exception& e) {
    status = kExitNumerical;
    error = {{"kind", "numerical"}, {"message", e.what()}};
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json manifest = {{"command", command},
                   {"status", status == kExitOk ? "ok" : "error"},
                   {"exit_code", status},
                   {"config_path", config_path},
                   {"config_sha256", raw.empty() ? "" : sha256_hex(raw)},
                   {"versions", versions()},
                   {"threads", num_threads()},
                   {"started_at", utc_now()},
                   {"wall_time_seconds", wall},
                   {"warnings", ctx.warnings},
                   {"outputs", ctx.outputs},
                   {"results", ctx.results}};
  if (status != kExitOk) {
    manifest["error"] = error;
    std::cerr << json{{"error", error}}.dump(2) << "\n";
  }
  if (!ctx.out.empty()) {
    try {
      if (status != kExitOk) {
        json report = error;
        report["command"] = command;
        io::write_file_atomic((ctx.out / "error.json").string(), report.dump(2));
      }
      io::write_file_atomic((ctx.out / "manifest.json").string(), manifest.dump(2));
    } catch (const std::exception& e) {
      std::cerr << "could not write manifest: " << e.what() << "\n";
    }
  }
  for (const auto& w : ctx.warnings) std::cerr << "warning: " << w << "\n";
  return status;
}

}  // namespace magobs::cli
