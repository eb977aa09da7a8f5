#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dwellcert/io.hpp"

namespace {

using namespace dwellcert;

int exit_code_for(const error& e) {
  switch (e.code()) {
    case errc::verification_failed:
    case errc::certificate_mismatch:
      return 2;
    case errc::parse_error:
    case errc::validation_error:
    case errc::io_error:
    case errc::empty_family:
    case errc::dimension_mismatch:
    case errc::nonpositive_dwell_time:
    case errc::step_nonpositive:
    case errc::step_too_large:
    case errc::dimension_not_two:
      return 1;
    default:
      return 3;  // numerical failures
  }
}

void write_output(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) fail(errc::io_error, "cannot write " + out_path);
  out << content;
}

struct CommonOpts {
  std::vector<double> steps;
  int beam = -1;
  int depth = -1;
  int enum_length = -1;
  int max_iterations = -1;
  int max_vertices = -1;
  int positive = -1;  // tri-state: unset / 0 / 1
  std::string format;
  std::string out;
};

void add_search_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--beam", o.beam, "beam width of the cycle search (even)");
  cmd->add_option("--depth", o.depth, "beam search depth");
  cmd->add_option("--enum-length", o.enum_length, "exhaustive cycle enumeration length");
  cmd->add_option("--max-iterations", o.max_iterations, "invariant polytope iteration cap");
  cmd->add_option("--max-vertices", o.max_vertices, "vertex cap per mode");
  cmd->add_flag(
      "--positive,!--no-positive",
      [&o](std::int64_t v) { o.positive = v > 0 ? 1 : 0; },
      "force the positive-orthant polytopes on or off (default: auto for Metzler systems)");
}

RunConfig merge_config(RunConfig cfg, const CommonOpts& o, double dwell_time) {
  if (!o.steps.empty()) {
    cfg.steps.clear();
    for (double h : o.steps) {
      if (!(h > 0.0) || h > dwell_time)
        fail(errc::validation_error, "step " + fmt17(h) + " is outside (0, dwell_time]");
      cfg.steps.push_back(h);
    }
  }
  if (o.beam > 0) cfg.beam = o.beam;
  if (o.depth > 0) cfg.depth = o.depth;
  if (o.enum_length > 0) cfg.enum_length = o.enum_length;
  if (o.max_iterations > 0) cfg.max_iterations = o.max_iterations;
  if (o.max_vertices > 0) cfg.max_vertices = o.max_vertices;
  if (o.positive >= 0) cfg.positive_mode = o.positive == 1;
  if (!o.format.empty()) {
    if (o.format == "text") cfg.format = OutputFormat::text;
    else if (o.format == "csv") cfg.format = OutputFormat::csv;
    else if (o.format == "json") cfg.format = OutputFormat::json;
    else fail(errc::validation_error, "format must be text|csv|json");
  }
  return cfg;
}

std::string sweep_output(const SwitchingSystem& sys, const RunConfig& cfg,
                         const std::vector<StepResult>& rows, double elapsed) {
  switch (cfg.format) {
    case OutputFormat::csv: return format_sweep_csv(rows);
    case OutputFormat::json: return format_sweep_json(sys, rows);
    case OutputFormat::text: break;
  }
  return format_sweep_text(sys, rows, elapsed);
}

int cmd_bounds(const std::string& system_path, const CommonOpts& o, const std::string& cert_dir) {
  ParsedSystem ps = parse_system_file(system_path);
  for (const std::string& w : ps.warnings) std::cerr << "warning: " << w << "\n";
  const RunConfig cfg = merge_config(ps.config, o, ps.system.dwell_time);

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<StepResult> rows = run_sweep(ps.system, cfg);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!cert_dir.empty()) {
    for (const StepResult& r : rows)
      if (r.ok() && r.certificate)
        emit_certificate(*r.certificate, ps.system, r.h,
                         cert_dir + "/certificate_h" + fmt17(r.h) + ".json");
  }
  write_output(sweep_output(ps.system, cfg, rows, elapsed), o.out);
  for (const StepResult& r : rows)
    if (!r.ok()) return 3;
  return 0;
}

int cmd_jsr(const std::string& system_path, double h, const CommonOpts& o,
            const std::string& cert_path) {
  ParsedSystem ps = parse_system_file(system_path);
  const RunConfig cfg = merge_config(ps.config, o, ps.system.dwell_time);
  StepResult r = analyze_step(ps.system, h, cfg);
  if (!r.ok()) fail(errc::domain_error, r.error);

  if (!cert_path.empty()) emit_certificate(*r.certificate, ps.system, h, cert_path);

  std::string out;
  out += "h          = " + fmt17(r.h) + "\n";
  out += "rho_hat    = " + fmt17(r.report.rho_hat) + "\n";
  out += "sigma_h    = " + fmt17(r.report.sigma_lower) + "\n";
  out += "epsilon    = " + fmt17(r.report.epsilon) + "\n";
  out += std::string("status     = ") + (r.report.certified ? "certified" : "approximate") + "\n";
  const Cycle& c = r.certificate->leading_cycle;
  out += "cycle      = " +
         (r.report.leading_cycle ? r.report.leading_cycle->str() : std::string("uncertified")) +
         " [" + std::to_string(c.path.length()) + " edges, T = " + fmt17(c.path.total_time) +
         "]\n";
  write_output(out, o.out);
  return 0;
}

int cmd_verify(const std::string& cert_path, const std::string& system_path) {
  const LoadVerifyResult res = load_and_verify(cert_path, system_path);
  std::cout << res.message << "\n";
  return res.ok ? 0 : 2;
}

int cmd_plot2d(const std::string& cert_path, const std::string& out_path) {
  SwitchingSystem sys;
  double h = 0.0;
  const MultinormCertificate cert = load_certificate_file(cert_path, &sys, &h);
  export_polytopes_2d(cert, sys, h, out_path);
  std::cout << "wrote " << out_path << " and " << out_path << ".json\n";
  return 0;
}

int cmd_gen(const std::string& family, int dim, int modes, double dwell, std::uint64_t seed,
            bool no_normalize, const std::vector<double>& steps, const std::string& out) {
  RandomFamily fam;
  if (family == "gaussian") fam = RandomFamily::gaussian;
  else if (family == "metzler") fam = RandomFamily::metzler;
  else fail(errc::validation_error, "family must be gaussian|metzler");
  SwitchingSystem sys = generate_random_system(fam, dim, modes, dwell, seed, !no_normalize);
  RunConfig cfg;
  cfg.steps = steps;
  write_output(system_to_json_string(sys, steps.empty() ? nullptr : &cfg), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified Lyapunov-exponent bounds for dwell-time switching systems"};
  app.require_subcommand(1);

  // bounds
  CommonOpts bo;
  std::string bounds_system, bounds_cert_dir;
  auto* bounds = app.add_subcommand("bounds", "two-sided bounds over a sweep of steps h");
  bounds->add_option("system", bounds_system, "system JSON file")->required();
  bounds->add_option("--steps", bo.steps, "discretization steps h")->expected(-1);
  add_search_flags(bounds, bo);
  bounds->add_option("--format", bo.format, "text|csv|json");
  bounds->add_option("--cert-dir", bounds_cert_dir, "emit one certificate per step here");
  bounds->add_option("-o,--out", bo.out, "write output to a file");

  // jsr
  CommonOpts jo;
  std::string jsr_system, jsr_cert;
  double jsr_h = 0.0;
  auto* jsr = app.add_subcommand("jsr", "Markovian joint spectral radius at a single step h");
  jsr->add_option("system", jsr_system, "system JSON file")->required();
  jsr->add_option("--step", jsr_h, "discretization step h")->required();
  add_search_flags(jsr, jo);
  jsr->add_option("--cert", jsr_cert, "emit the certificate here");
  jsr->add_option("-o,--out", jo.out, "write output to a file");

  // verify
  std::string verify_cert, verify_system;
  auto* verify = app.add_subcommand("verify", "re-verify a certificate against a system file");
  verify->add_option("certificate", verify_cert, "certificate JSON file")->required();
  verify->add_option("system", verify_system, "system JSON file")->required();

  // plot2d
  std::string plot_cert, plot_out = "polytopes.svg";
  auto* plot = app.add_subcommand("plot2d", "SVG of a 2-D certificate's polytopes and images");
  plot->add_option("certificate", plot_cert, "certificate JSON file")->required();
  plot->add_option("-o,--out", plot_out, "output SVG path");

  // gen
  std::string gen_family = "gaussian", gen_out;
  int gen_dim = 2, gen_modes = 2;
  double gen_dwell = 1.0;
  std::uint64_t gen_seed = 0;
  bool gen_no_normalize = false;
  std::vector<double> gen_steps;
  auto* gen = app.add_subcommand("gen", "generate a random test system");
  gen->add_option("--family", gen_family, "gaussian|metzler");
  gen->add_option("-d,--dim", gen_dim, "dimension");
  gen->add_option("-n,--modes", gen_modes, "number of regimes");
  gen->add_option("--dwell", gen_dwell, "dwell time");
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_flag("--no-normalize", gen_no_normalize, "skip the unit 2-norm normalization");
  gen->add_option("--steps", gen_steps, "steps to embed in the file's config")->expected(-1);
  gen->add_option("-o,--out", gen_out, "write the system here (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (bounds->parsed()) return cmd_bounds(bounds_system, bo, bounds_cert_dir);
    if (jsr->parsed()) return cmd_jsr(jsr_system, jsr_h, jo, jsr_cert);
    if (verify->parsed()) return cmd_verify(verify_cert, verify_system);
    if (plot->parsed()) return cmd_plot2d(plot_cert, plot_out);
    if (gen->parsed())
      return cmd_gen(gen_family, gen_dim, gen_modes, gen_dwell, gen_seed, gen_no_normalize,
                     gen_steps, gen_out);
  } catch (const dwellcert::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
