#include "commands.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "holo/holo.hpp"
#include "holo/io/csv.hpp"
#include "holo/io/gate_spec.hpp"
#include "holo/io/report_file.hpp"

namespace holo::cli {
namespace {

constexpr double kTolConstraint = 1e-12;
constexpr double kOrderLow = 1.8;
constexpr double kOrderHigh = 2.2;
// Below this the numeric error is roundoff and carries no order information.
constexpr double kExactFloor = 1e-11;
constexpr unsigned kProductSegments = 4;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string sci(double v, int digits = 3) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*e", digits, v);
  return buf;
}

std::string fixed(double v, int digits = 3) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("error while writing '" + path + "'");
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char digits[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += digits[digest[i] >> 4];
    hex += digits[digest[i] & 0xF];
  }
  return hex;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

io::ReportFile load_report(const std::string& path) { return io::read_report(read_file(path)); }

// ---------------------------------------------------------------------------

struct SynthesizeArgs {
  std::string spec;
  std::string output;
  std::vector<double> phases;
  double tol = 0.0;
};

int cmd_synthesize(const SynthesizeArgs& args, std::ostream& out) {
  const std::string text = read_file(args.spec);
  io::GateSpec spec = io::parse_gate_spec(text);

  SynthesisOptions options;
  options.phases = args.phases.empty() ? spec.phases : args.phases;
  if (!options.phases.empty() && static_cast<Index>(options.phases.size()) != spec.gate.k()) {
    throw io::ParseError("--phases: expected " + std::to_string(spec.gate.k()) + " values, got " +
                         std::to_string(options.phases.size()));
  }
  if (args.tol > 0.0) {
    options.tolerance = args.tol;
  } else if (spec.tolerance) {
    options.tolerance = *spec.tolerance;
  }

  const SynthesisReport report = synthesize(spec.gate, options);
  const io::ReportFile file = io::make_report(spec.gate, report, sha256_hex(text), utc_now());
  write_file(args.output, io::write_report(file));

  out << "gate            " << spec.gate.label() << " (k = " << spec.gate.k() << ", N = " << 2 * spec.gate.k() << ")\n";
  out << "length          " << io::format_double(report.length) << '\n';
  out << "closure_error   " << sci(report.closure_error) << '\n';
  out << "holonomy_error  " << sci(report.holonomy_error) << '\n';
  out << "tolerance       " << sci(report.tolerance) << '\n';
  out << "report          " << args.output << '\n';
  if (!report.passed) throw VerificationFailure(report.diagnostic);
  out << "result          passed\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string report;
  std::size_t steps = 2000;
  std::string method = "all";
  double tol = 1e-4;
  double tol_loop = 1e-6;
};

struct MethodRun {
  double error = 0.0;
  double closure = 0.0;
};

MethodRun run_method(std::string_view method, const ExtremalCurve& curve, const GateSpectrum& spectrum,
                     const CMatrix& reference, std::size_t n, double tol_loop) {
  if (method == "ordered_product") {
    const FramePath path = gauge_twisted_sample(curve, moving_mode_twist(spectrum), n);
    const HolonomyReport r = ordered_product_holonomy(path, tol_loop, kProductSegments);
    return {(r.gamma - reference).norm(), r.closure_error};
  }
  const FramePath frames = curve.sample(n);
  const LiftedHolonomy lifted = lifted_holonomy(projector_path(frames), frames.front().frame, tol_loop);
  return {transport_residual(lifted.lift, reference), lifted.report.closure_error};
}

int cmd_verify(const VerifyArgs& args, std::ostream& out) {
  const io::ReportFile report = load_report(args.report);
  const Controller controller = io::controller_of(report);
  const GateSpectrum spectrum = io::spectrum_of(report);
  const Index k = controller.k();
  bool ok = true;

  out << "report             " << report.gate_label << " (k = " << k << ", N = " << 2 * k << ")\n";

  const double residual = constraint_residual(report.x, StiefelFrame::canonical(2 * k, k));
  const bool residual_ok = residual <= kTolConstraint;
  ok &= residual_ok;
  out << "constraint_residual " << sci(residual) << (residual_ok ? "  ok" : "  FLAGGED (Z block is nonzero)") << '\n';
  const double mismatch = io::generator_mismatch(report);
  out << "generator_mismatch  " << sci(mismatch);
  if (mismatch != 0.0) out << "  (stored X differs from [[Ω, W], [-W†, 0]])";
  out << '\n';

  const ExtremalCurve curve(controller);
  const HolonomyReport analytic = analytic_holonomy(curve);
  const double gate_error = (analytic.gamma - report.gate).norm();
  const bool analytic_ok = gate_error <= report.tolerance && analytic.closure_error <= report.tolerance;
  ok &= analytic_ok;
  out << "analytic            holonomy_error " << sci(gate_error) << "  closure_error "
      << sci(analytic.closure_error) << (analytic_ok ? "  ok" : "  FAILED") << '\n';

  std::vector<std::string> methods;
  if (args.method == "all") {
    methods = {"ordered_product", "lifted_ode"};
  } else {
    methods = {args.method};
  }
  const std::size_t n1 = args.steps, n2 = 2 * args.steps;
  for (const auto& method : methods) {
    auto coarse = std::async(std::launch::async, [&] {
      return run_method(method, curve, spectrum, analytic.gamma, n1, args.tol_loop);
    });
    const MethodRun fine = run_method(method, curve, spectrum, analytic.gamma, n2, args.tol_loop);
    const MethodRun first = coarse.get();

    std::string order_text = "exact";
    bool order_ok = true;
    if (first.error > kExactFloor && fine.error > kExactFloor) {
      const double h1 = 1.0 / static_cast<double>(n1 - 1), h2 = 1.0 / static_cast<double>(n2 - 1);
      const double order = std::log(first.error / fine.error) / std::log(h1 / h2);
      order_ok = order >= kOrderLow && order <= kOrderHigh;
      order_text = fixed(order);
    }
    const bool method_ok = first.error <= args.tol && order_ok;
    ok &= method_ok;
    out << method << std::string(20 - std::min<std::size_t>(method.size(), 19), ' ') << "n=" << n1 << " error "
        << sci(first.error) << "  n=" << n2 << " error " << sci(fine.error) << "  order " << order_text
        << (method_ok ? "  ok" : "  FAILED") << '\n';
  }

  if (!ok) throw VerificationFailure("verification failed for '" + report.gate_label + "'");
  out << "result              passed\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string report;
  std::vector<double> t_totals{25.0, 50.0, 100.0, 200.0};
  double gap = 1.0;
  std::size_t steps = 0;
  std::string traversal = "smooth";
  std::string csv;
};

struct SweepRow {
  double t_total = 0.0;
  std::size_t steps = 0;
  double error = std::numeric_limits<double>::quiet_NaN();
  double leakage = std::numeric_limits<double>::quiet_NaN();
  double peak_leakage = std::numeric_limits<double>::quiet_NaN();
  std::string status = "ok";
};

SweepRow simulate_row(const ExtremalCurve& curve, const CMatrix& reference, double t_total, const SimulateArgs& args,
                      Traversal traversal) {
  SweepRow row;
  row.t_total = t_total;
  try {
    const auto schedule = HamiltonianSchedule::two_band(curve, args.gap, t_total, traversal);
    row.steps = args.steps == 0 ? default_steps(schedule) : args.steps;
    const SimulatedHolonomy sim = simulate_holonomy(schedule, row.steps);
    row.error = (sim.gamma - reference).norm();
    row.leakage = sim.leakage;
    row.peak_leakage = sim.peak_leakage;
  } catch (const AdiabaticityError& e) {
    row.leakage = e.final_leakage();
    row.peak_leakage = e.peak_leakage();
    row.status = "diabatic";
  } catch (const StepSizeError&) {
    row.status = "step_too_large";
  }
  return row;
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out) {
  const io::ReportFile report = load_report(args.report);
  const Controller controller = io::controller_of(report);
  for (double t : args.t_totals) {
    if (!(t > 0.0) || !std::isfinite(t)) throw io::ParseError("--T-total values must be positive and finite");
  }
  if (!(args.gap > 0.0)) throw io::ParseError("--gap must be positive");
  const Traversal traversal = args.traversal == "uniform" ? Traversal::uniform : Traversal::smooth;

  const ExtremalCurve curve(controller);
  const CMatrix reference = analytic_holonomy(curve).gamma;

  std::vector<std::future<SweepRow>> jobs;
  for (double t : args.t_totals) {
    jobs.push_back(
        std::async(std::launch::async, [&, t] { return simulate_row(curve, reference, t, args, traversal); }));
  }
  std::vector<SweepRow> rows;
  for (auto& job : jobs) rows.push_back(job.get());

  out << "report " << report.gate_label << ", gap " << io::format_double(args.gap) << ", traversal "
      << to_string(traversal) << '\n';
  out << "T_total        steps   holonomy_error  leakage     peak_leakage  status\n";
  for (const auto& r : rows) {
    char line[160];
    std::snprintf(line, sizeof line, "%-13s  %-6zu  %-14s  %-10s  %-12s  %s\n", io::format_double(r.t_total).c_str(),
                  r.steps, sci(r.error).c_str(), sci(r.leakage).c_str(), sci(r.peak_leakage).c_str(), r.status.c_str());
    out << line;
  }

  if (!args.csv.empty()) {
    std::ostringstream csv;
    io::CsvWriter writer(csv);
    writer.header({"T_total", "steps", "holonomy_error", "leakage", "peak_leakage", "status"});
    for (const auto& r : rows) {
      writer.row(std::vector<std::string>{io::format_double(r.t_total), std::to_string(r.steps),
                                          io::format_double(r.error), io::format_double(r.leakage),
                                          io::format_double(r.peak_leakage), r.status});
    }
    write_file(args.csv, csv.str());
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct ExportArgs {
  std::string report;
  std::size_t samples = 2000;
  std::string what = "frames";
  std::string output;
};

void export_matrices(io::CsvWriter& writer, const FramePath& path, bool projectors) {
  const Index rows = path.ambient_dim();
  const Index cols = projectors ? rows : path.rank();
  const std::string prefix = projectors ? "p" : "v";
  std::vector<std::string> header{"t"};
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const std::string cell = prefix + "_" + std::to_string(r) + "_" + std::to_string(c);
      header.push_back(cell + "_re");
      header.push_back(cell + "_im");
    }
  }
  writer.header(header);
  for (const auto& s : path) {
    const CMatrix& v = s.frame.matrix();
    const CMatrix m = projectors ? CMatrix(v * v.adjoint()) : v;
    std::vector<double> values{s.t};
    for (Index r = 0; r < rows; ++r) {
      for (Index c = 0; c < cols; ++c) {
        values.push_back(m(r, c).real());
        values.push_back(m(r, c).imag());
      }
    }
    writer.row(values);
  }
}

void export_bloch(io::CsvWriter& writer, const FramePath& path, const GateSpectrum& spectrum) {
  const Index k = path.rank();
  std::vector<std::vector<Vec3>> loops;
  std::vector<SolidAngleTrace> traces;
  for (Index j = 0; j < k; ++j) {
    loops.push_back(mode_bloch_loop(path, spectrum.rotation, j));
    traces.push_back(accumulate_solid_angle(loops.back()));
  }
  writer.comment("solid_angle_j: running area of the cap to the right of travel (clockwise about the circulation "
                 "axis a_j); per-mode holonomy exp(+i*solid_angle_j/2)");
  for (Index j = 0; j < k; ++j) {
    const Vec3& a = traces[static_cast<std::size_t>(j)].axis;
    const double gamma = spectrum.gammas[static_cast<std::size_t>(j)];
    writer.comment("mode " + std::to_string(j) + ": gamma " + io::format_double(gamma) + ", axis a = (" +
                   io::format_double(a.x()) + ", " + io::format_double(a.y()) + ", " + io::format_double(a.z()) + ")");
  }
  std::vector<std::string> header{"t"};
  for (Index j = 0; j < k; ++j) {
    const std::string m = std::to_string(j);
    header.insert(header.end(), {"n" + m + "_x", "n" + m + "_y", "n" + m + "_z", "solid_angle_" + m,
                                 "ratio_to_2gamma_" + m});
  }
  writer.header(header);
  for (std::size_t i = 0; i < path.size(); ++i) {
    std::vector<double> values{path[i].t};
    for (Index j = 0; j < k; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      const Vec3& n = loops[uj][i];
      const double angle = traces[uj].accumulated[i];
      const double twice_gamma = 2.0 * spectrum.gammas[uj];
      const double ratio = twice_gamma == 0.0 ? std::numeric_limits<double>::quiet_NaN() : angle / twice_gamma;
      values.insert(values.end(), {n.x(), n.y(), n.z(), angle, ratio});
    }
    writer.row(values);
  }
}

int cmd_export_curve(const ExportArgs& args, std::ostream& out) {
  const io::ReportFile report = load_report(args.report);
  const Controller controller = io::controller_of(report);
  if (args.samples < 2) throw io::ParseError("--samples must be at least 2");
  const ExtremalCurve curve(controller);
  const FramePath path = curve.sample(args.samples);

  std::ostringstream csv;
  io::CsvWriter writer(csv);
  if (args.what == "bloch") {
    export_bloch(writer, path, io::spectrum_of(report));
  } else {
    writer.comment("curve V(t) = exp(tX) V0 exp(-t Omega), V0 = (I_k; 0), t in [0, 1]; entries row-major");
    export_matrices(writer, path, args.what == "projectors");
  }
  if (args.output.empty() || args.output == "-") {
    out << csv.str();
  } else {
    write_file(args.output, csv.str());
  }
  return kOk;
}

// ---------------------------------------------------------------------------

int cmd_catalog(std::ostream& out) {
  for (const auto& e : gate_catalog_entries()) {
    char line[200];
    std::snprintf(line, sizeof line, "%-10s %-22s %s\n", std::string(e.name).c_str(),
                  e.parameters.empty() ? "-" : std::string(e.parameters).c_str(), std::string(e.description).c_str());
    out << line;
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Holonomic gate synthesis on Grassmann loops", "holo"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  SynthesizeArgs synth;
  auto* synthesize_cmd = app.add_subcommand("synthesize", "synthesize a controller for a gate spec");
  synthesize_cmd->add_option("spec", synth.spec, "gate specification (JSON)")->required();
  synthesize_cmd->add_option("-o,--output", synth.output, "report file to write")->required();
  synthesize_cmd->add_option("--phases", synth.phases, "per-mode phases phi_j")->delimiter(',');
  synthesize_cmd->add_option("--tol", synth.tol, "verification tolerance")->check(CLI::PositiveNumber);

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "check a report with the numerical holonomy engines");
  verify_cmd->add_option("report", verify.report, "report file")->required();
  verify_cmd->add_option("--steps", verify.steps, "samples n (compared against 2n)")
      ->capture_default_str()
      ->check(CLI::Range(3, 10000000));
  verify_cmd->add_option("--method", verify.method, "ordered_product, lifted_ode or all")->capture_default_str()
      ->check(CLI::IsMember({"ordered_product", "lifted_ode", "all"}));
  verify_cmd->add_option("--tol", verify.tol, "error bound at n samples")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--tol-loop", verify.tol_loop, "loop closure tolerance")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  SimulateArgs simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "adiabatic Schroedinger sweep over traversal times");
  simulate_cmd->add_option("report", simulate.report, "report file")->required();
  simulate_cmd->add_option("--T-total", simulate.t_totals, "traversal times")->delimiter(',');
  simulate_cmd->add_option("--gap", simulate.gap, "band gap")->capture_default_str();
  simulate_cmd->add_option("--steps", simulate.steps, "integration steps per run, 0 = automatic")
      ->capture_default_str();
  simulate_cmd->add_option("--traversal", simulate.traversal, "smooth or uniform")->capture_default_str()
      ->check(CLI::IsMember({"smooth", "uniform"}));
  simulate_cmd->add_option("--csv", simulate.csv, "also write the sweep as CSV");

  ExportArgs exp;
  auto* export_cmd = app.add_subcommand("export-curve", "sample the extremal loop as CSV");
  export_cmd->add_option("report", exp.report, "report file")->required();
  export_cmd->add_option("--samples", exp.samples, "number of samples")->capture_default_str();
  export_cmd->add_option("--what", exp.what, "frames, projectors or bloch")->capture_default_str()
      ->check(CLI::IsMember({"frames", "projectors", "bloch"}));
  export_cmd->add_option("-o,--output", exp.output, "output file (default stdout)");

  auto* catalog_cmd = app.add_subcommand("catalog", "list the built-in gates");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (synthesize_cmd->parsed()) return cmd_synthesize(synth, out);
    if (verify_cmd->parsed()) return cmd_verify(verify, out);
    if (simulate_cmd->parsed()) return cmd_simulate(simulate, out);
    if (export_cmd->parsed()) return cmd_export_curve(exp, out);
    if (catalog_cmd->parsed()) return cmd_catalog(out);
  } catch (const io::ParseError& e) {
    err << "holo: parse error: " << e.what() << '\n';
    return kParse;
  } catch (const IoError& e) {
    err << "holo: I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const VerificationFailure& e) {
    err << "holo: " << e.what() << '\n';
    return kVerification;
  } catch (const holo::Error& e) {
    err << "holo: " << e.what() << '\n';
    return kVerification;
  } catch (const std::exception& e) {
    err << "holo: internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}

}  // namespace holo::cli
