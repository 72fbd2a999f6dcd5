#include "lobound/cli.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lobound/certificate.hpp"
#include "lobound/errors.hpp"
#include "lobound/primal.hpp"
#include "lobound/rng.hpp"
#include "lobound/sdp.hpp"

namespace lobound::cli {

using json = nlohmann::ordered_json;

const char* command_name(Command c) {
  switch (c) {
    case Command::kBound: return "bound";
    case Command::kOptimize: return "optimize";
    case Command::kCertify: return "certify";
    case Command::kFindCert: return "find-cert";
    case Command::kDualityCheck: return "duality-check";
    case Command::kSweepPhase: return "sweep-phase";
    case Command::kSimulate: return "simulate";
  }
  return "?";
}

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitInput = 2;

json complex_array(const std::vector<primal::Complex>& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back({z.real(), z.imag()});
  return a;
}

json config_json(const RunConfig& c) {
  json j;
  j["command"] = command_name(c.command);
  j["gate"] = c.gate;
  j["n"] = c.n;
  j["n_max"] = c.n_max;
  j["restarts"] = c.restarts;
  j["seed"] = c.seed;
  j["grid"] = c.grid;
  j["kmax"] = c.kmax;
  j["tol"] = c.tol;
  j["points"] = c.points;
  j["draws"] = c.draws;
  j["cert_in"] = c.cert_in;
  j["cert_out"] = c.cert_out;
  j["input"] = c.input;
  j["format"] = c.format;
  return j;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json envelope(const RunConfig& c) {
  json j;
  j["schema"] = 1;
  j["version"] = LOBOUND_VERSION;
  j["config"] = config_json(c);
  if (c.timestamp) j["timestamp"] = utc_timestamp();
  return j;
}

json verify_json(const cert::VerifyReport& r) {
  json j;
  j["pass"] = r.pass;
  j["max_abs"] = r.max_abs;
  j["argmax_t"] = r.argmax_t;
  j["argmax_k"] = r.argmax_k;
  j["delta"] = r.delta;
  j["tol"] = r.tol;
  j["bound"] = r.bound;
  j["lipschitz_margin"] = r.margin;
  j["tail_certified"] = r.tail_certified;
  j["uncertified_points"] = r.uncertified_points;
  j["max_k_inspected"] = r.max_k_inspected;
  j["points"] = r.points;
  j["note"] = "numerical certification on a grid; the margin estimates excursions between grid points";
  return j;
}

json point_json(const primal::NetworkPoint& p) {
  json j;
  j["t"] = p.bs.t;
  j["phi"] = p.bs.phi;
  j["n"] = p.n;
  j["eps"] = complex_array(p.eps);
  j["x"] = p.x;
  return j;
}

cert::CertificateFamily load_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open certificate file '" + path + "'");
  return cert::read_table(in);
}

void save_certificate(const std::string& path, const cert::CertificateFamily& c) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw InputError("cannot write certificate file '" + path + "'");
  cert::write_table(out, c);
}

bool is_ns(const fock::GateSpec& g) {
  return g.cutoff() == 2 && g.phase(1) == 0.0 && g.phase(2) == std::numbers::pi;
}

// Closed form for NS, a table from --cert, or a fresh search.
cert::CertificateFamily obtain_certificate(const RunConfig& c, const fock::GateSpec& gate, std::ostream& diag) {
  if (!c.cert_in.empty()) {
    auto cert = load_certificate(c.cert_in);
    if (cert.gate.phases() != gate.phases()) throw InputError("certificate file is for a different gate");
    return cert;
  }
  if (is_ns(gate)) return cert::ns_certificate();
  diag << "searching certificate for " << gate.label() << " (grid " << c.grid << ", kmax " << c.kmax << ")\n";
  cert::FindOptions opt;
  opt.t_points = c.grid;
  opt.k_max = c.kmax;
  return cert::find_certificate(gate, opt);
}

json search_json(const primal::SearchResult& r) {
  json j;
  j["p"] = r.p;
  j["p_search"] = r.p_search;
  j["max_evaluated_p"] = r.max_evaluated_p;
  j["best_restart"] = r.best_restart;
  j["failed_restarts"] = r.failed_restarts;
  j["evaluations"] = r.evaluations;
  j["best"] = point_json(r.best);
  return j;
}

primal::SearchOptions search_options(const RunConfig& c, int n) {
  primal::SearchOptions o;
  o.n = n;
  o.restarts = c.restarts;
  o.seed = c.seed;
  return o;
}

int cmd_bound(const RunConfig& c, json& doc, std::ostream& diag) {
  const auto gate = fock::parse_gate(c.gate);
  const auto cert = obtain_certificate(c, gate, diag);
  const int grid = cert.grid > 0 ? 2 * cert.grid - 1 : c.grid;
  const auto report = cert::verify(cert, grid, std::max(c.kmax, gate.cutoff()), c.tol);
  doc["verification"] = verify_json(report);
  if (!report.pass) {
    doc["bound"] = nullptr;
    return kExitFailed;
  }
  doc["bound"] = cert::bound(cert, report);
  doc["method"] = "certificate";
  doc["certificate_origin"] = cert.origin;
  doc["delta"] = cert.delta;
  if (gate.cutoff() == 2 && gate.phase(1) == 0.0) doc["closed_form_phase_bound"] = cert::phase_bound(gate.phase(2));
  save_certificate(c.cert_out, cert);
  return kExitOk;
}

int cmd_optimize(const RunConfig& c, json& doc, std::ostream& diag) {
  const auto gate = fock::parse_gate(c.gate);
  const int last = c.n_max >= c.n ? c.n_max : c.n;
  json runs = json::array();
  for (int n = c.n; n <= last; ++n) {
    diag << "optimize " << gate.label() << " n=" << n << " restarts=" << c.restarts << "\n";
    auto r = primal::outer_search(gate, search_options(c, n));
    json j = search_json(r);
    j["n"] = n;
    runs.push_back(std::move(j));
  }
  if (runs.size() == 1) {
    for (auto& [k, v] : runs[0].items()) doc[k] = v;
  } else {
    doc["runs"] = runs;
  }
  return kExitOk;
}

int cmd_certify(const RunConfig& c, json& doc, std::ostream&) {
  const auto gate = fock::parse_gate(c.gate);
  cert::CertificateFamily cert;
  if (!c.cert_in.empty()) {
    cert = load_certificate(c.cert_in);
    if (cert.gate.phases() != gate.phases()) throw InputError("certificate file is for a different gate");
  } else if (is_ns(gate)) {
    cert = cert::ns_certificate();
  } else {
    throw InputError("certify: only ns has a built-in certificate; pass --cert <table>");
  }
  const auto report = cert::verify(cert, c.grid, c.kmax, c.tol);
  doc["certificate_origin"] = cert.origin;
  doc["verification"] = verify_json(report);
  doc["pass"] = report.pass;
  doc["max_abs"] = report.max_abs;
  doc["bound"] = report.pass ? json(cert::bound(cert, report)) : json(nullptr);
  return report.pass ? kExitOk : kExitFailed;
}

int cmd_find_cert(const RunConfig& c, json& doc, std::ostream& diag) {
  const auto gate = fock::parse_gate(c.gate);
  cert::FindOptions opt;
  opt.t_points = c.grid;
  opt.k_max = c.kmax;
  cert::FindReport rep;
  diag << "find-cert " << gate.label() << " grid=" << c.grid << " kmax=" << c.kmax << "\n";
  const auto cert = cert::find_certificate(gate, opt, &rep);
  const auto report = cert::verify(cert, 2 * c.grid - 1, c.kmax, c.tol);
  doc["delta"] = cert.delta;
  doc["bound"] = report.pass ? json(cert::bound(cert, report)) : json(nullptr);
  doc["lp_delta_max"] = rep.lp_delta_max;
  doc["lp_solves"] = rep.lp_solves;
  doc["cells"] = rep.cells;
  doc["verification"] = verify_json(report);
  doc["certificate_origin"] = cert.origin;
  save_certificate(c.cert_out, cert);
  return report.pass ? kExitOk : kExitFailed;
}

int cmd_duality(const RunConfig& c, json& doc, std::ostream& diag) {
  const auto gate = fock::parse_gate(c.gate);
  const auto cert = obtain_certificate(c, gate, diag);
  const int N = gate.cutoff();
  double worst_gap = std::numeric_limits<double>::infinity();
  double worst_eig = std::numeric_limits<double>::infinity();
  int failures = 0, nonzero = 0;
  for (int d = 0; d < c.draws; ++d) {
    SplitMix64 rng(c.seed, static_cast<std::uint64_t>(d));
    const int n = rng.uniform_int(0, 10);
    const fock::BeamSplitter bs{rng.uniform(-1.0, 1.0), rng.uniform(0.0, 2.0 * std::numbers::pi)};
    std::vector<primal::Complex> eps;
    auto amps = n >= N && d % 2 == 0 ? primal::best_amplitudes(gate, bs, n) : primal::AmplitudeSolution{};
    if (!amps.a.empty()) {
      eps = primal::network_from_amplitudes(bs, amps.a).eps;
    } else {
      double norm = 0.0;
      for (int k = 0; k <= n; ++k) {
        eps.emplace_back(rng.normal(), rng.normal());
        norm += std::norm(eps.back());
      }
      for (auto& z : eps) z /= std::sqrt(norm);
    }
    const auto built = cert::build_dual_solution(cert, bs, eps);
    const auto problem = sdp::assemble(gate, bs, eps, built.gamma);
    const auto inner = primal::inner_max(problem.cs);
    if (inner.amplitude > 0.0) ++nonzero;
    const auto Z = sdp::embed_primal(inner.x, problem);
    const auto dual = sdp::check_dual_feasible(built.solution, problem, 1e-8);
    worst_eig = std::min(worst_eig, dual.min_eigenvalue);
    if (!dual.pass) {
      ++failures;
      continue;
    }
    const auto gap = sdp::weak_duality_gap(Z, built.solution, problem, 1e-8);
    worst_gap = std::min(worst_gap, gap.gap);
    if (gap.gap < -1e-9) ++failures;
  }
  doc["draws"] = c.draws;
  doc["nonzero_primal"] = nonzero;
  doc["worst_gap"] = worst_gap;
  doc["worst_dual_min_eigenvalue"] = worst_eig;
  doc["failures"] = failures;
  doc["pass"] = failures == 0;
  return failures == 0 ? kExitOk : kExitFailed;
}

int cmd_sweep(const RunConfig& c, std::ostream& out, json& doc, std::ostream& diag) {
  if (c.points < 2) throw InputError("sweep-phase: need at least 2 points");
  struct Row {
    double phi2, closed, searched;
  };
  std::vector<Row> rows;
  for (int i = 0; i < c.points; ++i) {
    const double phi2 = 2.0 * std::numbers::pi * i / (c.points - 1);
    cert::FindOptions opt;
    opt.t_points = c.grid;
    opt.k_max = c.kmax;
    diag << "sweep-phase " << i + 1 << "/" << c.points << "\n";
    const auto found = cert::find_certificate(fock::gate_phase(phi2), opt);
    rows.push_back({phi2, cert::phase_bound(phi2), 4.0 * found.delta * found.delta});
  }
  if (c.format == "csv") {
    out << "phi2,closed_form,searched_bound\n";
    char buf[96];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r.phi2, r.closed, r.searched);
      out << buf;
    }
    return kExitOk;
  }
  json arr = json::array();
  for (const auto& r : rows) arr.push_back({{"phi2", r.phi2}, {"closed_form", r.closed}, {"searched_bound", r.searched}});
  doc["rows"] = arr;
  return kExitOk;
}

int cmd_simulate(const RunConfig& c, json& doc, std::ostream& diag) {
  const auto gate = fock::parse_gate(c.gate);
  const int N = gate.cutoff();
  std::vector<primal::Complex> input;
  if (c.input.empty()) {
    input.assign(static_cast<std::size_t>(N + 1), 1.0 / std::sqrt(N + 1.0));
  } else {
    if (c.input.size() != static_cast<std::size_t>(N + 1))
      throw InputError("simulate: --input needs N + 1 amplitudes");
    double norm = 0.0;
    for (double v : c.input) norm += v * v;
    if (!(norm > 0.0)) throw InputError("simulate: input must be non-zero");
    for (double v : c.input) input.emplace_back(v / std::sqrt(norm));
  }
  diag << "simulate: optimising " << gate.label() << " n=" << c.n << "\n";
  const auto r = primal::outer_search(gate, search_options(c, c.n));
  doc["search"] = search_json(r);
  if (r.p <= 0.0) {
    doc["p"] = 0.0;
    doc["fidelity"] = nullptr;
    return kExitOk;
  }
  const auto sim = primal::simulate_gate(r.best, gate, input);
  doc["input"] = complex_array(input);
  doc["output"] = complex_array(sim.output);
  doc["p"] = sim.p;
  doc["fidelity"] = sim.fidelity;
  return kExitOk;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& diag) {
  try {
    if (config.format != "json" && config.format != "csv") throw InputError("format must be json or csv");
    if (config.format == "csv" && config.command != Command::kSweepPhase)
      throw InputError("csv output is only available for sweep-phase");
    if (config.n < 0 || config.restarts < 1 || config.grid < 2 || config.kmax < 0 || !(config.tol >= 0.0) ||
        config.draws < 0)
      throw InputError("numeric options out of range");

    std::ofstream file;
    std::ostream* sink = &out;
    if (!config.out.empty()) {
      file.open(config.out);
      if (!file) throw InputError("cannot open output file '" + config.out + "'");
      sink = &file;
    }

    json doc = envelope(config);
    int code = kExitOk;
    switch (config.command) {
      case Command::kBound: code = cmd_bound(config, doc, diag); break;
      case Command::kOptimize: code = cmd_optimize(config, doc, diag); break;
      case Command::kCertify: code = cmd_certify(config, doc, diag); break;
      case Command::kFindCert: code = cmd_find_cert(config, doc, diag); break;
      case Command::kDualityCheck: code = cmd_duality(config, doc, diag); break;
      case Command::kSweepPhase:
        code = cmd_sweep(config, *sink, doc, diag);
        if (config.format == "csv") return code;
        break;
      case Command::kSimulate: code = cmd_simulate(config, doc, diag); break;
    }
    doc["exit_code"] = code;
    *sink << doc.dump(2) << "\n";
    return code;
  } catch (const InputError& e) {
    diag << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << "\n";
    return kExitFailed;
  }
}

int main_entry(int argc, char** argv) {
  if (const char* env = std::getenv("LOBOUND_THREADS")) {
    const int threads = std::atoi(env);
    if (threads > 0) omp_set_num_threads(threads);
  }

  CLI::App app{"Upper bounds on postselected linear-optics gate success probabilities"};
  app.set_version_flag("--version", LOBOUND_VERSION);
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_gate = [&](CLI::App* sub) {
    sub->add_option("--gate", cfg.gate, "ns | phase:<phi2> | sign:<N> | custom:<phi1,...>")->capture_default_str();
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_flag("!--no-timestamp", cfg.timestamp, "omit the timestamp field");
  };
  auto add_search = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.n, "cutoff of the auxiliary mode")->capture_default_str();
    sub->add_option("--restarts", cfg.restarts, "Nelder-Mead restarts")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--grid", cfg.grid, "t grid points")->capture_default_str();
    sub->add_option("--kmax", cfg.kmax, "largest k checked before the tail rule")->capture_default_str();
    sub->add_option("--tol", cfg.tol, "verification tolerance")->capture_default_str();
  };

  auto* bound = app.add_subcommand("bound", "certified bound 4 delta^2");
  add_gate(bound), add_grid(bound), add_output(bound);
  bound->add_option("--cert", cfg.cert_in, "certificate table to use");
  bound->add_option("--save-cert", cfg.cert_out, "write the certificate table here");

  auto* optimize = app.add_subcommand("optimize", "multi-start search for the best network");
  add_gate(optimize), add_search(optimize), add_output(optimize);
  optimize->add_option("--n-max", cfg.n_max, "sweep n up to this value");

  auto* certify = app.add_subcommand("certify", "verify a certificate family");
  add_gate(certify), add_grid(certify), add_output(certify);
  certify->add_option("--cert", cfg.cert_in, "certificate table (default: built-in ns family)");

  auto* find = app.add_subcommand("find-cert", "search a piecewise-constant certificate");
  add_gate(find), add_grid(find), add_output(find);
  find->add_option("--save-cert", cfg.cert_out, "write the certificate table here");

  auto* duality = app.add_subcommand("duality-check", "weak-duality checks on random draws");
  add_gate(duality), add_grid(duality), add_output(duality);
  duality->add_option("--draws", cfg.draws, "number of draws")->capture_default_str();
  duality->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  duality->add_option("--cert", cfg.cert_in, "certificate table to use");

  auto* sweep = app.add_subcommand("sweep-phase", "closed-form and searched bounds for phase gates");
  add_output(sweep);
  sweep->add_option("--points", cfg.points, "number of phi2 values in [0, 2 pi]")->capture_default_str();
  sweep->add_option("--grid", cfg.grid, "t grid points per search");
  sweep->add_option("--kmax", cfg.kmax, "largest k per search");
  sweep->add_option("--format", cfg.format, "csv or json");

  auto* simulate = app.add_subcommand("simulate", "apply the optimised network to an input state");
  add_gate(simulate), add_search(simulate), add_output(simulate);
  simulate->add_option("--input", cfg.input, "real input amplitudes y_0..y_N")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  if (sweep->parsed()) {
    cfg.command = Command::kSweepPhase;
    if (sweep->count("--format") == 0) cfg.format = "csv";
    if (sweep->count("--grid") == 0) cfg.grid = 401;
    if (sweep->count("--kmax") == 0) cfg.kmax = 200;
  } else if (bound->parsed()) {
    cfg.command = Command::kBound;
  } else if (optimize->parsed()) {
    cfg.command = Command::kOptimize;
  } else if (certify->parsed()) {
    cfg.command = Command::kCertify;
  } else if (find->parsed()) {
    cfg.command = Command::kFindCert;
  } else if (duality->parsed()) {
    cfg.command = Command::kDualityCheck;
  } else {
    cfg.command = Command::kSimulate;
  }
  return run(cfg, std::cout, std::cerr);
}

}  // namespace lobound::cli
