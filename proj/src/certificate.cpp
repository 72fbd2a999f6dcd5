#include "lobound/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <utility>

#include "lobound/errors.hpp"
#include "lobound/lp.hpp"

namespace lobound::cert {

std::vector<double> Piece::at(double t) const {
  const double d = den[0] + den[1] * t + den[2] * t * t;
  std::vector<double> out(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) out[j] = s[j] == 0.0 ? 0.0 : s[j] / d;
  return out;
}

std::size_t CertificateFamily::piece_index(double t) const {
  if (pieces.empty()) throw InputError("certificate has no pieces");
  auto it = std::upper_bound(pieces.begin(), pieces.end(), t,
                             [](double v, const Piece& p) { return v < p.t_lo; });
  if (it == pieces.begin()) return 0;
  return static_cast<std::size_t>(it - pieces.begin()) - 1;
}

void CertificateFamily::validate() const {
  if (pieces.empty()) throw InputError("certificate has no pieces");
  if (pieces.front().t_lo != -1.0 || pieces.back().t_hi != 1.0)
    throw InputError("certificate pieces must cover [-1, 1]");
  if (!(delta >= 0.0)) throw InputError("certificate delta must be non-negative");
  const auto N = static_cast<std::size_t>(gate.cutoff());
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& p = pieces[i];
    if (!(p.t_lo < p.t_hi)) throw InputError("certificate piece with empty interval");
    if (i + 1 < pieces.size() && p.t_hi != pieces[i + 1].t_lo) throw InputError("certificate pieces are not contiguous");
    if (p.s.size() != N) throw InputError("certificate piece has the wrong number of s values");
    for (double t : {p.t_lo, p.t_hi})
      if (!(p.den[0] + p.den[1] * t + p.den[2] * t * t > 0.0))
        throw InputError("certificate piece denominator must be positive");
    for (double v : p.s)
      if (!(v >= 0.0) || !std::isfinite(v)) throw InputError("certificate s values must be non-negative");
  }
}

CertificateFamily ns_certificate() {
  CertificateFamily c;
  c.gate = fock::gate_ns();
  const double knee = 1.0 - std::numbers::sqrt2;
  c.pieces.push_back(Piece{-1.0, knee, {1.0, -1.0, 0.0}, {0.25, 0.0}});
  c.pieces.push_back(Piece{knee, 0.0, {1.0, 0.0, 1.0}, {0.0, 0.25}});
  c.pieces.push_back(Piece{0.0, 1.0, {1.0, 0.0, 0.0}, {0.25, 0.125}});
  c.delta = 0.25;
  c.origin = "closed-form";
  return c;
}

std::vector<Complex> coefficients(const fock::GateSpec& gate, std::span<const double> s) {
  const int N = gate.cutoff();
  if (s.size() != static_cast<std::size_t>(N)) throw InputError("coefficients: expected one s value per phase");
  std::vector<Complex> lambda(static_cast<std::size_t>(N + 1));
  double sum = 0.0;
  for (int j = 1; j <= N; ++j) {
    const double sj = s[static_cast<std::size_t>(j - 1)];
    sum += sj;
    const Complex e = fock::unit_phasor(-gate.phase(j));
    lambda[static_cast<std::size_t>(j)] = -sj * e;
  }
  lambda[0] = -0.5 + sum;
  return lambda;
}

namespace {

Complex combine(std::span<const Complex> lambda, double t, int k) {
  Complex acc{};
  for (std::size_t j = 0; j < lambda.size(); ++j)
    if (lambda[j] != Complex{}) acc += lambda[j] * fock::g_general(static_cast<int>(j), k, t);
  return acc;
}

double envelope(std::span<const Complex> lambda, double t, int k) {
  double acc = 0.0;
  for (std::size_t j = 0; j < lambda.size(); ++j)
    if (lambda[j] != Complex{}) acc += std::abs(lambda[j]) * fock::g_envelope(static_cast<int>(j), k, t);
  return acc;
}

}  // namespace

Complex w_ratio_complex(const fock::GateSpec& gate, std::span<const double> s, double t, int k) {
  const auto lambda = coefficients(gate, s);
  return combine(lambda, t, k);
}

double w_ratio(const fock::GateSpec& gate, std::span<const double> s, double t, int k) {
  const int N = gate.cutoff();
  if (s.size() != static_cast<std::size_t>(N)) throw InputError("w_ratio: expected one s value per phase");
  double sum = 0.0;
  for (double v : s) sum += v;
  double acc = (-0.5 + sum) * fock::g_general(0, k, t);
  for (int j = 1; j <= N; ++j) {
    const double sj = s[static_cast<std::size_t>(j - 1)];
    if (sj != 0.0) acc -= std::cos(gate.phase(j)) * sj * fock::g_general(j, k, t);
  }
  return acc;
}

PointSup point_sup(std::span<const Complex> lambda, double t, int k_max, double threshold) {
  PointSup r;
  if (t == 1.0 || t == -1.0) {
    // g_k^(j)(+-1) = (+-1)^(j+k): |K_k| does not depend on k.
    Complex acc{};
    for (std::size_t j = 0; j < lambda.size(); ++j) acc += (t < 0.0 && j % 2 == 1) ? -lambda[j] : lambda[j];
    r.max_abs = std::abs(acc);
    r.k_reached = 1;
    return r;
  }
  const int N = static_cast<int>(lambda.size()) - 1;
  for (int k = 0; k <= k_max; ++k) {
    const double v = std::abs(combine(lambda, t, k));
    if (v > r.max_abs) {
      r.max_abs = v;
      r.argmax_k = k;
    }
  }
  const double monotone_from = N == 0 ? 0.0 : std::ceil(N / (1.0 - std::abs(t)));
  int k = k_max;
  while (true) {
    if (k >= monotone_from && envelope(lambda, t, k) <= std::max(threshold, r.max_abs)) break;
    if (k >= kTailCap) {
      r.certified = false;
      break;
    }
    ++k;
    const double v = std::abs(combine(lambda, t, k));
    if (v > r.max_abs) {
      r.max_abs = v;
      r.argmax_k = k;
    }
  }
  r.k_reached = k;
  return r;
}

double grid_point(int i, int points) {
  return static_cast<double>(2 * i - (points - 1)) / static_cast<double>(points - 1);
}

namespace {

struct Sample {
  double t;
  std::size_t piece;
};

std::vector<Sample> verification_samples(const CertificateFamily& cert, int t_points) {
  std::vector<Sample> out;
  out.reserve(static_cast<std::size_t>(t_points) + 2 * cert.pieces.size());
  for (int i = 0; i < t_points; ++i) {
    const double t = grid_point(i, t_points);
    out.push_back({t, cert.piece_index(t)});
  }
  for (std::size_t p = 0; p < cert.pieces.size(); ++p) {
    out.push_back({cert.pieces[p].t_lo, p});
    out.push_back({cert.pieces[p].t_hi, p});
  }
  return out;
}

PointSup evaluate_sample(const CertificateFamily& cert, const Sample& s, int k_max, double threshold) {
  const auto lambda = coefficients(cert.gate, cert.pieces[s.piece].at(s.t));
  return point_sup(lambda, s.t, k_max, threshold);
}

VerifyReport reduce_verify(const CertificateFamily& cert, const std::vector<Sample>& samples,
                           const std::vector<PointSup>& sups, int t_points, double tol) {
  VerifyReport r;
  r.delta = cert.delta;
  r.tol = tol;
  r.bound = 4.0 * cert.delta * cert.delta;
  r.points = static_cast<int>(samples.size());
  for (std::size_t i = 0; i < sups.size(); ++i) {
    const auto& p = sups[i];
    if (i == 0 || p.max_abs > r.max_abs) {
      r.max_abs = p.max_abs;
      r.argmax_t = samples[i].t;
      r.argmax_k = p.argmax_k;
    }
    if (!p.certified) {
      r.tail_certified = false;
      ++r.uncertified_points;
    }
    r.max_k_inspected = std::max(r.max_k_inspected, p.k_reached);
  }
  for (int i = 0; i + 1 < t_points; ++i)
    r.margin = std::max(r.margin, 0.5 * std::abs(sups[static_cast<std::size_t>(i + 1)].max_abs -
                                                 sups[static_cast<std::size_t>(i)].max_abs));
  r.pass = r.tail_certified && r.max_abs <= cert.delta + tol;
  return r;
}

void check_verify_args(const CertificateFamily& cert, int t_points, int k_max, double tol) {
  cert.validate();
  if (t_points < 2) throw InputError("verify: need at least 2 grid points");
  if (k_max < cert.gate.cutoff()) throw InputError("verify: k_max must be at least N");
  if (!(tol >= 0.0)) throw InputError("verify: tol must be non-negative");
}

}  // namespace

VerifyReport verify(const CertificateFamily& cert, int t_points, int k_max, double tol) {
  check_verify_args(cert, t_points, k_max, tol);
  const auto samples = verification_samples(cert, t_points);
  std::vector<PointSup> sups(samples.size());
  const auto count = static_cast<long>(samples.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long i = 0; i < count; ++i)
    sups[static_cast<std::size_t>(i)] = evaluate_sample(cert, samples[static_cast<std::size_t>(i)], k_max, cert.delta + tol);
  return reduce_verify(cert, samples, sups, t_points, tol);
}

double bound(const CertificateFamily& cert, const VerifyReport& report) {
  if (!report.pass || report.delta != cert.delta)
    throw UnverifiedCertificate("bound requested from a certificate that did not pass verification");
  return 4.0 * cert.delta * cert.delta;
}

double phase_bound(double phi2) {
  const double c = 3.0 - std::cos(std::numbers::pi - phi2);
  return c * c / 16.0;
}

BuiltDual build_dual_solution(const CertificateFamily& cert, const fock::BeamSplitter& bs,
                              std::span<const Complex> eps) {
  const auto& gate = cert.gate;
  const int N = gate.cutoff();
  const auto cs = primal::build_constraints(gate, bs, eps);
  const int n = static_cast<int>(eps.size()) - 1;

  struct Orientation {
    std::vector<double> s;
    std::vector<Complex> lambda;
    double delta_local = 0.0;
    Complex Lambda{};
    double gamma = 1.0;
    double score = 0.0;
  };
  auto orient = [&](std::vector<double> s, bool mirror) {
    Orientation o;
    o.s = std::move(s);
    o.lambda = coefficients(gate, o.s);
    if (mirror)
      for (std::size_t j = 1; j < o.lambda.size(); j += 2) o.lambda[j] = -o.lambda[j];
    o.delta_local = cert.delta;
    for (int k = 0; k <= n; ++k) o.delta_local = std::max(o.delta_local, std::abs(combine(o.lambda, bs.t, k)));
    for (int j = 0; j <= N; ++j) o.Lambda += o.lambda[static_cast<std::size_t>(j)] * fock::unit_phasor(gate.phase(j) - j * bs.phi);
    const double phi = mirror ? bs.phi - std::numbers::pi : bs.phi;
    for (int j = 1; j <= N; ++j) o.gamma += 2.0 * o.s[static_cast<std::size_t>(j - 1)] * (1.0 - std::cos(j * phi));
    const double mod = std::abs(o.Lambda);
    o.score = mod > 1e-12 ? o.delta_local / mod : std::numeric_limits<double>::infinity();
    return o;
  };

  BuiltDual out;
  Orientation best = orient(cert.s_at(bs.t), false);
  if (!(best.score <= 2.0 * cert.delta)) {
    Orientation m = orient(cert.s_at(-bs.t), true);
    if (m.score < best.score) {
      best = std::move(m);
      out.mirrored = true;
    }
  }
  if (!std::isfinite(best.score)) {
    best = orient(std::vector<double>(static_cast<std::size_t>(N), 0.0), false);
    best.delta_local = 0.5;
    best.score = 1.0;
    out.fallback = true;
  }

  const double mod = std::abs(best.Lambda);
  const double m = best.gamma / (2.0 * mod);
  const Complex rot = -std::conj(best.Lambda) / mod;
  const double delta_eff = m * best.delta_local;

  auto& sol = out.solution;
  sol.v.assign(static_cast<std::size_t>(2 * N + 2), 0.0);
  for (int j = 0; j <= N; ++j) {
    const Complex kappa = m * rot * best.lambda[static_cast<std::size_t>(j)] *
                          fock::unit_phasor(gate.phase(j) - j * bs.phi);
    if (j > 0) sol.v[static_cast<std::size_t>(j - 1)] = kappa.real();
    sol.v[static_cast<std::size_t>(N + j)] = -kappa.imag();
  }
  sol.v.back() = 1.0;

  const std::size_t len = eps.size();
  sol.z.assign(len + 1, 0.0);
  sol.z[0] = delta_eff;
  for (std::size_t k = 0; k < len; ++k) sol.z[k + 1] = std::norm(eps[k]) * delta_eff;

  std::vector<double> w(len);
  for (std::size_t k = 0; k < len; ++k) {
    double acc = -best.gamma * cs.c[0][k] / 2.0;
    for (int j = 1; j <= N; ++j)
      acc += sol.v[static_cast<std::size_t>(j - 1)] * (cs.c[static_cast<std::size_t>(j)][k] - cs.c[0][k]);
    for (int j = 0; j <= N; ++j) acc += sol.v[static_cast<std::size_t>(N + j)] * cs.d[static_cast<std::size_t>(j)][k];
    w[k] = acc;
  }
  sol.V = sdp::SymMatrix(len + 2);
  if (delta_eff > 0.0)
    for (std::size_t a = 0; a < len; ++a)
      for (std::size_t b = a + 1; b < len; ++b) sol.V.set(a + 2, b + 2, w[a] * w[b] / delta_eff);

  out.gamma = best.gamma;
  out.delta_local = best.delta_local;
  out.lambda_modulus = mod;
  double qz = 0.0;
  for (double z : sol.z) qz += z;
  out.amplitude_bound = qz / best.gamma;
  out.within_certificate = !out.fallback && best.delta_local <= cert.delta + 1e-12;
  return out;
}

namespace {

struct CellResult {
  std::vector<double> s;
  double measured = 0.0;
  double lp_delta = 0.0;
  int lp_solves = 0;
};

// Row of Re(e^{-i theta} K_k) <= delta as a linear inequality in (s_1..s_N, delta).
void add_cut(lp::Problem& prob, const fock::GateSpec& gate, double t, int k, Complex dir) {
  const int N = gate.cutoff();
  const Complex rot = std::conj(dir);
  const double g0 = fock::g_general(0, k, t);
  std::vector<double> row(static_cast<std::size_t>(N + 1));
  for (int j = 1; j <= N; ++j) {
    const Complex e = fock::unit_phasor(-gate.phase(j));
    row[static_cast<std::size_t>(j - 1)] = (rot * (g0 - e * fock::g_general(j, k, t))).real();
  }
  row[static_cast<std::size_t>(N)] = -1.0;
  prob.add_row(std::move(row), lp::Relation::kLessEqual, (rot * g0).real() / 2.0);
}

CellResult solve_cell(const fock::GateSpec& gate, const FindOptions& opt, int cell) {
  const int N = gate.cutoff();
  const int P = opt.t_points;
  // Refined-grid points 2*cell, 2*cell + 1, 2*cell + 2 as exact integer ratios.
  const double ts[3] = {grid_point(2 * cell, 2 * P - 1), grid_point(2 * cell + 1, 2 * P - 1),
                        grid_point(2 * cell + 2, 2 * P - 1)};
  std::vector<Complex> dirs = {{1.0, 0.0}, {-1.0, 0.0}};
  if (!gate.is_real()) {
    dirs.push_back({0.0, 1.0});
    dirs.push_back({0.0, -1.0});
  }

  lp::Problem prob;
  prob.objective.assign(static_cast<std::size_t>(N + 1), 0.0);
  prob.objective.back() = -1.0;
  std::set<std::pair<int, int>> seeded;
  const int k_seed = std::min(opt.k_max, 2 * N + 2);
  for (int p = 0; p < 3; ++p) {
    const bool endpoint = ts[p] == 1.0 || ts[p] == -1.0;
    for (int k = 0; k <= (endpoint ? 1 : k_seed); ++k) {
      seeded.insert({p, k});
      for (const auto& d : dirs) add_cut(prob, gate, ts[p], k, d);
    }
  }

  CellResult res;
  std::vector<double> s(static_cast<std::size_t>(N), 0.0);
  for (int round = 0; round < opt.max_cut_rounds; ++round) {
    const auto sol = lp::maximize(prob);
    ++res.lp_solves;
    if (sol.status != lp::Status::kOptimal) throw ConvergenceError("find_certificate: cell LP did not reach an optimum");
    for (int j = 0; j < N; ++j) s[static_cast<std::size_t>(j)] = std::max(0.0, sol.x[static_cast<std::size_t>(j)]);
    res.lp_delta = -sol.value;
    const auto lambda = coefficients(gate, s);
    bool violated = false;
    for (int p = 0; p < 3; ++p) {
      const auto sup = point_sup(lambda, ts[p], opt.k_max, res.lp_delta + opt.cut_tol);
      if (sup.max_abs <= res.lp_delta + opt.cut_tol) continue;
      const int k = (ts[p] == 1.0 || ts[p] == -1.0) ? 0 : sup.argmax_k;
      const Complex val = combine(lambda, ts[p], k);
      add_cut(prob, gate, ts[p], k, val / std::abs(val));
      violated = true;
    }
    if (!violated) break;
  }
  res.s = s;
  const auto lambda = coefficients(gate, s);
  for (double t : ts) res.measured = std::max(res.measured, point_sup(lambda, t, opt.k_max, 0.0).max_abs);
  return res;
}

CertificateFamily assemble_family(const fock::GateSpec& gate, const FindOptions& opt,
                                  const std::vector<CellResult>& cells, FindReport* report) {
  CertificateFamily c;
  c.gate = gate;
  c.k_max = opt.k_max;
  c.grid = opt.t_points;
  c.origin = "searched";
  double measured = 0.0;
  FindReport rep;
  rep.cells = static_cast<int>(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const int cell = static_cast<int>(i);
    c.pieces.push_back(Piece{grid_point(cell, opt.t_points), grid_point(cell + 1, opt.t_points), {1.0, 0.0, 0.0}, cells[i].s});
    measured = std::max(measured, cells[i].measured);
    rep.lp_delta_max = std::max(rep.lp_delta_max, cells[i].lp_delta);
    rep.lp_solves += cells[i].lp_solves;
  }
  c.delta = measured + 1e-12;
  if (report) *report = rep;
  return c;
}

void check_find_args(const fock::GateSpec& gate, const FindOptions& opt) {
  if (gate.cutoff() < 1) throw InputError("find_certificate: gate must have N >= 1");
  if (opt.t_points < 2) throw InputError("find_certificate: need at least 2 grid points");
  if (opt.k_max < gate.cutoff()) throw InputError("find_certificate: k_max must be at least N");
  if (opt.max_cut_rounds < 1) throw InputError("find_certificate: max_cut_rounds must be positive");
}

}  // namespace

CertificateFamily find_certificate(const fock::GateSpec& gate, const FindOptions& options, FindReport* report) {
  check_find_args(gate, options);
  std::vector<CellResult> cells(static_cast<std::size_t>(options.t_points - 1));
  const int count = options.t_points - 1;
#pragma omp parallel for schedule(dynamic, 4)
  for (int i = 0; i < count; ++i) cells[static_cast<std::size_t>(i)] = solve_cell(gate, options, i);
  return assemble_family(gate, options, cells, report);
}

namespace serial {

VerifyReport verify(const CertificateFamily& cert, int t_points, int k_max, double tol) {
  check_verify_args(cert, t_points, k_max, tol);
  const auto samples = verification_samples(cert, t_points);
  std::vector<PointSup> sups;
  sups.reserve(samples.size());
  for (const auto& s : samples) sups.push_back(evaluate_sample(cert, s, k_max, cert.delta + tol));
  return reduce_verify(cert, samples, sups, t_points, tol);
}

CertificateFamily find_certificate(const fock::GateSpec& gate, const FindOptions& options, FindReport* report) {
  check_find_args(gate, options);
  std::vector<CellResult> cells;
  for (int i = 0; i + 1 < options.t_points; ++i) cells.push_back(solve_cell(gate, options, i));
  return assemble_family(gate, options, cells, report);
}

}  // namespace serial

}  // namespace lobound::cert
