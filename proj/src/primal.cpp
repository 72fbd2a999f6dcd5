#include "lobound/primal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lobound/errors.hpp"
#include "lobound/linalg.hpp"
#include "lobound/lp.hpp"
#include "lobound/nelder_mead.hpp"
#include "lobound/rng.hpp"

namespace lobound {

double SplitMix64::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace lobound

namespace lobound::primal {

namespace {

double squared_norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return s;
}

// Unit phasor for direction m of `count`, exact on the coordinate axes.
Complex direction(int m, int count) {
  const int quarter = 4 * m;
  if (quarter % count == 0) {
    switch ((quarter / count) % 4) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  return std::polar(1.0, 2.0 * std::numbers::pi * m / count);
}

struct RestartOutcome {
  double p = 0.0;
  double t = 0.0;
  double phi = 0.0;
  double max_seen = 0.0;
  int evaluations = 0;
  bool failed = false;
};

RestartOutcome run_restart(const fock::GateSpec& gate, const SearchOptions& opt, int restart) {
  SplitMix64 rng(opt.seed, static_cast<std::uint64_t>(restart));
  const double u0 = rng.uniform(-std::numbers::pi / 2, std::numbers::pi / 2);
  const double v0 = rng.uniform(0.0, 2.0 * std::numbers::pi);

  RestartOutcome out;
  auto objective = [&](const std::vector<double>& z) {
    const fock::BeamSplitter bs{std::sin(z[0]), fock::normalize_angle(z[1])};
    const double p = best_amplitudes(gate, bs, opt.n, opt.directions).probability;
    out.max_seen = std::max(out.max_seen, p);
    return -p;
  };
  NelderMeadOptions nm;
  nm.max_iterations = opt.max_iterations;
  nm.diameter_tol = opt.diameter_tol;
  const auto res = nelder_mead(objective, {u0, v0}, nm);
  out.evaluations = res.evaluations;
  out.failed = !std::isfinite(res.value);
  out.p = out.failed ? 0.0 : -res.value;
  out.t = std::sin(res.x[0]);
  out.phi = fock::normalize_angle(res.x[1]);
  return out;
}

SearchResult reduce(const fock::GateSpec& gate, const SearchOptions& opt, const std::vector<RestartOutcome>& outcomes) {
  SearchResult result;
  result.restart_p.reserve(outcomes.size());
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    const auto& o = outcomes[r];
    result.restart_p.push_back(o.p);
    result.evaluations += o.evaluations;
    result.max_evaluated_p = std::max(result.max_evaluated_p, o.max_seen);
    if (o.failed) {
      ++result.failed_restarts;
      continue;
    }
    if (result.best_restart < 0 || o.p > result.p_search) {
      result.best_restart = static_cast<int>(r);
      result.p_search = o.p;
    }
  }
  if (result.best_restart < 0) {
    result.best = NetworkPoint{fock::BeamSplitter{}, opt.n, {}, {}};
    return result;
  }

  const auto& o = outcomes[static_cast<std::size_t>(result.best_restart)];
  const fock::BeamSplitter bs{o.t, o.phi};
  const auto amps = best_amplitudes(gate, bs, opt.n, opt.directions);
  if (amps.a.empty()) {
    result.best = NetworkPoint{bs, opt.n, std::vector<Complex>(static_cast<std::size_t>(opt.n + 1)),
                               std::vector<double>(static_cast<std::size_t>(opt.n + 1))};
    result.best.eps[0] = 1.0;
    return result;
  }
  result.best = network_from_amplitudes(bs, amps.a);
  const auto inner = inner_max(build_constraints(gate, bs, result.best.eps));
  result.best.x = inner.x;
  result.p = inner.amplitude * inner.amplitude;
  return result;
}

void check_options(const SearchOptions& opt) {
  if (opt.n < 0) throw InputError("outer_search: n must be non-negative");
  if (opt.restarts < 1) throw InputError("outer_search: restarts must be at least 1");
  if (opt.directions < 2 || opt.directions % 2 != 0)
    throw InputError("outer_search: directions must be a positive even number");
}

}  // namespace

void validate(const NetworkPoint& point) {
  const auto len = static_cast<std::size_t>(point.n + 1);
  if (point.n < 0 || point.eps.size() != len || point.x.size() != len)
    throw InputError("network point: eps and x must have n + 1 entries");
  if (std::abs(squared_norm(point.eps) - 1.0) > kNormTol) throw InputError("network point: eps is not normalised");
  if (linalg::dot(point.x, point.x) > 1.0 + kNormTol) throw InputError("network point: |x| exceeds 1");
  if (point.bs.t < -1.0 || point.bs.t > 1.0) throw InputError("network point: t outside [-1, 1]");
}

ConstraintSystem build_constraints(const fock::GateSpec& gate, const fock::BeamSplitter& bs,
                                   std::span<const Complex> eps) {
  if (eps.empty()) throw InputError("build_constraints: eps must be non-empty");
  if (std::abs(squared_norm(eps) - 1.0) > kNormTol) throw InputError("build_constraints: eps is not normalised");
  const int N = gate.cutoff();
  const std::size_t len = eps.size();
  ConstraintSystem cs;
  cs.c.assign(static_cast<std::size_t>(N + 1), std::vector<double>(len));
  cs.d.assign(static_cast<std::size_t>(N + 1), std::vector<double>(len));
  for (int j = 0; j <= N; ++j) {
    // j = 0 is exactly (1, 0): phi_0 = 0 and 0 * phi = 0.
    const double angle = j * bs.phi - gate.phase(j);
    const auto e = j == 0 ? Complex{1.0, 0.0} : fock::unit_phasor(angle);
    const double xi = e.real();
    const double zeta = e.imag();
    for (std::size_t k = 0; k < len; ++k) {
      const double g = fock::g_general(j, static_cast<int>(k), bs.t);
      const double a = eps[k].real(), b = eps[k].imag();
      cs.c[static_cast<std::size_t>(j)][k] = (a * xi - b * zeta) * g;
      cs.d[static_cast<std::size_t>(j)][k] = (b * xi + a * zeta) * g;
    }
  }
  return cs;
}

InnerMax inner_max(const ConstraintSystem& cs, double tol) {
  const std::size_t len = cs.length();
  std::vector<std::vector<double>> span;
  for (std::size_t j = 1; j < cs.c.size(); ++j) {
    std::vector<double> v(len);
    for (std::size_t k = 0; k < len; ++k) v[k] = cs.c[j][k] - cs.c[0][k];
    span.push_back(std::move(v));
  }
  for (const auto& d : cs.d) span.push_back(d);

  InnerMax out;
  out.x.assign(len, 0.0);
  const auto projected = linalg::project_complement(cs.c[0], span, tol);
  const double amp = linalg::norm(projected);
  if (amp <= 1e-13) return out;
  out.amplitude = amp;
  for (std::size_t k = 0; k < len; ++k) out.x[k] = projected[k] / amp;
  return out;
}

double success_probability(const fock::GateSpec& gate, const fock::BeamSplitter& bs, std::span<const Complex> eps) {
  const auto inner = inner_max(build_constraints(gate, bs, eps));
  return inner.amplitude * inner.amplitude;
}

AmplitudeSolution best_amplitudes(const fock::GateSpec& gate, const fock::BeamSplitter& bs, int n, int directions) {
  if (n < 0) throw InputError("best_amplitudes: n must be non-negative");
  if (directions < 2 || directions % 2 != 0) throw InputError("best_amplitudes: directions must be even");
  const int N = gate.cutoff();
  const std::size_t nk = static_cast<std::size_t>(n + 1);
  const std::size_t nd = static_cast<std::size_t>(directions);
  const std::size_t nvar = nk * nd;

  std::vector<Complex> phasors(nd);
  for (std::size_t m = 0; m < nd; ++m) phasors[m] = direction(static_cast<int>(m), directions);

  lp::Problem prob;
  prob.objective.assign(nvar, -1.0);
  for (int j = 0; j <= N; ++j) {
    std::vector<double> re(nvar), im(nvar);
    for (std::size_t k = 0; k < nk; ++k) {
      const double g = fock::g_general(j, static_cast<int>(k), bs.t);
      for (std::size_t m = 0; m < nd; ++m) {
        re[k * nd + m] = phasors[m].real() * g;
        im[k * nd + m] = phasors[m].imag() * g;
      }
    }
    const auto target = j == 0 ? Complex{1.0, 0.0} : fock::unit_phasor(gate.phase(j) - j * bs.phi);
    prob.add_row(std::move(re), lp::Relation::kEqual, target.real());
    prob.add_row(std::move(im), lp::Relation::kEqual, target.imag());
  }

  AmplitudeSolution out;
  const auto sol = lp::maximize(prob);
  if (sol.status != lp::Status::kOptimal) return out;
  std::vector<Complex> a(nk);
  for (std::size_t k = 0; k < nk; ++k)
    for (std::size_t m = 0; m < nd; ++m) a[k] += sol.x[k * nd + m] * phasors[m];
  double l1 = 0.0;
  for (const auto& z : a) l1 += std::abs(z);
  if (!(l1 > 0.0) || !std::isfinite(l1)) return out;
  for (auto& z : a) z /= l1;
  out.probability = 1.0 / (l1 * l1);
  out.a = std::move(a);
  return out;
}

NetworkPoint network_from_amplitudes(const fock::BeamSplitter& bs, std::span<const Complex> a) {
  NetworkPoint p{bs, static_cast<int>(a.size()) - 1, std::vector<Complex>(a.size()), std::vector<double>(a.size())};
  double l1 = 0.0;
  for (const auto& z : a) l1 += std::abs(z);
  if (!(l1 > 0.0)) throw InputError("network_from_amplitudes: amplitudes vanish");
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double mag = std::abs(a[k]) / l1;
    const double root = std::sqrt(mag);
    p.x[k] = root;
    p.eps[k] = mag > 0.0 ? std::polar(root, std::arg(a[k])) : Complex{};
  }
  // Renormalise against rounding so validate() holds to machine precision.
  const double en = std::sqrt(squared_norm(p.eps));
  for (auto& z : p.eps) z /= en;
  const double xn = linalg::norm(p.x);
  for (auto& v : p.x) v /= xn;
  return p;
}

SearchResult outer_search(const fock::GateSpec& gate, const SearchOptions& options) {
  check_options(options);
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(options.restarts));
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < options.restarts; ++r) outcomes[static_cast<std::size_t>(r)] = run_restart(gate, options, r);
  return reduce(gate, options, outcomes);
}

namespace serial {

SearchResult outer_search(const fock::GateSpec& gate, const SearchOptions& options) {
  check_options(options);
  std::vector<RestartOutcome> outcomes;
  outcomes.reserve(static_cast<std::size_t>(options.restarts));
  for (int r = 0; r < options.restarts; ++r) outcomes.push_back(run_restart(gate, options, r));
  return reduce(gate, options, outcomes);
}

}  // namespace serial

Simulation simulate_gate(const NetworkPoint& point, const fock::GateSpec& gate, std::span<const Complex> input) {
  validate(point);
  const int N = gate.cutoff();
  if (input.size() != static_cast<std::size_t>(N + 1)) throw InputError("simulate_gate: input must have N + 1 amplitudes");
  if (std::abs(squared_norm(input) - 1.0) > 1e-9) throw InputError("simulate_gate: input is not normalised");

  Simulation sim;
  sim.output.resize(input.size());
  Complex overlap{};
  for (int j = 0; j <= N; ++j) {
    Complex amp{};
    for (int k = 0; k <= point.n; ++k)
      amp += point.x[static_cast<std::size_t>(k)] * fock::f_coeff(j, k, point.bs) * point.eps[static_cast<std::size_t>(k)];
    const auto jj = static_cast<std::size_t>(j);
    sim.output[jj] = input[jj] * amp;
    const Complex target = fock::unit_phasor(gate.phase(j)) * input[jj];
    overlap += std::conj(target) * sim.output[jj];
  }
  sim.p = squared_norm(sim.output);
  sim.fidelity = sim.p > 0.0 ? std::norm(overlap) / sim.p : 0.0;
  return sim;
}

}  // namespace lobound::primal
