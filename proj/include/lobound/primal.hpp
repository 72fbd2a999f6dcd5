#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "lobound/fock.hpp"

namespace lobound::primal {

using Complex = std::complex<double>;

inline constexpr double kNormTol = 1e-12;
/// Relative drop threshold used when projecting out the gate constraints.
inline constexpr double kProjectionTol = 1e-9;

/// One decomposed network: central beam splitter, cutoff n of the distinguished
/// auxiliary mode, overlaps eps_{k+1} = <eta|k>|omega_k> (unit norm) and real
/// preparation weights x (norm at most one). Index k of eps and x pairs with
/// the Fock coefficient g_k.
struct NetworkPoint {
  fock::BeamSplitter bs;
  int n = 0;
  std::vector<Complex> eps;
  std::vector<double> x;
};

/// Throws InputError if sum |eps|^2 differs from 1 by more than kNormTol or
/// |x|^2 exceeds 1 + kNormTol or the lengths are not n + 1.
void validate(const NetworkPoint& point);

/// c[j][k] = (alpha_k xi_j - beta_k zeta_j) g_k^(j) and
/// d[j][k] = (beta_k xi_j + alpha_k zeta_j) g_k^(j), with
/// xi_j + i zeta_j = exp(i (j phi - phi_j)). c.x and d.x are the real and
/// imaginary parts of the rotated success amplitude for input |j>.
struct ConstraintSystem {
  std::vector<std::vector<double>> c;
  std::vector<std::vector<double>> d;

  std::size_t length() const noexcept { return c.empty() ? 0 : c.front().size(); }
  int cutoff() const noexcept { return static_cast<int>(c.size()) - 1; }
};

/// Throws InputError when eps is not normalised.
ConstraintSystem build_constraints(const fock::GateSpec& gate, const fock::BeamSplitter& bs,
                                   std::span<const Complex> eps);

struct InnerMax {
  double amplitude = 0.0;
  std::vector<double> x;  ///< unit-norm maximiser, zero vector when amplitude is 0
};

/// max c0.x over |x| <= 1 subject to (c_j - c_0).x = 0 and d_j.x = 0, solved
/// as |P c0| with P projecting out the constraint span.
InnerMax inner_max(const ConstraintSystem& cs, double tol = kProjectionTol);

double success_probability(const fock::GateSpec& gate, const fock::BeamSplitter& bs,
                           std::span<const Complex> eps);

/// Best effective amplitudes a_k = x_k eps_k for a fixed beam splitter: the
/// minimum of sum |a_k| subject to sum_k a_k g_k^(j) = exp(i (phi_j - j phi)),
/// k = 0..n. |a_k| is inner-approximated by conic combinations of `directions`
/// unit phasors (an even count, so the real axis is represented exactly).
/// probability = 1 / (sum |a_k|)^2, 0 when infeasible.
struct AmplitudeSolution {
  double probability = 0.0;
  std::vector<Complex> a;  ///< normalised to unit l1 norm; empty when infeasible
};

AmplitudeSolution best_amplitudes(const fock::GateSpec& gate, const fock::BeamSplitter& bs, int n,
                                  int directions = 32);

/// Splits unit-l1 amplitudes into eps (unit 2-norm) and x (unit 2-norm) with
/// x_k eps_k = a_k.
NetworkPoint network_from_amplitudes(const fock::BeamSplitter& bs, std::span<const Complex> a);

struct SearchOptions {
  int n = 2;
  int restarts = 50;
  std::uint64_t seed = 0;
  int directions = 32;
  int max_iterations = 2000;
  double diameter_tol = 1e-10;
};

struct SearchResult {
  NetworkPoint best;
  double p = 0.0;                ///< re-evaluated through build_constraints + inner_max
  double p_search = 0.0;         ///< optimiser's value at the best point
  double max_evaluated_p = 0.0;  ///< largest value seen at any evaluated point
  int best_restart = -1;
  int failed_restarts = 0;
  long evaluations = 0;
  std::vector<double> restart_p;
};

/// Multi-start Nelder-Mead over (t, phi); restarts run in parallel and are
/// reduced in index order, so results are bit-identical to serial::outer_search.
SearchResult outer_search(const fock::GateSpec& gate, const SearchOptions& options);

namespace serial {
SearchResult outer_search(const fock::GateSpec& gate, const SearchOptions& options);
}

struct Simulation {
  std::vector<Complex> output;
  double p = 0.0;         ///< squared norm of the heralded output
  double fidelity = 0.0;  ///< |<target|output>|^2 / |output|^2, 0 for a vanishing output
};

/// Applies the network to y_0..y_N (normalised) and compares with the gate.
Simulation simulate_gate(const NetworkPoint& point, const fock::GateSpec& gate, std::span<const Complex> input);

}  // namespace lobound::primal
