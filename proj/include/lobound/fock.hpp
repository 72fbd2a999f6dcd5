#pragma once

#include <complex>
#include <string>
#include <vector>

namespace lobound::fock {

/// Target diagonal gate |j> -> e^{i phi_j} |j> for j = 0..N. phi_0 is fixed to
/// zero (a global phase) and never stored; phases are kept in [0, 2*pi).
class GateSpec {
 public:
  GateSpec(std::vector<double> phases, std::string label);

  int cutoff() const noexcept { return static_cast<int>(phases_.size()); }
  /// phi_j for j in [0, cutoff()]; phase(0) == 0.
  double phase(int j) const;
  const std::vector<double>& phases() const noexcept { return phases_; }
  const std::string& label() const noexcept { return label_; }
  /// True when every e^{i phi_j} is real (phases 0 or pi).
  bool is_real() const noexcept;

 private:
  std::vector<double> phases_;
  std::string label_;
};

GateSpec gate_ns();
GateSpec gate_phase(double phi2);
GateSpec gate_sign(int cutoff);
GateSpec gate_custom(std::vector<double> phases);

/// Parses "ns", "phase:<phi2>", "sign:<N>", "custom:<p1>,<p2>,...".
/// Throws InputError on anything else.
GateSpec parse_gate(const std::string& selector);

/// Reduces an angle into [0, 2*pi).
double normalize_angle(double angle);

/// exp(i angle), exact when the reduced angle is a multiple of pi/2.
std::complex<double> unit_phasor(double angle);

/// Central beam splitter: real transmittivity t in [-1, 1], phase in [0, 2*pi).
struct BeamSplitter {
  double t = 1.0;
  double phi = 0.0;
};

/// Validates t and normalises phi. Throws InputError for |t| > 1 or non-finite input.
BeamSplitter make_beam_splitter(double t, double phi);

/// C(n, k). Exact integer Pascal table for n <= 60, multiplicative product
/// beyond that for k <= 30, log-gamma otherwise.
double binomial(int n, int k);

/// Closed forms for j in {0, 1, 2} with the negative powers of t cancelled,
/// so t = 0 is a regular point.
double g_closed(int j, int k, double t);

/// Diagonal two-mode beam-splitter element <j,k|V|j,k> without its phase:
///   sum_{l=0}^{min(j,k)} (-1)^l C(j,l) C(k,l) (1-t^2)^l t^{j+k-2l}.
/// Symmetric in (j, k); agrees with g_closed for j <= 2.
double g_general(int j, int k, double t);

/// Sum of the absolute values of the terms of g_general. Upper-bounds
/// |g_general| and is non-increasing in k once k >= j / (1 - |t|).
double g_envelope(int j, int k, double t);

/// f_k^(j) = e^{i phi j} g_general(j, k, t).
std::complex<double> f_coeff(int j, int k, const BeamSplitter& bs);

}  // namespace lobound::fock
