#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "lobound/fock.hpp"
#include "lobound/primal.hpp"
#include "lobound/sdp.hpp"

namespace lobound::cert {

using Complex = std::complex<double>;

/// s_j(t) = s[j-1] / (den[0] + den[1] t + den[2] t^2) on [t_lo, t_hi).
/// Constant pieces have den = (1, 0, 0).
struct Piece {
  double t_lo = -1.0;
  double t_hi = 1.0;
  std::array<double, 3> den{1.0, 0.0, 0.0};
  std::vector<double> s;

  bool is_constant() const noexcept { return den[0] == 1.0 && den[1] == 0.0 && den[2] == 0.0; }
  std::vector<double> at(double t) const;
};

struct CertificateFamily {
  fock::GateSpec gate{{}, "identity"};
  std::vector<Piece> pieces;  ///< sorted, contiguous, covering [-1, 1]
  double delta = 0.0;
  int k_max = 0;       ///< truncation used when the family was built (0 if closed form)
  int grid = 0;        ///< t-grid used when the family was built (0 if closed form)
  std::string origin;  ///< "closed-form" or "searched"

  /// Index of the piece containing t; the last piece is closed at t = 1.
  std::size_t piece_index(double t) const;
  std::vector<double> s_at(double t) const { return pieces[piece_index(t)].at(t); }
  /// Throws InputError on gaps, overlaps, negative s or wrong arity.
  void validate() const;
};

CertificateFamily ns_certificate();

/// Real part of the eps-free ratio:
///   (-1/2 + sum s_j) g_k^(0) - sum_j cos(phi_j) s_j g_k^(j).
double w_ratio(const fock::GateSpec& gate, std::span<const double> s, double t, int k);

/// Full eps-free quantity K_k = sum_j lambda_j g_k^(j) with lambda_0 = -1/2 + sum s_j
/// and lambda_j = -s_j exp(-i phi_j). Its real part is w_ratio.
Complex w_ratio_complex(const fock::GateSpec& gate, std::span<const double> s, double t, int k);

/// lambda_0..lambda_N.
std::vector<Complex> coefficients(const fock::GateSpec& gate, std::span<const double> s);

inline constexpr int kTailCap = 5'000'000;

struct PointSup {
  double max_abs = 0.0;
  int argmax_k = 0;
  int k_reached = 0;       ///< last k inspected
  bool certified = true;   ///< all k beyond k_reached are bounded by the threshold
};

/// sup over k >= 0 of |sum_j lambda_j g_k^(j)(t)|: exact values for k <= k_max,
/// then further k until the absolute-term envelope is non-increasing and below
/// max(threshold, running max), which bounds every remaining k. With
/// threshold <= the result, max_abs is the exact supremum. t = +-1 is exact.
PointSup point_sup(std::span<const Complex> lambda, double t, int k_max, double threshold);

struct VerifyReport {
  double max_abs = 0.0;
  double argmax_t = 0.0;
  int argmax_k = 0;
  double delta = 0.0;
  double tol = 0.0;
  double bound = 0.0;   ///< 4 delta^2
  double margin = 0.0;  ///< Lipschitz estimate of the inter-grid excursion (reported only)
  bool tail_certified = true;
  int uncertified_points = 0;
  int max_k_inspected = 0;
  int points = 0;
  bool pass = false;
};

/// Grid t_i = (-(P-1) + 2i)/(P-1), i = 0..P-1, plus both endpoints of every piece.
VerifyReport verify(const CertificateFamily& cert, int t_points, int k_max, double tol);

/// 4 delta^2. Throws UnverifiedCertificate unless `report` passed for this delta.
double bound(const CertificateFamily& cert, const VerifyReport& report);

/// (3 - cos(pi - phi2))^2 / 16.
double phase_bound(double phi2);

struct BuiltDual {
  sdp::DualSolution solution;
  double gamma = 1.0;
  double delta_local = 0.0;      ///< max(delta, max_{k<=n} |K_k(t)|) in the chosen orientation
  double lambda_modulus = 0.0;   ///< |Lambda(phi)|
  double amplitude_bound = 0.0;  ///< q^T z / gamma
  bool mirrored = false;         ///< family applied as s(-t) with phi -> phi - pi
  bool fallback = false;         ///< trivial s = 0 dual used because Lambda vanished
  bool within_certificate = true;  ///< delta_local <= delta up to 1e-12 rounding
};

/// Dual point for the SDP assembled at (gate, bs, eps) with the returned gamma.
BuiltDual build_dual_solution(const CertificateFamily& cert, const fock::BeamSplitter& bs,
                              std::span<const Complex> eps);

struct FindOptions {
  int t_points = 2001;
  int k_max = 500;
  int max_cut_rounds = 200;
  double cut_tol = 1e-10;  ///< a sample counts as violated above delta_lp + cut_tol
};

struct FindReport {
  double lp_delta_max = 0.0;  ///< largest per-cell LP optimum
  int lp_solves = 0;
  int cells = 0;
};

/// Per-cell minimax LPs over (s, delta) with cutting planes in (point, k).
CertificateFamily find_certificate(const fock::GateSpec& gate, const FindOptions& options,
                                   FindReport* report = nullptr);

namespace serial {
VerifyReport verify(const CertificateFamily& cert, int t_points, int k_max, double tol);
CertificateFamily find_certificate(const fock::GateSpec& gate, const FindOptions& options,
                                   FindReport* report = nullptr);
}  // namespace serial

/// Plain-text table; doubles in %.17g so parsing restores them bit for bit.
void write_table(std::ostream& out, const CertificateFamily& cert);
CertificateFamily read_table(std::istream& in);

/// t_i = (-(points-1) + 2i) / (points-1).
double grid_point(int i, int points);

}  // namespace lobound::cert
