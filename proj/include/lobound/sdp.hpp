#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lobound/fock.hpp"
#include "lobound/linalg.hpp"
#include "lobound/primal.hpp"

namespace lobound::sdp {

using linalg::SymMatrix;

/// Relaxation of the primal problem in a symmetric (n+3)x(n+3) matrix Z.
/// Index 0 (row/column 1 in matrix notation) holds the objective entry, index 1
/// the constant 1, indices 2..n+2 the preparation weights x_0..x_n.
struct SdpProblem {
  std::size_t dim = 0;
  SymMatrix F0{1};
  /// F_1..F_N (real gate part), F_{N+1}..F_{2N+1} (imaginary part, j = 0..N),
  /// and G as the last entry.
  std::vector<SymMatrix> F;
  double gamma = 1.0;
  fock::GateSpec gate{{}, "identity"};
  fock::BeamSplitter bs;
  std::vector<primal::Complex> eps;
  primal::ConstraintSystem cs;

  int cutoff() const noexcept { return gate.cutoff(); }
  int n() const noexcept { return static_cast<int>(dim) - 3; }
  const SymMatrix& G() const { return F.back(); }
};

/// Throws InputError for gamma < 1 or unnormalised eps.
SdpProblem assemble(const fock::GateSpec& gate, const fock::BeamSplitter& bs,
                    std::span<const primal::Complex> eps, double gamma = 1.0);

struct DualSolution {
  std::vector<double> z;  ///< length n + 2, pairs with diagonal entries 1..n+2
  std::vector<double> v;  ///< length 2N + 2; the last entry multiplies G
  SymMatrix V{1};         ///< 0_{2,2} (+) W with W hollow
};

struct PrimalReport {
  double max_residual = 0.0;
  std::string worst;  ///< name of the constraint with the largest residual
  double min_eigenvalue = 0.0;
  bool pass = false;
};

struct DualReport {
  double min_eigenvalue = 0.0;
  bool pass = false;
};

/// Z = [c0.x gamma] (+) [[1, x^T], [x, I]] with x flipped so that c0.x >= 0.
/// Throws InfeasibleError when x violates a gate equation by more than tol.
SymMatrix embed_primal(std::span<const double> x, const SdpProblem& problem, double tol = 1e-9);
SymMatrix embed_primal(const primal::NetworkPoint& point, const SdpProblem& problem, double tol = 1e-9);

PrimalReport check_primal_feasible(const SymMatrix& Z, const SdpProblem& problem, double tol);

/// F0 + diag(0, z) + sum_a v_a F_a + V, with v_{2N+2} multiplying G.
SymMatrix dual_matrix(const DualSolution& sol, const SdpProblem& problem);

/// Throws StructuralError when V is not 0_{2,2} (+) hollow, InputError on
/// dimension mismatches.
DualReport check_dual_feasible(const DualSolution& sol, const SdpProblem& problem, double tol);

struct DualityGap {
  double gap = 0.0;          ///< q^T z - v_{2N+2} |Z_11|
  double dual_value = 0.0;   ///< q^T z
  double primal_value = 0.0; ///< |tr[F0 Z]| = gamma * amplitude
  double bound = 0.0;        ///< (q^T z)^2 / gamma^2
};

/// Throws InfeasibleError when either point fails its feasibility check at tol.
DualityGap weak_duality_gap(const SymMatrix& Z, const DualSolution& sol, const SdpProblem& problem,
                            double tol = 1e-8);

/// Plain-text dump: "dim <n>", "label <text>", then one row per line (%.17g).
void write_matrix(std::ostream& out, const SymMatrix& m, const std::string& label);
SymMatrix read_matrix(std::istream& in, std::string* label = nullptr);

}  // namespace lobound::sdp
