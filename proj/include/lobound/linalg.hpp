#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lobound::linalg {

inline constexpr double kEigenTol = 1e-10;
inline constexpr double kOrthogonalityTol = 1e-12;
inline constexpr int kMaxJacobiSweeps = 100;

/// Dense real symmetric matrix. Every mutator writes both (i,j) and (j,i), so
/// the stored entries are symmetric exactly.
class SymMatrix {
 public:
  explicit SymMatrix(std::size_t dim);

  static SymMatrix identity(std::size_t dim);
  static SymMatrix diagonal(std::span<const double> diag);
  /// Throws InputError unless rows form a square matrix with a(i,j) == a(j,i).
  static SymMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t dim() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * n_ + j]; }

  void set(std::size_t i, std::size_t j, double value) noexcept;
  void add(std::size_t i, std::size_t j, double value) noexcept;
  void add_scaled(const SymMatrix& other, double factor);
  void add_to_diagonal(double shift) noexcept;

  double trace() const noexcept;
  double frobenius_norm() const noexcept;
  double max_abs() const noexcept;
  /// tr[A B] for symmetric A, B of equal dimension.
  double trace_product(const SymMatrix& other) const;

  std::span<const double> row_major() const noexcept { return a_; }

 private:
  std::size_t n_;
  std::vector<double> a_;
};

/// All eigenvalues in ascending order, cyclic Jacobi rotations. Converged when
/// the off-diagonal Frobenius norm is at most tol * max(1, ||m||_F).
/// Throws ConvergenceError after kMaxJacobiSweeps sweeps.
std::vector<double> eigenvalues_symmetric(const SymMatrix& m, double tol = kEigenTol);

double min_eigenvalue(const SymMatrix& m, double tol = kEigenTol);

/// True iff the smallest eigenvalue is >= -shift.
bool is_psd(const SymMatrix& m, double shift = 0.0);

/// Independent route for the same question: Cholesky (LDL^T with pivot
/// threshold) of m + shift*I.
bool cholesky_succeeds(const SymMatrix& m, double shift);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

/// Orthonormal basis of span(vectors): modified Gram-Schmidt with one
/// re-orthogonalisation pass. A vector whose residual norm falls below
/// tol * (largest input norm) is dropped, as are zero vectors.
std::vector<std::vector<double>> orthonormal_basis(const std::vector<std::vector<double>>& vectors,
                                                   double tol = kOrthogonalityTol);

/// P v with P the orthogonal projector onto the complement of span(span).
std::vector<double> project_complement(std::span<const double> v,
                                       const std::vector<std::vector<double>>& span,
                                       double tol = kOrthogonalityTol);

}  // namespace lobound::linalg
