#include "lobound/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lobound/errors.hpp"

namespace lobound::linalg {

SymMatrix::SymMatrix(std::size_t dim) : n_(dim), a_(dim * dim, 0.0) {
  if (dim == 0) throw InputError("SymMatrix: dimension must be at least 1");
}

SymMatrix SymMatrix::identity(std::size_t dim) {
  SymMatrix m(dim);
  m.add_to_diagonal(1.0);
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  SymMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m.set(i, i, diag[i]);
  return m;
}

SymMatrix SymMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  SymMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw InputError("SymMatrix: rows are not square");
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (rows[i][j] != rows[j][i])
        throw InputError("SymMatrix: entry (" + std::to_string(i) + "," + std::to_string(j) +
                         ") differs from its transpose");
      m.a_[i * m.n_ + j] = rows[i][j];
    }
  }
  return m;
}

void SymMatrix::set(std::size_t i, std::size_t j, double value) noexcept {
  a_[i * n_ + j] = value;
  a_[j * n_ + i] = value;
}

void SymMatrix::add(std::size_t i, std::size_t j, double value) noexcept {
  a_[i * n_ + j] += value;
  if (i != j) a_[j * n_ + i] += value;
}

void SymMatrix::add_scaled(const SymMatrix& other, double factor) {
  if (other.n_ != n_) throw InputError("SymMatrix::add_scaled: dimension mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += factor * other.a_[i];
}

void SymMatrix::add_to_diagonal(double shift) noexcept {
  for (std::size_t i = 0; i < n_; ++i) a_[i * n_ + i] += shift;
}

double SymMatrix::trace() const noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) s += a_[i * n_ + i];
  return s;
}

double SymMatrix::frobenius_norm() const noexcept {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

double SymMatrix::max_abs() const noexcept {
  double s = 0.0;
  for (double v : a_) s = std::max(s, std::abs(v));
  return s;
}

double SymMatrix::trace_product(const SymMatrix& other) const {
  if (other.n_ != n_) throw InputError("SymMatrix::trace_product: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a_.size(); ++i) s += a_[i] * other.a_[i];
  return s;
}

namespace {

double off_diagonal_norm(const std::vector<double>& a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a[i * n + j] * a[i * n + j];
  return std::sqrt(s);
}

}  // namespace

std::vector<double> eigenvalues_symmetric(const SymMatrix& m, double tol) {
  if (!(tol > 0.0)) throw InputError("eigenvalues_symmetric: tol must be positive");
  const std::size_t n = m.dim();
  std::vector<double> a(m.row_major().begin(), m.row_major().end());
  const double fro = m.frobenius_norm();
  if (!std::isfinite(fro)) throw InputError("eigenvalues_symmetric: matrix has non-finite entries");
  const double threshold = tol * std::max(1.0, fro);

  int sweep = 0;
  while (off_diagonal_norm(a, n) > threshold) {
    if (sweep++ >= kMaxJacobiSweeps)
      throw ConvergenceError("Jacobi eigensolver did not converge in " +
                             std::to_string(kMaxJacobiSweeps) + " sweeps");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        // Rotation angle annihilating a(p,q), smaller root for stability.
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a[p * n + p] = app - t * apq;
        a[q * n + q] = aqq + t * apq;
        a[p * n + q] = a[q * n + p] = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a[r * n + p];
          const double arq = a[r * n + q];
          const double nrp = arp - s * (arq + tau * arp);
          const double nrq = arq + s * (arp - tau * arq);
          a[r * n + p] = a[p * n + r] = nrp;
          a[r * n + q] = a[q * n + r] = nrq;
        }
      }
    }
  }

  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a[i * n + i];
  std::sort(values.begin(), values.end());
  return values;
}

double min_eigenvalue(const SymMatrix& m, double tol) { return eigenvalues_symmetric(m, tol).front(); }

bool is_psd(const SymMatrix& m, double shift) {
  if (shift < 0.0) throw InputError("is_psd: shift must be non-negative");
  return min_eigenvalue(m) >= -shift;
}

bool cholesky_succeeds(const SymMatrix& m, double shift) {
  const std::size_t n = m.dim();
  std::vector<double> l(m.row_major().begin(), m.row_major().end());
  for (std::size_t i = 0; i < n; ++i) l[i * n + i] += shift;
  const double pivot_floor = 64.0 * std::numeric_limits<double>::epsilon() *
                             std::max(1.0, m.max_abs() + shift) * static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = l[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
    if (d < -pivot_floor) return false;
    if (d <= pivot_floor) {
      // Zero pivot: the remainder of the column must vanish for a PSD matrix.
      for (std::size_t i = j + 1; i < n; ++i) {
        double v = l[i * n + j];
        for (std::size_t k = 0; k < j; ++k) v -= l[i * n + k] * l[j * n + k];
        if (std::abs(v) > std::sqrt(pivot_floor)) return false;
        l[i * n + j] = 0.0;
      }
      l[j * n + j] = 0.0;
      continue;
    }
    const double root = std::sqrt(d);
    l[j * n + j] = root;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = l[i * n + j];
      for (std::size_t k = 0; k < j; ++k) v -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = v / root;
    }
  }
  return true;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InputError("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

std::vector<std::vector<double>> orthonormal_basis(const std::vector<std::vector<double>>& vectors,
                                                   double tol) {
  if (!(tol > 0.0)) throw InputError("orthonormal_basis: tol must be positive");
  std::vector<std::vector<double>> basis;
  if (vectors.empty()) return basis;
  const std::size_t dim = vectors.front().size();
  double scale = 0.0;
  for (const auto& v : vectors) {
    if (v.size() != dim) throw InputError("orthonormal_basis: dimension mismatch");
    scale = std::max(scale, norm(v));
  }
  for (const auto& v : vectors) {
    if (norm(v) == 0.0) continue;
    std::vector<double> r = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) {
        const double c = dot(q, r);
        for (std::size_t i = 0; i < dim; ++i) r[i] -= c * q[i];
      }
    }
    const double rn = norm(r);
    if (rn <= tol * scale) continue;
    for (double& x : r) x /= rn;
    basis.push_back(std::move(r));
  }
  return basis;
}

std::vector<double> project_complement(std::span<const double> v,
                                       const std::vector<std::vector<double>>& span, double tol) {
  for (const auto& s : span)
    if (s.size() != v.size()) throw InputError("project_complement: dimension mismatch");
  std::vector<double> out(v.begin(), v.end());
  const auto basis = orthonormal_basis(span, tol);
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& q : basis) {
      const double c = dot(q, out);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] -= c * q[i];
    }
  }
  return out;
}

}  // namespace lobound::linalg
