#include "lobound/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "lobound/errors.hpp"

namespace lobound::sdp {

namespace {

SymMatrix bordered(std::size_t dim, const std::vector<double>& border, double corner) {
  SymMatrix m(dim);
  m.set(0, 0, corner);
  for (std::size_t k = 0; k < border.size(); ++k) m.set(1, k + 2, border[k]);
  return m;
}

void track(PrimalReport& r, double residual, const std::string& name) {
  if (r.worst.empty() || residual > r.max_residual) {
    r.max_residual = std::max(r.max_residual, residual);
    r.worst = name;
  }
}

}  // namespace

SdpProblem assemble(const fock::GateSpec& gate, const fock::BeamSplitter& bs,
                    std::span<const primal::Complex> eps, double gamma) {
  if (!(gamma >= 1.0)) throw InputError("assemble: gamma must be at least 1");
  SdpProblem p;
  p.cs = primal::build_constraints(gate, bs, eps);
  p.dim = eps.size() + 2;
  p.gamma = gamma;
  p.gate = gate;
  p.bs = bs;
  p.eps.assign(eps.begin(), eps.end());
  p.F0 = SymMatrix(p.dim);
  p.F0.set(0, 0, 1.0);

  const int N = gate.cutoff();
  const std::size_t len = eps.size();
  for (int j = 1; j <= N; ++j) {
    std::vector<double> b(len);
    for (std::size_t k = 0; k < len; ++k) b[k] = p.cs.c[static_cast<std::size_t>(j)][k] - p.cs.c[0][k];
    p.F.push_back(bordered(p.dim, b, 0.0));
  }
  for (int j = 0; j <= N; ++j) p.F.push_back(bordered(p.dim, p.cs.d[static_cast<std::size_t>(j)], 0.0));
  std::vector<double> g(len);
  for (std::size_t k = 0; k < len; ++k) g[k] = -gamma * p.cs.c[0][k] / 2.0;
  p.F.push_back(bordered(p.dim, g, 1.0));
  return p;
}

SymMatrix embed_primal(std::span<const double> x, const SdpProblem& problem, double tol) {
  const std::size_t len = problem.cs.length();
  if (x.size() != len) throw InputError("embed_primal: x has the wrong length");
  double residual = 0.0;
  for (std::size_t j = 1; j < problem.cs.c.size(); ++j) {
    double r = 0.0;
    for (std::size_t k = 0; k < len; ++k) r += (problem.cs.c[j][k] - problem.cs.c[0][k]) * x[k];
    residual = std::max(residual, std::abs(r));
  }
  for (const auto& d : problem.cs.d) residual = std::max(residual, std::abs(linalg::dot(d, x)));
  if (residual > tol) throw InfeasibleError("embed_primal: point violates the gate equations", residual);
  const double xn = linalg::norm(x);
  if (xn > 1.0 + primal::kNormTol) throw InfeasibleError("embed_primal: |x| exceeds 1", xn - 1.0);

  const double amp = linalg::dot(problem.cs.c[0], x);
  const double sign = amp < 0.0 ? -1.0 : 1.0;
  SymMatrix Z(problem.dim);
  Z.set(0, 0, problem.gamma * std::abs(amp));
  for (std::size_t a = 1; a < problem.dim; ++a) Z.set(a, a, 1.0);
  for (std::size_t k = 0; k < len; ++k) Z.set(1, k + 2, sign * x[k]);
  return Z;
}

SymMatrix embed_primal(const primal::NetworkPoint& point, const SdpProblem& problem, double tol) {
  return embed_primal(point.x, problem, tol);
}

PrimalReport check_primal_feasible(const SymMatrix& Z, const SdpProblem& problem, double tol) {
  if (Z.dim() != problem.dim) throw InputError("check_primal_feasible: dimension mismatch");
  PrimalReport r;
  const std::size_t dim = problem.dim;
  for (std::size_t a = 1; a < dim; ++a) track(r, std::abs(Z(a, a) - 1.0), "diag " + std::to_string(a + 1));
  for (std::size_t a = 2; a < dim; ++a)
    for (std::size_t b = a + 1; b < dim; ++b)
      track(r, std::abs(2.0 * Z(a, b)), "offdiag " + std::to_string(a + 1) + "," + std::to_string(b + 1));
  for (std::size_t a = 1; a < dim; ++a) track(r, std::abs(Z(0, a)), "first row " + std::to_string(a + 1));
  for (std::size_t j = 0; j + 1 < problem.F.size(); ++j)
    track(r, std::abs(problem.F[j].trace_product(Z)), "F_" + std::to_string(j + 1));
  track(r, std::abs(problem.G().trace_product(Z)), "G");
  r.min_eigenvalue = linalg::min_eigenvalue(Z);
  if (r.min_eigenvalue < -tol && r.max_residual <= tol) r.worst = "psd";
  r.pass = r.max_residual <= tol && r.min_eigenvalue >= -tol;
  return r;
}

SymMatrix dual_matrix(const DualSolution& sol, const SdpProblem& problem) {
  if (sol.z.size() != problem.dim - 1) throw InputError("dual_matrix: z must have n + 2 entries");
  if (sol.v.size() != problem.F.size()) throw InputError("dual_matrix: v must have 2N + 2 entries");
  if (sol.V.dim() != problem.dim) throw InputError("dual_matrix: V has the wrong dimension");
  SymMatrix S = problem.F0;
  for (std::size_t a = 0; a < sol.z.size(); ++a) S.add(a + 1, a + 1, sol.z[a]);
  for (std::size_t a = 0; a < sol.v.size(); ++a)
    if (sol.v[a] != 0.0) S.add_scaled(problem.F[a], sol.v[a]);
  S.add_scaled(sol.V, 1.0);
  return S;
}

DualReport check_dual_feasible(const DualSolution& sol, const SdpProblem& problem, double tol) {
  if (sol.V.dim() != problem.dim) throw InputError("check_dual_feasible: V has the wrong dimension");
  for (std::size_t a = 0; a < problem.dim; ++a) {
    for (std::size_t b = 0; b < 2; ++b)
      if (sol.V(a, b) != 0.0) throw StructuralError("V must vanish on its first two rows and columns");
    if (sol.V(a, a) != 0.0) throw StructuralError("W must have a zero diagonal");
  }
  DualReport r;
  r.min_eigenvalue = linalg::min_eigenvalue(dual_matrix(sol, problem));
  r.pass = r.min_eigenvalue >= -tol;
  return r;
}

DualityGap weak_duality_gap(const SymMatrix& Z, const DualSolution& sol, const SdpProblem& problem, double tol) {
  const auto pr = check_primal_feasible(Z, problem, tol);
  if (!pr.pass)
    throw InfeasibleError("weak_duality_gap: primal point infeasible (" + pr.worst + ")",
                          std::max(pr.max_residual, -pr.min_eigenvalue));
  const auto dr = check_dual_feasible(sol, problem, tol);
  if (!dr.pass) throw InfeasibleError("weak_duality_gap: dual point infeasible", -dr.min_eigenvalue);
  DualityGap g;
  for (double z : sol.z) g.dual_value += z;
  g.primal_value = std::abs(Z(0, 0));
  g.gap = g.dual_value - sol.v.back() * g.primal_value;
  g.bound = (g.dual_value / problem.gamma) * (g.dual_value / problem.gamma);
  return g;
}

void write_matrix(std::ostream& out, const SymMatrix& m, const std::string& label) {
  out << "dim " << m.dim() << "\nlabel " << label << "\n";
  char buf[32];
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out << (j ? " " : "") << buf;
    }
    out << "\n";
  }
}

SymMatrix read_matrix(std::istream& in, std::string* label) {
  std::string key, line;
  std::size_t dim = 0;
  if (!(in >> key >> dim) || key != "dim") throw InputError("read_matrix: expected 'dim <n>'");
  if (!(in >> key) || key != "label") throw InputError("read_matrix: expected 'label'");
  std::getline(in, line);
  if (label) *label = line.empty() ? line : line.substr(1);
  std::vector<std::vector<double>> rows(dim, std::vector<double>(dim));
  for (auto& row : rows)
    for (auto& v : row) {
      std::string tok;
      if (!(in >> tok)) throw InputError("read_matrix: truncated matrix");
      v = std::strtod(tok.c_str(), nullptr);
    }
  return SymMatrix::from_rows(rows);
}

}  // namespace lobound::sdp
