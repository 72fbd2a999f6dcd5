#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lobound/errors.hpp"
#include "lobound/linalg.hpp"
#include "lobound/rng.hpp"

using namespace lobound;
using linalg::SymMatrix;

namespace {

// Random orthogonal matrix from Gram-Schmidt on Gaussian columns.
std::vector<std::vector<double>> random_orthogonal(SplitMix64& rng, std::size_t n) {
  std::vector<std::vector<double>> cols(n, std::vector<double>(n));
  for (auto& c : cols)
    for (auto& v : c) v = rng.normal();
  return linalg::orthonormal_basis(cols);
}

SymMatrix from_spectrum(const std::vector<std::vector<double>>& q, const std::vector<double>& d) {
  const std::size_t n = d.size();
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += q[k][i] * d[k] * q[k][j];
      m.set(i, j, s);
    }
  return m;
}

SymMatrix random_symmetric(SplitMix64& rng, std::size_t n) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m.set(i, j, rng.normal());
  return m;
}

}  // namespace

TEST_SUITE("linalg") {
  TEST_CASE("eigenvalues of small matrices") {
    const std::vector<double> d{3.0, 1.0, 2.0};
    const auto ev = linalg::eigenvalues_symmetric(SymMatrix::diagonal(d));
    CHECK(ev == std::vector<double>{1.0, 2.0, 3.0});

    const auto ev2 = linalg::eigenvalues_symmetric(SymMatrix::from_rows({{2, 1}, {1, 2}}));
    REQUIRE(ev2.size() == 2);
    CHECK(ev2[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ev2[1] == doctest::Approx(3.0).epsilon(1e-14));
  }

  TEST_CASE("known spectrum is recovered") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      const auto q = random_orthogonal(rng, 6);
      REQUIRE(q.size() == 6);
      std::vector<double> d(6);
      for (auto& v : d) v = rng.uniform(-5.0, 5.0);
      const auto ev = linalg::eigenvalues_symmetric(from_spectrum(q, d));
      std::sort(d.begin(), d.end());
      for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(ev[i] - d[i]) <= 1e-10);
    }
  }

  TEST_CASE("eigenvalue sum equals trace") {
    SplitMix64 rng(5);
    for (std::size_t n : {1u, 2u, 5u, 17u, 40u}) {
      const auto m = random_symmetric(rng, n);
      const auto ev = linalg::eigenvalues_symmetric(m);
      double sum = 0.0;
      for (double v : ev) sum += v;
      CHECK(std::abs(sum - m.trace()) <= n * linalg::kEigenTol * std::max(1.0, m.frobenius_norm()));
      CHECK(std::is_sorted(ev.begin(), ev.end()));
    }
  }

  TEST_CASE("asymmetric rows are rejected") {
    CHECK_THROWS_AS(SymMatrix::from_rows({{1, 2}, {3, 4}}), InputError);
    CHECK_THROWS_AS(SymMatrix::from_rows({{1, 2}}), InputError);
  }

  TEST_CASE("is_psd examples") {
    CHECK(linalg::is_psd(SymMatrix::identity(4)));
    CHECK_FALSE(linalg::is_psd(SymMatrix::diagonal(std::vector<double>{1.0, -1e-3})));
    CHECK(linalg::is_psd(SymMatrix::diagonal(std::vector<double>{1.0, -1e-12}), 1e-8));
    CHECK_THROWS_AS(linalg::is_psd(SymMatrix::identity(2), -1.0), InputError);
  }

  TEST_CASE("is_psd agrees with Cholesky on well-separated spectra") {
    SplitMix64 rng(2024);
    int agree = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_int(0, 6));
      const auto q = random_orthogonal(rng, n);
      std::vector<double> d(n);
      const bool make_psd = trial % 2 == 0;
      for (auto& v : d) v = rng.uniform(1e-6, 3.0);
      if (!make_psd) d[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(n) - 1))] = -rng.uniform(1e-6, 1.0);
      const auto m = from_spectrum(q, d);
      const bool by_eig = linalg::min_eigenvalue(m) >= 0.0;
      CHECK(by_eig == make_psd);
      CHECK(linalg::is_psd(m) == by_eig);
      if (linalg::cholesky_succeeds(m, 0.0) == by_eig) ++agree;
    }
    CHECK(agree == 1000);
  }

  TEST_CASE("project_complement examples") {
    const std::vector<double> v{1.0, 0.0};
    const auto p = linalg::project_complement(v, {{1.0, 1.0}});
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(-0.5).epsilon(1e-15));

    const std::vector<double> w{0.3, -1.2, 4.0};
    CHECK(linalg::project_complement(w, {}) == w);

    const auto zero = linalg::project_complement(std::vector<double>{2.0, 2.0, 0.0}, {{1.0, 1.0, 0.0}, {0.0, 0.0, 1.0}});
    CHECK(linalg::norm(zero) <= 1e-12);

    CHECK_THROWS_AS(linalg::project_complement(v, {{1.0, 2.0, 3.0}}), InputError);
  }

  TEST_CASE("projection is orthogonal, idempotent and linear") {
    SplitMix64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t dim = 7;
      std::vector<std::vector<double>> span(3, std::vector<double>(dim));
      for (auto& s : span)
        for (auto& x : s) x = rng.normal();
      span.push_back(span[0]);  // rank deficiency
      std::vector<double> v(dim), w(dim);
      for (auto& x : v) x = rng.normal();
      for (auto& x : w) x = rng.normal();
      const auto pv = linalg::project_complement(v, span);
      for (const auto& s : span) CHECK(std::abs(linalg::dot(pv, s)) <= 1e-12 * linalg::norm(s) * linalg::norm(v) * 10);
      const auto ppv = linalg::project_complement(pv, span);
      for (std::size_t i = 0; i < dim; ++i) CHECK(std::abs(ppv[i] - pv[i]) <= 1e-12);
      const double a = 1.7, b = -0.4;
      std::vector<double> mix(dim);
      for (std::size_t i = 0; i < dim; ++i) mix[i] = a * v[i] + b * w[i];
      const auto pm = linalg::project_complement(mix, span);
      const auto pw = linalg::project_complement(w, span);
      for (std::size_t i = 0; i < dim; ++i) CHECK(std::abs(pm[i] - (a * pv[i] + b * pw[i])) <= 1e-12);
    }
  }

  TEST_CASE("projector spectrum lies in {0, 1}") {
    SplitMix64 rng(3);
    const std::size_t dim = 6;
    std::vector<std::vector<double>> span(2, std::vector<double>(dim));
    for (auto& s : span)
      for (auto& x : s) x = rng.normal();
    // P = I - Q Q^T from the basis used by project_complement.
    const auto basis = linalg::orthonormal_basis(span);
    SymMatrix P2 = SymMatrix::identity(dim);
    for (const auto& q : basis)
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i; j < dim; ++j) P2.add(i, j, -q[i] * q[j]);
    for (double ev : linalg::eigenvalues_symmetric(P2)) CHECK((std::abs(ev) <= 1e-10 || std::abs(ev - 1.0) <= 1e-10));
    int ones = 0;
    for (double ev : linalg::eigenvalues_symmetric(P2)) ones += std::abs(ev - 1.0) <= 1e-10;
    CHECK(ones == 4);
  }

  TEST_CASE("non-finite input is rejected") {
    SymMatrix m(3);
    m.set(0, 1, std::nan(""));
    CHECK_THROWS_AS(linalg::eigenvalues_symmetric(m), InputError);
    CHECK_THROWS_AS(linalg::eigenvalues_symmetric(SymMatrix::identity(2), 0.0), InputError);
  }
}
