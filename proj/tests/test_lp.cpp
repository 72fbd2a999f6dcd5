#include <doctest.h>

#include <cmath>

#include "lobound/errors.hpp"
#include "lobound/lp.hpp"
#include "lobound/nelder_mead.hpp"
#include "lobound/rng.hpp"

using namespace lobound;

TEST_SUITE("lp") {
  TEST_CASE("textbook maximisation") {
    // max 3x + 5y  s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
    lp::Problem p;
    p.objective = {3.0, 5.0};
    p.add_row({1.0, 0.0}, lp::Relation::kLessEqual, 4.0);
    p.add_row({0.0, 2.0}, lp::Relation::kLessEqual, 12.0);
    p.add_row({3.0, 2.0}, lp::Relation::kLessEqual, 18.0);
    const auto s = lp::maximize(p);
    REQUIRE(s.status == lp::Status::kOptimal);
    CHECK(s.value == doctest::Approx(36.0).epsilon(1e-12));
    CHECK(s.x[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s.x[1] == doctest::Approx(6.0).epsilon(1e-12));
  }

  TEST_CASE("equality and >= rows, negative right-hand sides") {
    // min x + y  s.t. x + 2y = 4, y - x <= 1
    lp::Problem p;
    p.objective = {-1.0, -1.0};
    p.add_row({1.0, 2.0}, lp::Relation::kEqual, 4.0);
    p.add_row({-1.0, 1.0}, lp::Relation::kLessEqual, 1.0);
    const auto s = lp::maximize(p);
    REQUIRE(s.status == lp::Status::kOptimal);
    // On the line x + y = 4 - y, so y is pushed to the y - x <= 1 corner: y = 5/3.
    CHECK(s.x[1] == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
    CHECK(s.value == doctest::Approx(-(4.0 - 5.0 / 3.0)).epsilon(1e-12));

    lp::Problem q;
    q.objective = {-1.0};
    q.add_row({-1.0}, lp::Relation::kLessEqual, -2.0);  // x >= 2
    const auto t = lp::maximize(q);
    REQUIRE(t.status == lp::Status::kOptimal);
    CHECK(t.x[0] == doctest::Approx(2.0));
  }

  TEST_CASE("infeasible and unbounded problems") {
    lp::Problem p;
    p.objective = {1.0};
    p.add_row({1.0}, lp::Relation::kLessEqual, 1.0);
    p.add_row({1.0}, lp::Relation::kGreaterEqual, 2.0);
    CHECK(lp::maximize(p).status == lp::Status::kInfeasible);

    lp::Problem u;
    u.objective = {1.0, 0.0};
    u.add_row({-1.0, 1.0}, lp::Relation::kLessEqual, 1.0);
    CHECK(lp::maximize(u).status == lp::Status::kUnbounded);
  }

  TEST_CASE("redundant equality rows") {
    lp::Problem p;
    p.objective = {1.0, 1.0};
    p.add_row({1.0, 1.0}, lp::Relation::kEqual, 1.0);
    p.add_row({2.0, 2.0}, lp::Relation::kEqual, 2.0);
    const auto s = lp::maximize(p);
    REQUIRE(s.status == lp::Status::kOptimal);
    CHECK(s.value == doctest::Approx(1.0));
  }

  TEST_CASE("degenerate problem terminates") {
    // Beale's cycling example.
    lp::Problem p;
    p.objective = {0.75, -150.0, 0.02, -6.0};
    p.add_row({0.25, -60.0, -0.04, 9.0}, lp::Relation::kLessEqual, 0.0);
    p.add_row({0.5, -90.0, -0.02, 3.0}, lp::Relation::kLessEqual, 0.0);
    p.add_row({0.0, 0.0, 1.0, 0.0}, lp::Relation::kLessEqual, 1.0);
    const auto s = lp::maximize(p);
    REQUIRE(s.status == lp::Status::kOptimal);
    CHECK(s.value == doctest::Approx(0.05));
  }

  TEST_CASE("malformed problems are rejected") {
    lp::Problem p;
    p.objective = {1.0, 2.0};
    p.add_row({1.0}, lp::Relation::kLessEqual, 1.0);
    CHECK_THROWS_AS(lp::maximize(p), InputError);
  }

  TEST_CASE("random feasible problems satisfy their constraints") {
    SplitMix64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
      const int nv = rng.uniform_int(1, 6), nr = rng.uniform_int(1, 8);
      lp::Problem p;
      for (int j = 0; j < nv; ++j) p.objective.push_back(rng.uniform(-1.0, 1.0));
      for (int i = 0; i < nr; ++i) {
        std::vector<double> row;
        for (int j = 0; j < nv; ++j) row.push_back(rng.uniform(0.0, 1.0));
        p.add_row(std::move(row), lp::Relation::kLessEqual, rng.uniform(0.1, 2.0));
      }
      const auto s = lp::maximize(p);
      REQUIRE(s.status == lp::Status::kOptimal);
      for (int i = 0; i < nr; ++i) {
        double lhs = 0.0;
        for (int j = 0; j < nv; ++j) lhs += p.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * s.x[static_cast<std::size_t>(j)];
        CHECK(lhs <= p.rhs[static_cast<std::size_t>(i)] + 1e-10);
      }
      for (double x : s.x) CHECK(x >= -1e-12);
    }
  }

  TEST_CASE("Nelder-Mead minimises smooth functions") {
    const auto rosen = [](const std::vector<double>& x) {
      return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
    };
    NelderMeadOptions opt;
    opt.max_iterations = 5000;
    const auto r = nelder_mead(rosen, {-1.2, 1.0}, opt);
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-6));

    const auto again = nelder_mead(rosen, {-1.2, 1.0}, opt);
    CHECK(again.x == r.x);
    CHECK(again.evaluations == r.evaluations);
  }

  TEST_CASE("Nelder-Mead treats non-finite values as +inf") {
    const auto f = [](const std::vector<double>& x) { return x[0] < 0.0 ? std::nan("") : (x[0] - 1.0) * (x[0] - 1.0); };
    const auto r = nelder_mead(f, {0.5});
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-6));
  }
}
