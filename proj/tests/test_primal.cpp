#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "lobound/errors.hpp"
#include "lobound/linalg.hpp"
#include "lobound/primal.hpp"
#include "lobound/rng.hpp"

using namespace lobound;
using primal::Complex;

namespace {

std::vector<Complex> random_eps(SplitMix64& rng, int n, bool real_only = false) {
  std::vector<Complex> eps;
  double norm = 0.0;
  for (int k = 0; k <= n; ++k) {
    eps.emplace_back(rng.normal(), real_only ? 0.0 : rng.normal());
    norm += std::norm(eps.back());
  }
  for (auto& z : eps) z /= std::sqrt(norm);
  return eps;
}

struct Fixture {
  fock::BeamSplitter bs;
  std::vector<Complex> a;
  double p = 0.0;
};

Fixture load_fixture() {
  std::ifstream in(std::string(LOBOUND_FIXTURES) + "/ns_optimum.txt");
  REQUIRE(in.good());
  Fixture f;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "t") ss >> f.bs.t;
    if (key == "phi") ss >> f.bs.phi;
    if (key == "p") ss >> f.p;
    if (key == "a") {
      double re = 0.0, im = 0.0;
      ss >> re >> im;
      f.a.emplace_back(re, im);
    }
  }
  return f;
}

}  // namespace

TEST_SUITE("primal") {
  TEST_CASE("constraint examples") {
    SplitMix64 rng(1);
    const auto eps = random_eps(rng, 3, true);
    const auto id = fock::gate_custom({0.0, 0.0});
    const auto cs = primal::build_constraints(id, {0.6, 0.0}, eps);
    for (int j = 0; j <= 2; ++j)
      for (int k = 0; k <= 3; ++k) {
        CHECK(cs.c[j][k] == eps[k].real() * fock::g_general(j, k, 0.6));
        CHECK(cs.d[j][k] == 0.0);
      }

    const auto ns = primal::build_constraints(fock::gate_ns(), {0.6, 0.0}, eps);
    for (int k = 0; k <= 3; ++k) CHECK(ns.c[2][k] == doctest::Approx(-eps[k].real() * fock::g_general(2, k, 0.6)).epsilon(1e-15));

    const auto cplx = random_eps(rng, 3);
    const auto any = primal::build_constraints(fock::gate_phase(1.3), {-0.2, 2.1}, cplx);
    for (int k = 0; k <= 3; ++k) {
      CHECK(any.c[0][k] == cplx[k].real() * fock::g_general(0, k, -0.2));
      CHECK(any.d[0][k] == cplx[k].imag() * fock::g_general(0, k, -0.2));
    }
    CHECK(any.length() == 4);
    CHECK(any.cutoff() == 2);
  }

  TEST_CASE("unnormalised eps is rejected") {
    const std::vector<Complex> eps{{0.5, 0.0}, {0.5, 0.0}};
    CHECK_THROWS_AS(primal::build_constraints(fock::gate_ns(), {0.5, 0.0}, eps), InputError);
    CHECK_THROWS_AS(primal::build_constraints(fock::gate_ns(), {0.5, 0.0}, std::vector<Complex>{}), InputError);
  }

  TEST_CASE("inner maximisation examples") {
    primal::ConstraintSystem full;
    full.c = {{1.0, 0.0}, {0.0, 1.0}};
    full.d = {{1.0, 1.0}, {0.0, 0.0}};
    CHECK(primal::inner_max(full).amplitude == 0.0);

    primal::ConstraintSystem none;
    none.c = {{0.6, 0.8 * 0.5}};
    none.d = {{0.0, 0.0}};
    const auto r = primal::inner_max(none);
    CHECK(r.amplitude == doctest::Approx(linalg::norm(none.c[0])).epsilon(1e-15));
    CHECK(linalg::norm(r.x) == doctest::Approx(1.0).epsilon(1e-15));

    const auto identity = fock::gate_custom({});
    CHECK(primal::success_probability(identity, {1.0, 0.0}, std::vector<Complex>{{1.0, 0.0}}) == 1.0);
  }

  TEST_CASE("random NS points never beat 1/4") {
    SplitMix64 rng(2);
    const auto ns = fock::gate_ns();
    int zero = 0;
    for (int trial = 0; trial < 400; ++trial) {
      const int n = rng.uniform_int(0, 6);
      const fock::BeamSplitter bs{rng.uniform(-1.0, 1.0), rng.uniform(0.0, 2.0 * std::numbers::pi)};
      std::vector<Complex> eps = random_eps(rng, n);
      if (trial % 2 == 0 && n >= 2) {
        const auto a = primal::best_amplitudes(ns, bs, n);
        if (!a.a.empty()) eps = primal::network_from_amplitudes(bs, a.a).eps;
      }
      const auto cs = primal::build_constraints(ns, bs, eps);
      const auto inner = primal::inner_max(cs);
      CHECK(inner.amplitude * inner.amplitude <= 0.25 + 1e-9);
      CHECK(inner.amplitude <= linalg::norm(cs.c[0]) + 1e-12);
      CHECK(linalg::norm(cs.c[0]) <= 1.0 + 1e-12);
      if (n <= 2 && trial % 2 == 1) zero += inner.amplitude == 0.0;

      std::vector<Complex> flipped(eps);
      for (auto& z : flipped) z = -z;
      const auto other = primal::inner_max(primal::build_constraints(ns, bs, flipped));
      CHECK(other.amplitude == doctest::Approx(inner.amplitude).epsilon(1e-9));
    }
    // For n <= 2 the five constraint vectors span R^{n+1} for generic eps.
    CHECK(zero > 0);
  }

  TEST_CASE("full-rank constraints give zero") {
    SplitMix64 rng(3);
    const auto eps = random_eps(rng, 2);
    const auto cs = primal::build_constraints(fock::gate_ns(), {0.3, 0.7}, eps);
    std::vector<std::vector<double>> span;
    for (int j = 1; j <= 2; ++j) {
      std::vector<double> v(3);
      for (int k = 0; k < 3; ++k) v[k] = cs.c[j][k] - cs.c[0][k];
      span.push_back(v);
    }
    for (const auto& d : cs.d) span.push_back(d);
    REQUIRE(linalg::orthonormal_basis(span).size() == 3);
    CHECK(primal::success_probability(fock::gate_ns(), {0.3, 0.7}, eps) == 0.0);
  }

  TEST_CASE("closed form agrees with direct simulation") {
    SplitMix64 rng(4);
    for (const auto& gate : {fock::gate_ns(), fock::gate_sign(3), fock::gate_phase(2.2)}) {
      for (int trial = 0; trial < 30; ++trial) {
        const int n = gate.cutoff() + rng.uniform_int(0, 4);
        const fock::BeamSplitter bs{rng.uniform(-1.0, 1.0), rng.uniform(0.0, 2.0 * std::numbers::pi)};
        const auto a = primal::best_amplitudes(gate, bs, n);
        if (a.a.empty()) continue;
        auto point = primal::network_from_amplitudes(bs, a.a);
        const auto inner = primal::inner_max(primal::build_constraints(gate, bs, point.eps));
        point.x = inner.x;
        std::vector<Complex> input(static_cast<std::size_t>(gate.cutoff() + 1), 1.0 / std::sqrt(gate.cutoff() + 1.0));
        const auto sim = primal::simulate_gate(point, gate, input);
        CHECK(sim.p == doctest::Approx(inner.amplitude * inner.amplitude).epsilon(1e-10));
        CHECK(sim.fidelity == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(a.probability == doctest::Approx(inner.amplitude * inner.amplitude).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("simulation examples") {
    const auto id = fock::gate_custom({0.0, 0.0});
    primal::NetworkPoint point{{1.0, 0.0}, 0, {{1.0, 0.0}}, {1.0}};
    const std::vector<Complex> input{{0.6, 0.0}, {0.0, 0.8}, {0.0, 0.0}};
    const auto sim = primal::simulate_gate(point, id, input);
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(sim.output[j] - input[j]) <= 1e-15);
    CHECK(sim.p == doctest::Approx(1.0));
    CHECK(sim.fidelity == doctest::Approx(1.0));

    point.x = {0.0};
    const auto off = primal::simulate_gate(point, id, input);
    CHECK(off.p == 0.0);
    for (const auto& z : off.output) CHECK(z == Complex{});

    CHECK_THROWS_AS(primal::simulate_gate(point, id, std::vector<Complex>{{1.0, 0.0}}), InputError);
    CHECK_THROWS_AS(primal::simulate_gate(point, id, std::vector<Complex>{{1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}}), InputError);
  }

  TEST_CASE("network point validation") {
    primal::NetworkPoint bad{{0.5, 0.0}, 1, {{1.0, 0.0}}, {1.0, 0.0}};
    CHECK_THROWS_AS(primal::validate(bad), InputError);
    bad.eps = {{1.0, 0.0}, {1.0, 0.0}};
    CHECK_THROWS_AS(primal::validate(bad), InputError);
    bad.eps = {{1.0, 0.0}, {0.0, 0.0}};
    bad.x = {1.0, 1.0};
    CHECK_THROWS_AS(primal::validate(bad), InputError);
    bad.x = {1.0, 0.0};
    CHECK_NOTHROW(primal::validate(bad));
  }

  TEST_CASE("NS optimum fixture") {
    const auto f = load_fixture();
    REQUIRE(f.a.size() == 3);
    const auto ns = fock::gate_ns();
    auto point = primal::network_from_amplitudes(f.bs, f.a);
    const auto inner = primal::inner_max(primal::build_constraints(ns, f.bs, point.eps));
    CHECK(inner.amplitude * inner.amplitude == doctest::Approx(f.p).epsilon(1e-12));
    const auto lp = primal::best_amplitudes(ns, f.bs, 2);
    CHECK(lp.probability == doctest::Approx(f.p).epsilon(1e-12));
    point.x = inner.x;
    const double s3 = 1.0 / std::sqrt(3.0);
    const auto sim = primal::simulate_gate(point, ns, std::vector<Complex>{s3, s3, s3});
    CHECK(sim.fidelity == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(sim.p == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(sim.output[2].real() < 0.0);
  }

  TEST_CASE("outer search") {
    primal::SearchOptions opt;
    opt.n = 0;
    opt.restarts = 10;
    const auto id = primal::outer_search(fock::gate_custom({}), opt);
    CHECK(std::abs(id.p - 1.0) <= 1e-9);

    opt.n = 2;
    opt.restarts = 12;
    opt.seed = 42;
    const auto a = primal::outer_search(fock::gate_ns(), opt);
    const auto b = primal::outer_search(fock::gate_ns(), opt);
    const auto c = primal::serial::outer_search(fock::gate_ns(), opt);
    CHECK(a.p == b.p);
    CHECK(a.p == c.p);
    CHECK(a.restart_p == c.restart_p);
    CHECK(a.best.x == c.best.x);
    CHECK(a.max_evaluated_p == c.max_evaluated_p);
    CHECK(a.p <= 0.25 + 1e-9);
    CHECK(a.max_evaluated_p <= 0.25 + 1e-9);
    CHECK(a.p >= 0.249);
    CHECK_NOTHROW(primal::validate(a.best));

    opt.n = 3;
    opt.restarts = 10;
    const auto s3 = primal::outer_search(fock::gate_sign(3), opt);
    CHECK(s3.p <= 1.0 / 9.0 + 1e-3);

    opt.restarts = 0;
    CHECK_THROWS_AS(primal::outer_search(fock::gate_ns(), opt), InputError);
  }
}
