#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lobound/errors.hpp"
#include "lobound/fock.hpp"

using namespace lobound;
using namespace lobound::fock;

namespace {

bool rel_close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace

TEST_SUITE("fock") {
  TEST_CASE("gate catalog") {
    const auto ns = gate_ns();
    CHECK(ns.cutoff() == 2);
    CHECK(ns.phase(0) == 0.0);
    CHECK(ns.phase(1) == 0.0);
    CHECK(ns.phase(2) == std::numbers::pi);
    CHECK(ns.is_real());

    const auto id = gate_phase(0.0);
    CHECK(id.cutoff() == 2);
    CHECK(id.phase(1) == 0.0);
    CHECK(id.phase(2) == 0.0);

    const auto s3 = gate_sign(3);
    CHECK(s3.phases() == std::vector<double>{0.0, 0.0, std::numbers::pi});
    CHECK_THROWS_AS(gate_sign(0), InputError);

    const auto wrapped = gate_phase(2.0 * std::numbers::pi + 0.5);
    CHECK(wrapped.phase(2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(gate_phase(-0.5).phase(2) == doctest::Approx(2.0 * std::numbers::pi - 0.5).epsilon(1e-15));
    CHECK_FALSE(gate_phase(1.0).is_real());
  }

  TEST_CASE("gate selector parsing") {
    CHECK(parse_gate("ns").phases() == gate_ns().phases());
    CHECK(parse_gate("sign:4").cutoff() == 4);
    CHECK(parse_gate("phase:1.5").phase(2) == 1.5);
    CHECK(parse_gate("custom:0.1,0.2,0.3").phases() == std::vector<double>{0.1, 0.2, 0.3});
    for (const char* bad : {"", "nss", "sign:", "sign:0", "sign:x", "phase:", "phase:abc", "custom:", "custom:1,,2",
                            "custom:1,", "custom:a"})
      CHECK_THROWS_AS(parse_gate(bad), InputError);
  }

  TEST_CASE("closed-form examples") {
    CHECK(g_closed(0, 5, 0.3) == doctest::Approx(0.00243).epsilon(1e-13));
    CHECK(g_closed(1, 0, 0.7) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(g_closed(2, 2, 0.0) == 1.0);
    CHECK(g_closed(2, 0, 0.5) == 0.25);
  }

  TEST_CASE("general sum matches the closed forms") {
    for (int j = 0; j <= 2; ++j)
      for (int k = 0; k <= 50; ++k)
        for (int i = 0; i <= 100; ++i) {
          const double t = -1.0 + 0.02 * i;
          CHECK(rel_close(g_general(j, k, t), g_closed(j, k, t), 1e-12));
        }
    for (double t : {-0.9, -0.2, 0.0, 0.35, 0.8}) {
      const double expect = std::pow(t, 4) - 3.0 * t * t * (1.0 - t * t);
      CHECK(rel_close(g_general(1, 3, t), expect, 1e-12));
    }
  }

  TEST_CASE("endpoint identities and symmetry") {
    for (int j = 0; j <= 50; ++j)
      for (int k = 0; k <= 50; ++k) {
        CHECK(g_general(j, k, 1.0) == 1.0);
        CHECK(g_general(j, k, -1.0) == ((j + k) % 2 == 0 ? 1.0 : -1.0));
      }
    for (int j = 0; j <= 12; ++j)
      for (int k = 0; k <= 12; ++k)
        for (double t : {-0.77, -0.1, 0.0, 0.4, 0.93}) CHECK(g_general(j, k, t) == g_general(k, j, t));
  }

  TEST_CASE("unitarity bound") {
    for (int j = 0; j <= 50; ++j)
      for (int k = 0; k <= 50; ++k)
        for (int i = 0; i <= 200; ++i) {
          const double t = -1.0 + 0.01 * i;
          CHECK(std::abs(g_general(j, k, t)) <= 1.0 + 1e-12);
        }
  }

  TEST_CASE("g^(0) is a power") {
    for (int k = 0; k <= 60; ++k)
      for (double t : {-0.99, -0.5, 0.0, 0.3, 0.999}) CHECK(rel_close(g_general(0, k, t), std::pow(t, k), 1e-14));
  }

  TEST_CASE("envelope dominates and eventually decreases") {
    for (int j = 0; j <= 4; ++j)
      for (double t : {-0.95, -0.6, 0.2, 0.9}) {
        const int from = static_cast<int>(std::ceil(j / (1.0 - std::abs(t))));
        double prev = g_envelope(j, from, t);
        for (int k = 0; k <= 400; ++k) CHECK(std::abs(g_general(j, k, t)) <= g_envelope(j, k, t) * (1 + 1e-14));
        for (int k = from + 1; k <= from + 400; ++k) {
          const double e = g_envelope(j, k, t);
          CHECK(e <= prev * (1 + 1e-14));
          prev = e;
        }
      }
  }

  TEST_CASE("binomials") {
    CHECK(binomial(10, 3) == 120.0);
    CHECK(binomial(60, 30) == 118264581564861424.0);
    CHECK(binomial(5, 7) == 0.0);
    CHECK(rel_close(binomial(1000, 3), 166167000.0, 1e-15));
    CHECK(rel_close(binomial(100000, 2), 4999950000.0, 1e-15));
  }

  TEST_CASE("f coefficients") {
    const BeamSplitter zero{0.4, 0.0};
    CHECK(f_coeff(2, 3, zero).imag() == 0.0);
    CHECK(f_coeff(2, 3, zero).real() == g_general(2, 3, 0.4));
    const auto f = f_coeff(2, 0, BeamSplitter{0.5, std::numbers::pi});
    CHECK(f.real() == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(std::abs(f.imag()) <= 1e-15);
    for (int j = 0; j < 5; ++j) CHECK(std::abs(f_coeff(j, 4, BeamSplitter{-0.3, 1.1})) == doctest::Approx(std::abs(g_general(j, 4, -0.3))));
  }

  TEST_CASE("beam splitter validation") {
    CHECK_THROWS_AS(make_beam_splitter(1.5, 0.0), InputError);
    CHECK_THROWS_AS(make_beam_splitter(std::nan(""), 0.0), InputError);
    CHECK(make_beam_splitter(0.2, -std::numbers::pi).phi == doctest::Approx(std::numbers::pi));
  }
}
