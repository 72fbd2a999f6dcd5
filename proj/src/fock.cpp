#include "lobound/fock.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>

#include "lobound/errors.hpp"

namespace lobound::fock {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kPascalMax = 60;

using PascalTable = std::array<std::array<std::uint64_t, kPascalMax + 1>, kPascalMax + 1>;

constexpr PascalTable make_pascal() {
  PascalTable table{};
  for (int n = 0; n <= kPascalMax; ++n) {
    table[n][0] = 1;
    for (int k = 1; k <= n; ++k) table[n][k] = table[n - 1][k - 1] + (k <= n - 1 ? table[n - 1][k] : 0);
  }
  return table;
}

constexpr PascalTable kPascal = make_pascal();

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InputError("malformed " + what + ": '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(value)) throw InputError("malformed " + what + ": '" + text + "'");
  return value;
}

// Integer power that keeps t = 0, exponent 0 at exactly 1.
double ipow(double t, int e) {
  double result = 1.0;
  double base = t;
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

}  // namespace

double normalize_angle(double angle) {
  if (!std::isfinite(angle)) throw InputError("phase must be finite");
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

std::complex<double> unit_phasor(double angle) {
  const double r = normalize_angle(angle);
  if (r == 0.0) return {1.0, 0.0};
  if (r == std::numbers::pi) return {-1.0, 0.0};
  if (r == 0.5 * std::numbers::pi) return {0.0, 1.0};
  if (r == 1.5 * std::numbers::pi) return {0.0, -1.0};
  return {std::cos(r), std::sin(r)};
}

GateSpec::GateSpec(std::vector<double> phases, std::string label) : phases_(std::move(phases)), label_(std::move(label)) {
  for (double& p : phases_) p = normalize_angle(p);
}

double GateSpec::phase(int j) const {
  if (j < 0 || j > cutoff()) throw InputError("GateSpec::phase: index out of range");
  return j == 0 ? 0.0 : phases_[static_cast<std::size_t>(j - 1)];
}

bool GateSpec::is_real() const noexcept {
  for (double p : phases_)
    if (p != 0.0 && p != std::numbers::pi) return false;
  return true;
}

GateSpec gate_ns() { return GateSpec({0.0, std::numbers::pi}, "ns"); }

GateSpec gate_phase(double phi2) {
  std::ostringstream label;
  label.precision(17);
  label << "phase:" << phi2;
  return GateSpec({0.0, phi2}, label.str());
}

GateSpec gate_sign(int cutoff) {
  if (cutoff < 1) throw InputError("gate_sign: cutoff must be at least 1");
  std::vector<double> phases(static_cast<std::size_t>(cutoff), 0.0);
  phases.back() = std::numbers::pi;
  return GateSpec(std::move(phases), "sign:" + std::to_string(cutoff));
}

GateSpec gate_custom(std::vector<double> phases) {
  std::ostringstream label;
  label.precision(17);
  label << "custom:";
  for (std::size_t i = 0; i < phases.size(); ++i) label << (i ? "," : "") << phases[i];
  return GateSpec(std::move(phases), label.str());
}

GateSpec parse_gate(const std::string& selector) {
  if (selector == "ns") return gate_ns();
  const auto colon = selector.find(':');
  if (colon == std::string::npos) throw InputError("unknown gate selector '" + selector + "'");
  const std::string kind = selector.substr(0, colon);
  const std::string arg = selector.substr(colon + 1);
  if (kind == "phase") return gate_phase(parse_double(arg, "phase"));
  if (kind == "sign") {
    int n = 0;
    const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), n);
    if (ec != std::errc{} || ptr != arg.data() + arg.size() || n < 1)
      throw InputError("malformed sign gate cutoff: '" + arg + "'");
    return gate_sign(n);
  }
  if (kind == "custom") {
    if (arg.empty()) throw InputError("custom gate needs at least one phase");
    std::vector<double> phases;
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ',')) phases.push_back(parse_double(item, "phase list entry"));
    if (arg.back() == ',') throw InputError("malformed phase list: trailing comma");
    return gate_custom(std::move(phases));
  }
  throw InputError("unknown gate selector '" + selector + "'");
}

BeamSplitter make_beam_splitter(double t, double phi) {
  if (!std::isfinite(t) || t < -1.0 || t > 1.0) throw InputError("transmittivity must lie in [-1, 1]");
  return BeamSplitter{t, normalize_angle(phi)};
}

double binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  if (n <= kPascalMax) return static_cast<double>(kPascal[n][k]);
  k = std::min(k, n - k);
  if (k <= 30) {
    long double r = 1.0L;
    for (int i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    return static_cast<double>(r);
  }
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

double g_closed(int j, int k, double t) {
  const double u = 1.0 - t * t;
  const double kk = static_cast<double>(k);
  switch (j) {
    case 0:
      return ipow(t, k);
    case 1:
      // t^{k-1} (t^2 - k u): the k u term carries t^{k-1}, absent when k = 0.
      return ipow(t, k + 1) - (k >= 1 ? kk * u * ipow(t, k - 1) : 0.0);
    case 2: {
      double v = ipow(t, k + 2);
      if (k >= 1) v -= 2.0 * kk * u * ipow(t, k);
      if (k >= 2) v += u * u * kk * (kk - 1.0) / 2.0 * ipow(t, k - 2);
      return v;
    }
    default:
      throw InputError("g_closed: only j in {0, 1, 2} has a closed form");
  }
}

double g_general(int j, int k, double t) {
  if (j < 0 || k < 0) throw InputError("g_general: indices must be non-negative");
  const double u = 1.0 - t * t;
  const int lmax = std::min(j, k);
  double sum = 0.0;
  double upow = 1.0;
  for (int l = 0; l <= lmax; ++l) {
    const double term = binomial(j, l) * binomial(k, l) * upow * ipow(t, j + k - 2 * l);
    sum += (l % 2 == 0) ? term : -term;
    upow *= u;
  }
  return sum;
}

double g_envelope(int j, int k, double t) {
  const double u = 1.0 - t * t;
  const double at = std::abs(t);
  const int lmax = std::min(j, k);
  double sum = 0.0;
  double upow = 1.0;
  for (int l = 0; l <= lmax; ++l) {
    sum += binomial(j, l) * binomial(k, l) * upow * ipow(at, j + k - 2 * l);
    upow *= u;
  }
  return sum;
}

std::complex<double> f_coeff(int j, int k, const BeamSplitter& bs) {
  return unit_phasor(bs.phi * j) * g_general(j, k, bs.t);
}

}  // namespace lobound::fock
