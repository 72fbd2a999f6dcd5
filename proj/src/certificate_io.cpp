#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "lobound/certificate.hpp"
#include "lobound/errors.hpp"

namespace lobound::cert {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& tok) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') throw InputError("certificate table: bad number '" + tok + "'");
  return v;
}

std::string expect_key(std::istream& in, const std::string& key) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto sp = line.find(' ');
    if (line.substr(0, sp) != key) throw InputError("certificate table: expected '" + key + "', got '" + line + "'");
    return sp == std::string::npos ? std::string{} : line.substr(sp + 1);
  }
  throw InputError("certificate table: missing '" + key + "'");
}

}  // namespace

void write_table(std::ostream& out, const CertificateFamily& cert) {
  bool rational = false;
  for (const auto& p : cert.pieces) rational = rational || !p.is_constant();
  out << "# lobound certificate table v1\n";
  out << "gate " << cert.gate.label() << "\n";
  out << "phases";
  for (double ph : cert.gate.phases()) out << ' ' << fmt(ph);
  out << "\n";
  out << "delta " << fmt(cert.delta) << "\n";
  out << "kmax " << cert.k_max << "\n";
  out << "grid " << cert.grid << "\n";
  out << "origin " << cert.origin << "\n";
  out << "form " << (rational ? "rational" : "constant") << "\n";
  out << "pieces " << cert.pieces.size() << "\n";
  out << (rational ? "# t_lo t_hi den0 den1 den2 s_1..s_N\n" : "# t_lo t_hi s_1..s_N\n");
  for (const auto& p : cert.pieces) {
    out << fmt(p.t_lo) << ' ' << fmt(p.t_hi);
    if (rational)
      for (double d : p.den) out << ' ' << fmt(d);
    for (double s : p.s) out << ' ' << fmt(s);
    out << "\n";
  }
}

CertificateFamily read_table(std::istream& in) {
  const std::string label = expect_key(in, "gate");
  std::vector<double> phases;
  {
    std::istringstream ss(expect_key(in, "phases"));
    std::string tok;
    while (ss >> tok) phases.push_back(parse_double(tok));
  }
  CertificateFamily c;
  c.gate = fock::GateSpec(phases, label);
  c.delta = parse_double(expect_key(in, "delta"));
  c.k_max = std::atoi(expect_key(in, "kmax").c_str());
  c.grid = std::atoi(expect_key(in, "grid").c_str());
  c.origin = expect_key(in, "origin");
  const std::string form = expect_key(in, "form");
  if (form != "rational" && form != "constant") throw InputError("certificate table: unknown form '" + form + "'");
  const long count = std::atol(expect_key(in, "pieces").c_str());
  if (count < 1) throw InputError("certificate table: piece count must be positive");
  const std::size_t N = phases.size();
  std::string line;
  while (static_cast<long>(c.pieces.size()) < count && std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::vector<double> vals;
    std::string tok;
    while (ss >> tok) vals.push_back(parse_double(tok));
    const std::size_t want = 2 + (form == "rational" ? 3 : 0) + N;
    if (vals.size() != want) throw InputError("certificate table: row has the wrong number of columns");
    Piece p;
    p.t_lo = vals[0];
    p.t_hi = vals[1];
    std::size_t at = 2;
    if (form == "rational") {
      p.den = {vals[2], vals[3], vals[4]};
      at = 5;
    }
    p.s.assign(vals.begin() + static_cast<long>(at), vals.end());
    c.pieces.push_back(std::move(p));
  }
  if (static_cast<long>(c.pieces.size()) != count) throw InputError("certificate table: truncated");
  c.validate();
  return c;
}

}  // namespace lobound::cert
