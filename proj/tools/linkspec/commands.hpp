#pragma once

#include "linkspec/disc_potential.hpp"
#include "linkspec/hamiltonian.hpp"
#include "linkspec/quasimorphism.hpp"
#include "linkspec/table.hpp"
#include "linkspec/twist.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace linkspec::cli {

struct Range {
  int lo = 0;
  int hi = 0;
};

// "10..100" or "50".
Range parse_range(const std::string& text, const char* what);
std::vector<int> range_values(const Range& r, int step);

// "zero", "quarter" (1/(4k(k-1))) or a constant "p/q".
EtaRule parse_eta_rule(const std::string& text);

TruncationRule parse_truncation_rule(const std::string& text);
LinkFamily parse_link_family(const std::string& text);

std::string fmt(double v);

Table calabi_table(const Hamiltonian& h, const std::vector<int>& ms, const EtaRule& eta);

struct ZetaParams {
  std::string f = "r^-4";
  double radius = 0.38;
  int count = 20;
  std::vector<int> ms;
  TruncationRule rule = TruncationRule::radius;
  bool summary = false;
};
Table zeta_table(const ZetaParams& p);

Table twist_table(const std::string& f, double radius, int levels, TruncationRule rule);
Table scl_table(const Range& n);
Table quasicalabi_table(const Hamiltonian& h, const Range& k, const EtaRule& eta, LinkFamily family);
Table crit_table(const CriticalPointSearch& s, std::size_t nvars);
Table independence_table(const IndependenceWitness& w);

// {"family": [{"k": 2, "eta": "0"}, ...]}
std::vector<std::pair<int, Rational>> parse_family(const std::string& json_text);

// Runs a scenario file; artifacts are written relative to its directory.
void run_scenario(const std::string& path, std::ostream& out);

}  // namespace linkspec::cli
