#include "cli.hpp"

#include "commands.hpp"

#include "linkspec/error.hpp"
#include "linkspec/hamiltonian_io.hpp"
#include "linkspec/homology_lattice.hpp"
#include "linkspec/link_io.hpp"
#include "linkspec/spectral_calculus.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

namespace linkspec::cli {

using nlohmann::json;

namespace {

struct TableOut {
  std::string csv;
  std::string path;
  std::string format = "csv";
};

void add_table_options(CLI::App* sub, TableOut& t) {
  sub->add_option("--csv", t.csv, "Write the table as CSV to this path");
  sub->add_option("--out", t.path, "Write the table to this path (see --format)");
  sub->add_option("--format", t.format, "Format for --out")->check(CLI::IsMember({"csv", "json"}));
}

std::optional<Rational> optional_eta(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const Rational e = parse_rational(s);
  if (e < 0) throw ValidationError("eta must be non-negative");
  return e;
}

json bound_json(const SpectralBound& b) {
  json steps = json::array();
  for (const auto& d : b.derivation)
    steps.push_back({{"rule", to_string(d.rule)}, {"lower", d.lower}, {"upper", d.upper}, {"detail", d.detail}});
  return {{"lower", b.lower}, {"upper", b.upper}, {"width", b.width()}, {"derivation", steps}};
}

// Display only: parts below 1e-14 of the modulus print as 0.
std::string complex_text(const Complex& c) {
  const double tiny = 1e-14 * std::abs(c);
  const double re = std::abs(c.real()) < tiny ? 0.0 : c.real() + 0.0;
  const double im = std::abs(c.imag()) < tiny ? 0.0 : c.imag() + 0.0;
  return fmt(re) + (im < 0 ? " - " : " + ") + fmt(std::abs(im)) + "i";
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(int argc, const char* const* argv) {
    CLI::App app{"Quantitative invariants of Lagrangian links on surfaces", "linkspec"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "linkspec 0.1.0");
    define(app);
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      std::ostringstream o, er;
      const int code = app.exit(e, o, er);
      out_ << o.str();
      err_ << er.str();
      return code == 0 ? 0 : 2;
    } catch (const Error& e) {
      err_ << "error: " << e.what() << "\n";
      return exit_code(e.kind());
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << "\n";
      return 1;
    }
    return status_;
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
  int status_ = 0;
  bool json_ = false;

  std::string file_, file2_, eta_, coeffs_, f_ = "r^-4", range_, rule_ = "radius", eta_rule_ = "zero",
                                                                              family_ = "parallel";
  std::string area_ = "2/5";
  int k_ = 1, m_ = 10, n_ = 1, levels_ = 20, step_ = 1, count_ = 20, clifford_ = 0, starts_ = 200;
  std::uint64_t seed_ = 20240601;
  double radius_ = 0.38;
  bool summary_ = false, write_link_ = false;
  std::string out_path_;
  TableOut table_;

  CLI::App* sub(CLI::App& app, const char* name, const char* help, std::function<void()> body) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_flag("--json", json_, "Machine-readable JSON output");
    s->callback(std::move(body));
    return s;
  }

  void print(const json& j) { out_ << j.dump(2) << "\n"; }

  void table(const Table& t) {
    if (!table_.csv.empty()) emit(t, TableFormat::csv, table_.csv);
    if (!table_.path.empty()) emit(t, parse_table_format(table_.format), table_.path);
    if (table_.csv.empty() && table_.path.empty()) {
      out_ << emit(t, json_ ? TableFormat::json : TableFormat::csv);
      return;
    }
    const std::string where = !table_.path.empty() ? table_.path : table_.csv;
    if (json_)
      print({{"table", t.name()}, {"rows", t.size()}, {"path", where}});
    else
      out_ << "wrote " << t.size() << " rows to " << where << "\n";
  }

  void define(CLI::App& app) {
    auto* s = sub(app, "validate", "Check the combinatorial and area constraints of a link", [this] { validate(); });
    s->add_option("file", file_, "Link JSON")->required();

    s = sub(app, "monotone", "Check eta-monotonicity and report lambda", [this] { monotone(); });
    s->add_option("file", file_, "Link JSON")->required();
    s->add_option("--eta", eta_, "eta as p/q; searched for when omitted");

    s = sub(app, "parallel", "Build k parallel eta-monotone circles on the sphere", [this] { parallel(); });
    s->add_option("-k", k_, "Number of circles")->required();
    s->add_option("--eta", eta_, "eta as p/q")->default_str("0");
    s->add_option("-o,--output", out_path_, "Write the link JSON here");

    s = sub(app, "equidist", "Build the m-disc equidistributed link", [this] { equidist(); });
    s->add_option("-m", m_, "Number of discs")->required();
    s->add_option("--eta", eta_, "eta as p/q")->default_str("0");
    s->add_option("-o,--output", out_path_, "Write the link JSON here");
    s->add_flag("--link", write_link_, "Print the link JSON instead of the summary");

    s = sub(app, "class", "Invariants of a disc class", [this] { disc_class(); });
    s->add_option("file", file_, "Link JSON")->required();
    s->add_option("--coeffs", coeffs_, "Comma-separated coefficients c_1,...,c_s")->required();
    s->add_option("--eta", eta_, "eta as p/q for the monotonicity identity");

    s = sub(app, "potential", "Disc potential of a link", [this] { potential(); });
    s->add_option("file", file_, "Link JSON")->required();
    s->add_option("--eta", eta_, "Attach area exponents for this eta");

    s = sub(app, "crit", "Critical points of a disc potential", [this] { crit(); });
    s->add_option("file", file_, "Link JSON");
    s->add_option("--clifford", clifford_, "Use the Clifford potential in this many variables");
    s->add_option("--starts", starts_, "Newton starts");
    s->add_option("--seed", seed_, "Seed for the starting points");
    add_table_options(s, table_);

    s = sub(app, "calabi", "Integral of H over [0,1] x surface", [this] { calabi(); });
    s->add_option("file", file_, "Hamiltonian JSON")->required();

    s = sub(app, "hofer", "Hofer norm of H", [this] { hofer(); });
    s->add_option("file", file_, "Hamiltonian JSON")->required();

    s = sub(app, "twist", "Truncations of an infinite twist", [this] { twist(); });
    s->add_option("--f", f_, "Profile f(r)");
    s->add_option("--levels", levels_, "Number of truncations");
    s->add_option("--radius", radius_, "Disc radius");
    s->add_option("--rule", rule_, "Truncation rule")->check(CLI::IsMember({"radius", "linear"}));
    add_table_options(s, table_);

    s = sub(app, "bound", "Interval for c_L(H) with its derivation", [this] { bound_cmd(); });
    s->add_option("hamiltonian", file_, "Hamiltonian JSON")->required();
    s->add_option("link", file2_, "Link JSON")->required();
    s->add_option("--eta", eta_, "eta as p/q");

    s = sub(app, "calabi-table", "Bounds along the equidistributed sequence", [this] { calabi_table_cmd(); });
    s->add_option("hamiltonian", file_, "Hamiltonian JSON")->required();
    s->add_option("-m", range_, "Range lo..hi")->required();
    s->add_option("--step", step_, "Step in m");
    s->add_option("--eta-rule", eta_rule_, "zero, quarter or p/q");
    add_table_options(s, table_);

    s = sub(app, "zeta", "Lower bounds for zeta_m of an infinite twist", [this] { zeta(); });
    s->add_option("--f", f_, "Profile f(r)");
    s->add_option("-m", range_, "Range lo..hi")->required();
    s->add_option("--step", step_, "Step in m");
    s->add_option("--count", count_, "Number of truncations");
    s->add_option("--radius", radius_, "Cap radius (pi R^2 < 1/2)");
    s->add_option("--rule", rule_, "Truncation rule")->check(CLI::IsMember({"radius", "linear"}));
    s->add_flag("--summary", summary_, "One row per m: max over i of the lower bounds");
    add_table_options(s, table_);

    s = sub(app, "defect", "Defect of the homogenized invariant", [this] { defect(); });
    s->add_option("-k", k_, "Number of circles")->required();
    s->add_option("--eta", eta_, "eta as p/q")->default_str("0");

    s = sub(app, "mu", "Homogenized invariant of an autonomous Hamiltonian", [this] { mu(); });
    s->add_option("hamiltonian", file_, "Hamiltonian JSON")->required();
    s->add_option("link", file2_, "Link JSON")->required();
    s->add_option("-n", n_, "Homogenization depth");
    s->add_option("--eta", eta_, "eta as p/q");

    s = sub(app, "duality", "Check c(H) + c(H-bar) <= (k+1) lambda / k", [this] { duality(); });
    s->add_option("hamiltonian", file_, "Hamiltonian JSON")->required();
    s->add_option("link", file2_, "Link JSON")->required();
    s->add_option("--eta", eta_, "eta as p/q");

    s = sub(app, "scl", "Stable commutator length lower bounds", [this] { scl(); });
    s->add_option("-n", range_, "Range lo..hi (the family starts at 2)")->default_str("2..20");
    add_table_options(s, table_);

    s = sub(app, "independence", "Triangular witness matrix for a family of invariants", [this] { independence(); });
    s->add_option("config", file_, "JSON {\"family\": [{\"k\": K, \"eta\": \"p/q\"}, ...]}")->required();
    add_table_options(s, table_);

    s = sub(app, "quasicalabi", "Bounds on c and mu along k-circle links", [this] { quasicalabi(); });
    s->add_option("hamiltonian", file_, "Hamiltonian JSON")->required();
    s->add_option("-k", range_, "Range lo..hi")->required();
    s->add_option("--eta-rule", eta_rule_, "zero, quarter or p/q");
    s->add_option("--links", family_, "Link family")->check(CLI::IsMember({"parallel", "equidistributed"}));
    add_table_options(s, table_);

    s = sub(app, "fragmentation", "Evaluate the fragmentation witness on a cap-supported H", [this] { fragmentation(); });
    s->add_option("hamiltonian", file_, "Hamiltonian JSON with a declared support")->required();
    s->add_option("--area", area_, "Cap area A < 1/2 as p/q");

    s = sub(app, "run", "Run a scenario file", [this] { run_scenario(file_, out_); });
    s->add_option("scenario", file_, "Scenario JSON")->required();
  }

  void validate() {
    const SurfaceLink L = load_link(file_);
    const ValidationReport r = validate_link(L);
    if (json_) {
      print({{"ok", r.ok()}, {"k", L.k()}, {"s", L.s()}, {"violations", r.violations}, {"warnings", r.warnings}});
    } else {
      out_ << (r.ok() ? "valid" : "invalid") << ": k = " << L.k() << ", s = " << L.s() << ", genus "
           << L.surface.genus << "\n";
      for (const auto& v : r.violations) out_ << "  violation: " << v << "\n";
      for (const auto& w : r.warnings) out_ << "  warning: " << w << "\n";
    }
    if (!r.ok()) status_ = 2;
  }

  void monotone() {
    const SurfaceLink L = load_link(file_);
    require_valid(L);
    std::optional<Rational> eta = optional_eta(eta_);
    if (!eta) eta = monotone_eta(L);
    if (!eta) {
      if (json_)
        print({{"monotone", false}});
      else
        out_ << "not eta-monotone for any eta >= 0\n";
      return;
    }
    const MonotonicityReport r = check_monotone(L, *eta);
    std::vector<std::string> values;
    for (const auto& v : r.values) values.push_back(format_rational(v));
    if (json_) {
      json j{{"monotone", r.is_monotone}, {"eta", format_rational(*eta)}, {"values", values}};
      if (r.lambda) j["lambda"] = format_rational(*r.lambda);
      print(j);
      return;
    }
    out_ << (r.is_monotone ? "monotone" : "not monotone") << " for eta = " << format_rational(*eta) << "\n";
    if (r.lambda) out_ << "lambda = " << format_rational(*r.lambda) << "\n";
    for (std::size_t j = 0; j < values.size(); ++j)
      out_ << "  " << L.regions[j].id << ": 2 eta (k_j - 1) + A_j = " << values[j] << "\n";
  }

  void parallel() {
    const Rational eta = optional_eta(eta_).value_or(Rational(0));
    const SurfaceLink L = build_parallel_link(k_, eta);
    if (!out_path_.empty()) {
      save_link(L, out_path_);
      if (json_)
        print({{"path", out_path_}, {"lambda", format_rational(lambda_closed_form(k_, eta))}});
      else
        out_ << "wrote " << out_path_ << " (lambda = " << format_rational(lambda_closed_form(k_, eta)) << ")\n";
      return;
    }
    out_ << link_to_json(L) << "\n";
  }

  void equidist() {
    const Rational eta = optional_eta(eta_).value_or(Rational(0));
    const EquidistributedLink E = build_equidistributed_link(m_, eta);
    if (!out_path_.empty()) save_link(E.link, out_path_);
    if (write_link_) {
      out_ << link_to_json(E.link) << "\n";
      return;
    }
    if (json_) {
      print({{"m", E.m},
             {"eta", format_rational(E.eta)},
             {"alpha", format_rational(E.alpha)},
             {"complement_area", format_rational(E.complement_area)},
             {"max_diameter", E.max_diameter}});
      return;
    }
    out_ << "m = " << E.m << ", eta = " << format_rational(E.eta) << "\n"
         << "alpha = " << format_rational(E.alpha) << "\n"
         << "complement area = " << format_rational(E.complement_area) << "\n"
         << "max disc diameter = " << fmt(E.max_diameter) << "\n";
    if (!out_path_.empty()) out_ << "wrote " << out_path_ << "\n";
  }

  void disc_class() {
    const SurfaceLink L = load_link(file_);
    require_valid(L);
    std::vector<long long> c;
    std::stringstream ss(coeffs_);
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != item.size()) throw ValidationError("--coeffs: '" + item + "' is not an integer");
      c.push_back(v);
    }
    const DiscClass cls = make_class(L, c);
    const ClassInvariants inv = class_invariants(L, cls);
    bool nonneg = true;
    for (long long v : c) nonneg = nonneg && v >= 0;
    std::optional<long long> chi;
    std::optional<IndexIdentity> idx;
    if (nonneg) {
      chi = riemann_hurwitz(L, cls);
      idx = index_identity(L, cls);
    }
    std::optional<Rational> eta = optional_eta(eta_);
    if (!eta) eta = monotone_eta(L);
    std::optional<bool> mono;
    if (eta && check_monotone(L, *eta).is_monotone) mono = check_monotonicity_identity(L, *eta, cls);

    if (json_) {
      json j{{"maslov", inv.maslov},
             {"area", format_rational(inv.area)},
             {"delta", inv.delta},
             {"divisor_intersections", inv.divisor_intersections}};
      if (chi) j["euler_characteristic"] = *chi;
      if (idx) j["index_identity"] = idx->holds;
      if (mono) j["monotonicity_identity"] = *mono;
      print(j);
      return;
    }
    out_ << "mu = " << inv.maslov << "\nomega = " << format_rational(inv.area) << "\nDelta = " << inv.delta
         << "\nD-intersections =";
    for (long long v : inv.divisor_intersections) out_ << " " << v;
    out_ << "\n";
    if (chi) out_ << "chi = " << *chi << "\n";
    if (idx)
      out_ << "index identity: " << (idx->holds ? "holds" : "fails") << " (k + mu = " << idx->vdim_u_plus_3
           << ", cover = " << idx->vdim_cover << ")\n";
    if (mono)
      out_ << "omega + eta Delta = (lambda/2) mu: " << (*mono ? "holds" : "fails") << " at eta = "
           << format_rational(*eta) << "\n";
  }

  void potential() {
    const SurfaceLink L = load_link(file_);
    require_valid(L);
    const DiscPotential w = build_potential(L, optional_eta(eta_));
    for (const auto& msg : w.warnings) err_ << "warning: " << msg << "\n";
    if (json_) {
      json mons = json::array();
      for (const auto& m : w.monomials)
        mons.push_back({{"region", m.region},
                        {"coeff", {format_rational(m.coeff.re), format_rational(m.coeff.im)}},
                        {"exponent", m.exponent},
                        {"area_exponent", format_rational(m.area_exponent)}});
      print({{"variables", w.variables}, {"monomials", mons}});
      return;
    }
    out_ << "W = " << to_string(w) << "\n";
  }

  void crit() {
    DiscPotential w;
    if (clifford_ > 0) {
      w = clifford_potential(clifford_);
    } else if (!file_.empty()) {
      const SurfaceLink L = load_link(file_);
      require_valid(L);
      w = specialize(build_potential(L));
    } else {
      throw ValidationError("crit needs a link file or --clifford K");
    }
    SolverOptions o;
    o.starts = starts_;
    o.seed = seed_;
    const CriticalPointSearch s = find_critical_points(w, o);
    if (json_ || !table_.csv.empty() || !table_.path.empty()) {
      table(crit_table(s, w.nvars()));
      return;
    }
    out_ << s.points.size() << " critical points (" << s.starts << " starts, " << s.failed_starts << " failed)\n";
    int i = 0;
    for (const auto& p : s.points) {
      out_ << "  #" << ++i << " (";
      for (std::size_t v = 0; v < p.coords.size(); ++v) out_ << (v ? ", " : "") << complex_text(p.coords[v]);
      out_ << ") residual " << fmt(p.residual) << ", det Hess " << complex_text(p.hessian_det) << ", "
           << (p.non_degenerate ? "non-degenerate" : "degenerate") << "\n";
    }
  }

  void calabi() {
    const double v = integrate(load_hamiltonian(file_));
    if (json_)
      print({{"calabi", v}});
    else
      out_ << fmt(v) << "\n";
  }

  void hofer() {
    const double v = hofer_norm(load_hamiltonian(file_));
    if (json_)
      print({{"hofer", v}});
    else
      out_ << fmt(v) << "\n";
  }

  void twist() { table(twist_table(f_, radius_, levels_, parse_truncation_rule(rule_))); }

  void bound_cmd() {
    const Hamiltonian h = load_hamiltonian(file_);
    const SurfaceLink L = load_link(file2_);
    require_valid(L);
    const SpectralBound b = bound(h, L, optional_eta(eta_));
    if (json_) {
      print(bound_json(b));
      return;
    }
    out_ << "c_L(H) in [" << fmt(b.lower) << ", " << fmt(b.upper) << "]\n";
    for (const auto& d : b.derivation)
      out_ << "  " << to_string(d.rule) << ": [" << fmt(d.lower) << ", " << fmt(d.upper) << "] " << d.detail << "\n";
  }

  void calabi_table_cmd() {
    const Hamiltonian h = load_hamiltonian(file_);
    table(calabi_table(h, range_values(parse_range(range_, "-m"), step_), parse_eta_rule(eta_rule_)));
  }

  void zeta() {
    ZetaParams p;
    p.f = f_;
    p.radius = radius_;
    p.count = count_;
    p.ms = range_values(parse_range(range_, "-m"), step_);
    p.rule = parse_truncation_rule(rule_);
    p.summary = summary_;
    table(zeta_table(p));
  }

  void defect() {
    const DefectBound d = defect_bound(k_, optional_eta(eta_).value_or(Rational(0)));
    if (json_) {
      print({{"k", d.k},
             {"eta", format_rational(d.eta)},
             {"lambda", format_rational(d.lambda)},
             {"defect", format_rational(d.defect)},
             {"duality_constant", format_rational(d.duality_constant())}});
      return;
    }
    out_ << "lambda = " << format_rational(d.lambda) << "\ndefect = " << format_rational(d.defect)
         << "\n(k+1) lambda / k = " << format_rational(d.duality_constant()) << "\n";
  }

  void mu() {
    const Hamiltonian h = load_hamiltonian(file_);
    const SurfaceLink L = load_link(file2_);
    require_valid(L);
    const QuasiValue q = homogenize(h, L, n_, optional_eta(eta_));
    if (json_) {
      print({{"lower", q.lower},
             {"upper", q.upper},
             {"value", q.value()},
             {"n_used", q.n_used},
             {"error_bound", q.error_bound},
             {"exact", q.exact},
             {"mu_lo", q.mu_lo()},
             {"mu_hi", q.mu_hi()}});
      return;
    }
    if (q.exact)
      out_ << "mu = " << fmt(q.value()) << " (exact)\n";
    else
      out_ << "c(nH)/n in [" << fmt(q.lower) << ", " << fmt(q.upper) << "], n = " << q.n_used << ", error bound "
           << fmt(q.error_bound) << "\nmu in [" << fmt(q.mu_lo()) << ", " << fmt(q.mu_hi()) << "]\n";
  }

  void duality() {
    const Hamiltonian h = load_hamiltonian(file_);
    const SurfaceLink L = load_link(file2_);
    require_valid(L);
    const DualityResult r = duality_check(h, L, optional_eta(eta_));
    if (json_) {
      print({{"holds", r.holds}, {"lhs", r.lhs}, {"rhs", format_rational(r.rhs)}, {"slack", r.slack}});
    } else {
      out_ << "lower(H) + lower(H-bar) = " << fmt(r.lhs) << " <= " << format_rational(r.rhs) << ": "
           << (r.holds ? "holds" : "FAILS") << " (slack " << fmt(r.slack) << ")\n";
    }
    if (!r.holds) status_ = 3;
  }

  void scl() {
    Range r = parse_range(range_.empty() ? "2..20" : range_, "-n");
    if (r.lo < 2) {
      err_ << "note: the family starts at n = 2 (for n = 1 both links are the equator)\n";
      r.lo = 2;
      if (r.hi < 2) throw ValidationError("-n: range contains no n >= 2");
    }
    table(scl_table(r));
  }

  void independence() {
    const IndependenceWitness w = independence_witness(parse_family(read_text_file(file_)));
    if (!w.triangular_unit) {
      err_ << "error: witness matrix is not unit lower-triangular\n";
      status_ = 3;
    }
    table(independence_table(w));
  }

  void quasicalabi() {
    const Hamiltonian h = load_hamiltonian(file_);
    table(quasicalabi_table(h, parse_range(range_, "-k"), parse_eta_rule(eta_rule_), parse_link_family(family_)));
  }

  void fragmentation() {
    const Hamiltonian h = load_hamiltonian(file_);
    const FragmentationWitness w = fragmentation_witness(parse_rational(area_));
    const auto [lo, hi] = fragmentation_value(w, h);
    if (json_)
      print({{"lower", lo}, {"upper", hi}, {"eta2", format_rational(w.eta2)}});
    else
      out_ << "(mu_L2 - mu_L1)(phi) in [" << fmt(lo) << ", " << fmt(hi) << "]\n";
  }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Runner r(out, err);
  return r.run(argc, argv);
}

}  // namespace linkspec::cli
