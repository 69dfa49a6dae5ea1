#include "bemloc/harness.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>

#include "bemloc/errors.hpp"
#include "bemloc/solver.hpp"

namespace bemloc {

namespace {

double parse_number(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) throw InputError("not a number: '" + std::string(s) + "'");
  return v;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

// The ray theta = theta0 + pi must miss the boundary except at the center.
void check_branch(const Polygon& p, const SingularSolution& s) {
  const double c = std::cos(s.theta0());
  const double sn = std::sin(s.theta0());
  auto rotate = [&](const Point& x) {
    const Point d = x - s.center();
    return Point{c * d.x() + sn * d.y(), -sn * d.x() + c * d.y()};
  };
  for (std::size_t k = 0; k < p.size(); ++k) {
    const Point a = rotate(p.vertex(k));
    const Point b = rotate(p.vertex(k + 1));
    if (a.norm() == 0.0 || b.norm() == 0.0) {
      const Point o = a.norm() == 0.0 ? b : a;
      if (o.y() == 0.0 && o.x() < 0.0) throw InputError("boundary edge runs along the branch cut of the solution");
      continue;
    }
    if ((a.y() > 0.0) == (b.y() > 0.0) && a.y() != 0.0 && b.y() != 0.0) continue;
    const double x = a.y() == b.y() ? std::min(a.x(), b.x()) : a.x() + (b.x() - a.x()) * (-a.y()) / (b.y() - a.y());
    if (x < 0.0) throw InputError("boundary crosses the branch cut of the solution");
  }
}

double default_local_tol(const ExperimentConfig& c) {
  if (c.local_rate_tol) return *c.local_rate_tol;
  return c.geometry == "zshape" ? 0.08 : 0.10;
}

RateCheck make_check(const std::vector<ErrorRecord>& records, const std::string& norm, int window, double predicted,
                     double tol) {
  RateCheck chk;
  chk.norm = norm;
  chk.predicted = predicted;
  chk.tolerance = tol;
  const std::size_t count = std::min<std::size_t>(window, records.size());
  bool exact = true;
  for (std::size_t k = records.size() - count; k < records.size(); ++k)
    exact = exact && records[k].norms.at(norm) <= kExactErrorLevel;
  if (exact) {
    chk.exact = true;
    chk.eoc = std::numeric_limits<double>::quiet_NaN();
    chk.passed = true;
    return chk;
  }
  chk.eoc = fit_eoc(records, norm, window);
  chk.passed = std::abs(chk.eoc - predicted) <= tol;
  return chk;
}

template <class F>
auto stage(int level, const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError& e) {
    throw InputError("level " + std::to_string(level) + ", " + name + ": " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError("level " + std::to_string(level) + ", " + name + ": " + e.what());
  }
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

double level_eoc(const ErrorRecord& prev, const ErrorRecord& cur, const std::string& norm) {
  const double e0 = prev.norms.at(norm);
  const double e1 = cur.norms.at(norm);
  if (!(e0 > kExactErrorLevel) || !(e1 > kExactErrorLevel)) return std::numeric_limits<double>::quiet_NaN();
  return -std::log(e1 / e0) / std::log(static_cast<double>(cur.N) / static_cast<double>(prev.N));
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open output file " + path);
  return out;
}

}  // namespace

Equation parse_equation(std::string_view s) {
  if (s == "symm") return Equation::symm;
  if (s == "hypsing") return Equation::hypsing;
  throw InputError("unknown equation '" + std::string(s) + "' (expected symm or hypsing)");
}

std::string_view to_string(Equation e) { return e == Equation::symm ? "symm" : "hypsing"; }

double parse_rational(std::string_view s) {
  const std::string t = trim(s);
  const auto slash = t.find('/');
  if (slash == std::string::npos) return parse_number(t);
  const double num = parse_number(trim(std::string_view(t).substr(0, slash)));
  const double den = parse_number(trim(std::string_view(t).substr(slash + 1)));
  if (den == 0.0) throw InputError("zero denominator in '" + t + "'");
  return num / den;
}

Polygon load_geometry(const std::string& spec) {
  constexpr std::string_view prefix = "file:";
  if (spec.rfind(prefix, 0) == 0) {
    Polygon p = normalize_polygon(read_polygon_file(spec.substr(prefix.size())));
    p.name = spec;
    return p;
  }
  return canonical_geometry(spec);
}

void validate(const ExperimentConfig& c) {
  if (c.levels < 3) throw InputError("levels must be at least 3, got " + std::to_string(c.levels));
  if (!(c.alpha > 0.0)) throw InputError("alpha must be positive");
  if (c.elements_per_edge < 1) throw InputError("need at least one element per edge");
  if (!(c.region_dist > 0.0 && c.region_dist < 1.0)) throw InputError("region distance fraction must lie in (0, 1)");
  if (c.refine_local < 2) throw InputError("local refine factor must be at least 2");
  if (c.eoc_window < 2) throw InputError("EOC window must be at least 2");
  if (c.global_l2 && c.alpha <= 0.5)
    throw InputError("global L2 errors need alpha > 1/2: the flux is not square integrable at the corner");
}

double regularity_offset(const Polygon& p, double alpha, Equation equation) {
  if (alpha == std::round(alpha)) return kSmoothRegularity;
  // On the two edges at the center the density is c r^a with c = cos(alpha theta)
  // for the trace and c = sin(alpha theta) for the flux.
  bool singular = false;
  for (const Point& v : {p.vertex(1), p.vertex(p.size() - 1)}) {
    const Point d = v - p.vertex(0);
    const double t = alpha * std::atan2(d.y(), d.x());
    const double c = equation == Equation::symm ? std::sin(t) : std::cos(t);
    singular = singular || std::abs(c) > 1e-12;
  }
  return singular ? std::min(alpha, kSmoothRegularity) : kSmoothRegularity;
}

PredictedRates predicted_rates(const Polygon& p, double alpha, Equation equation) {
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
  PredictedRates r;
  r.alpha_D = alpha_D_bound(p);
  r.global_energy = regularity_offset(p, alpha, equation);
  r.local = std::min(0.5 + r.global_energy + r.alpha_D, 1.0);
  return r;
}

PredictedRates predicted_rates(const std::string& geometry, double alpha, Equation equation) {
  return predicted_rates(load_geometry(geometry), alpha, equation);
}

bool ConvergenceTable::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

const RateCheck* ConvergenceTable::check(const std::string& norm) const {
  for (const auto& c : checks)
    if (c.norm == norm) return &c;
  return nullptr;
}

ConvergenceTable run_experiment(const ExperimentConfig& c, std::ostream* log) {
  validate(c);
  const Polygon poly = load_geometry(c.geometry);
  const SingularSolution sol(c.alpha);
  check_branch(poly, sol);
  const BoundaryData trace = trace_data(sol);
  const BoundaryData flux = flux_data(sol);
  const bool symm = c.equation == Equation::symm;

  ConvergenceTable t;
  t.equation = c.equation;
  t.geometry = c.geometry;
  t.alpha = c.alpha;
  t.predicted = predicted_rates(poly, c.alpha, c.equation);
  if (c.expected_local) t.predicted.local = *c.expected_local;
  if (c.expected_energy) t.predicted.global_energy = *c.expected_energy;
  t.norms = {norm_names::energy, norm_names::l2_local};
  if (symm && c.local_negative_norm) t.norms.push_back(norm_names::hm12_local);
  if (!symm) t.norms.push_back(norm_names::h1_local);
  if (symm && c.global_l2) t.norms.push_back(norm_names::l2_global);

  BoundaryMesh mesh = initial_mesh_per_edge(poly, c.elements_per_edge);
  const BoundaryRegion region = select_region_by_distance(mesh, poly.vertex(0), c.region_dist);
  const std::vector<bool> everything(mesh.size(), true);
  const BoundaryRegion whole(everything);

  const ExactEnergies energies = stage(0, "exact energy", [&] { return exact_energies(poly, sol); });
  const double exact_energy = symm ? energies.single_layer() : energies.hypersingular();
  const double trace_mean = symm ? 0.0 : boundary_integral(poly, trace) / perimeter(poly);

  for (int level = 1; level <= c.levels; ++level) {
    mesh = refine_uniform(mesh);
    ErrorRecord rec;
    rec.level = level;
    rec.N = mesh.size();
    rec.h = mesh.h();
    const GalerkinSystem sys = stage(level, "solve", [&] {
      return symm ? solve_symm_system(mesh, trace) : solve_hypsing_system(mesh, flux);
    });
    stage(level, "norms", [&] {
      rec.norms[norm_names::energy] = energy_error_pythagoras(exact_energy, sys.solution, sys.rhs);
      if (symm) {
        const ElementFunction e = p0_error(mesh, sys.solution, flux);
        rec.norms[norm_names::l2_local] = l2_error(mesh, e, region);
        if (c.local_negative_norm)
          rec.norms[norm_names::hm12_local] = neg_half_norm_local(mesh, e, region, c.refine_local);
        if (c.global_l2) rec.norms[norm_names::l2_global] = l2_error(mesh, e, whole);
      } else {
        rec.norms[norm_names::l2_local] = l2_error(mesh, p1_error(mesh, sys.solution, trace, trace_mean), region);
        rec.norms[norm_names::h1_local] = h1_seminorm_error_local(mesh, sys.solution, flux, region);
      }
    });
    if (log) {
      *log << "level " << level << "  N=" << rec.N;
      for (const auto& n : t.norms) *log << "  " << n << '=' << format_value(rec.norms.at(n));
      *log << std::endl;
    }
    t.records.push_back(std::move(rec));
  }

  const double local_tol = default_local_tol(c);
  t.checks.push_back(
      make_check(t.records, norm_names::energy, c.eoc_window, t.predicted.global_energy, c.energy_rate_tol));
  if (symm) {
    t.checks.push_back(make_check(t.records, norm_names::l2_local, c.eoc_window, t.predicted.local, local_tol));
    if (c.local_negative_norm) {
      const RateCheck& l2 = t.checks.back();
      const double target = l2.exact ? t.predicted.local : l2.eoc;
      t.checks.push_back(
          make_check(t.records, norm_names::hm12_local, c.eoc_window, target, c.negative_norm_rate_tol));
    }
  } else {
    t.checks.push_back(make_check(t.records, norm_names::h1_local, c.eoc_window, t.predicted.local, local_tol));
  }
  return t;
}

std::string format_csv(const ConvergenceTable& t) {
  if (t.records.empty()) throw InputError("emit_csv: table is empty");
  const bool symm = t.equation == Equation::symm;
  const std::string local_neg = symm ? norm_names::hm12_local : norm_names::h1_local;
  const std::vector<std::string> cols = {norm_names::energy, norm_names::l2_local, local_neg};
  std::ostringstream out;
  const std::string predicted_col = symm ? "predicted_l2_local" : "predicted_h1_local";
  out << "level,N,h,err_energy_global,err_l2_local," << local_neg << ",eoc_energy,eoc_l2_local,eoc_"
      << local_neg.substr(4) << ',' << predicted_col << '\n';
  for (std::size_t k = 0; k < t.records.size(); ++k) {
    const ErrorRecord& r = t.records[k];
    out << r.level << ',' << r.N << ',' << format_value(r.h);
    for (const auto& c : cols) {
      const auto it = r.norms.find(c);
      out << ',';
      if (it != r.norms.end()) out << format_value(it->second);
    }
    for (const auto& c : cols) {
      out << ',';
      if (k == 0 || !r.norms.count(c)) continue;
      const double e = level_eoc(t.records[k - 1], r, c);
      if (std::isfinite(e)) out << format_value(e);
    }
    out << ',' << format_value(t.predicted.local) << '\n';
  }
  return out.str();
}

void emit_csv(const ConvergenceTable& t, const std::string& path) {
  const std::string text = format_csv(t);
  auto out = open_output(path);
  out << text;
  if (!out) throw InputError("write to " + path + " failed");
}

void emit_plot_data(const ConvergenceTable& t, const std::string& path) {
  if (t.records.empty()) throw InputError("emit_plot_data: table is empty");
  const ErrorRecord& last = t.records.back();
  const bool symm = t.equation == Equation::symm;
  const std::string local = symm ? norm_names::l2_local : norm_names::h1_local;
  const double n_last = static_cast<double>(last.N);
  const double c_energy = last.norms.at(norm_names::energy) * std::pow(n_last, t.predicted.global_energy);
  const double c_local = last.norms.at(local) * std::pow(n_last, t.predicted.local);
  std::ostringstream out;
  out << "# N";
  for (const auto& n : t.norms) out << ' ' << n;
  out << " ref_energy ref_local\n";
  for (const auto& r : t.records) {
    const double n = static_cast<double>(r.N);
    out << r.N;
    for (const auto& name : t.norms) out << ' ' << format_value(r.norms.at(name));
    out << ' ' << format_value(c_energy * std::pow(n, -t.predicted.global_energy)) << ' '
        << format_value(c_local * std::pow(n, -t.predicted.local)) << '\n';
  }
  auto file = open_output(path);
  file << out.str();
  if (!file) throw InputError("write to " + path + " failed");
}

void print_summary(const ConvergenceTable& t, std::ostream& out) {
  out << "geometry " << t.geometry << ", " << to_string(t.equation) << ", alpha " << t.alpha << ", alpha_D "
      << t.predicted.alpha_D << '\n';
  for (const auto& c : t.checks) {
    out << "  " << c.norm << ": ";
    if (c.exact)
      out << "exact (all errors <= " << kExactErrorLevel << ")";
    else
      out << "eoc " << c.eoc << ", predicted " << c.predicted << " +- " << c.tolerance;
    out << (c.passed ? "  PASS" : "  FAIL") << '\n';
  }
}

}  // namespace bemloc
