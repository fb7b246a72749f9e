// kahler-cv: valuations, Cauchy formulas and shedif checks from the command line.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kahler/cauchy.hpp"
#include "kahler/contour.hpp"
#include "kahler/expr.hpp"
#include "kahler/field.hpp"
#include "kahler/quadrature.hpp"
#include "kahler/serialize.hpp"

namespace {

using namespace kahler;
using nlohmann::json;

enum Exit : int { kOk = 0, kVerdictFailed = 1, kUsage = 2, kSingular = 3, kGeometry = 4 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string expr;
  std::string raw_u;
  std::string raw_v;
  std::string circle;
  std::string polyline;
  bool open = false;
  std::string curve_json;
  std::string at;
  std::string from;
  int order = 1;
  std::vector<std::string> poles;
  std::vector<double> radii;
  std::string grid = "-1,1,-1,1,5";
  double tol = -1.0;
  std::optional<double> rel_tol;
  std::optional<double> abs_tol;
  std::optional<std::size_t> max_evals;
  bool json_out = false;
  std::string dump_samples;
};

std::vector<double> parse_numbers(const std::string& text, char sep, const char* what) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) {
      throw UsageError(std::string("empty number in ") + what);
    }
    const char* first = item.data() + b;
    const char* last = item.data() + e + 1;
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc() || ptr != last) {
      throw UsageError(std::string("bad number \"") + item + "\" in " + what);
    }
    out.push_back(x);
  }
  return out;
}

Point parse_point(const std::string& text, const char* what) {
  const auto v = parse_numbers(text, ',', what);
  if (v.size() != 2) {
    throw UsageError(std::string(what) + " expects x,y");
  }
  return {v[0], v[1]};
}

std::optional<Curve> read_curve(const RunConfig& cfg) {
  const int given = !cfg.circle.empty() + !cfg.polyline.empty() + !cfg.curve_json.empty();
  if (given > 1) {
    throw UsageError("give only one of --circle, --polyline, --curve-json");
  }
  if (!cfg.circle.empty()) {
    const auto comma = cfg.circle.find_last_of(',');
    std::string nums = cfg.circle;
    Orientation orient = Orientation::Ccw;
    if (comma != std::string::npos) {
      const std::string tail = cfg.circle.substr(comma + 1);
      if (tail == "ccw" || tail == "cw") {
        orient = tail == "ccw" ? Orientation::Ccw : Orientation::Cw;
        nums = cfg.circle.substr(0, comma);
      }
    }
    const auto v = parse_numbers(nums, ',', "--circle");
    if (v.size() != 3) {
      throw UsageError("--circle expects cx,cy,r[,ccw|cw]");
    }
    return Curve::circle({v[0], v[1]}, v[2], orient);
  }
  if (!cfg.polyline.empty()) {
    std::vector<Point> pts;
    std::stringstream in(cfg.polyline);
    std::string item;
    while (std::getline(in, item, ';')) {
      pts.push_back(parse_point(item, "--polyline"));
    }
    return Curve::polyline(std::move(pts), !cfg.open);
  }
  if (!cfg.curve_json.empty()) {
    json j;
    if (cfg.curve_json.front() == '{') {
      j = json::parse(cfg.curve_json, nullptr, false);
    } else {
      std::ifstream file(cfg.curve_json);
      if (!file) {
        throw UsageError("cannot read " + cfg.curve_json);
      }
      j = json::parse(file, nullptr, false);
    }
    if (j.is_discarded()) {
      throw UsageError("--curve-json is not valid JSON");
    }
    return curve_from_json(j);
  }
  return std::nullopt;
}

Curve require_curve(const RunConfig& cfg) {
  auto c = read_curve(cfg);
  if (!c) {
    throw UsageError("a curve is required (--circle, --polyline or --curve-json)");
  }
  return *c;
}

Expr require_expr(const RunConfig& cfg) {
  if (cfg.expr.empty()) {
    throw UsageError("-e/--expr is required");
  }
  return parse_expr(cfg.expr);
}

QuadratureConfig quadrature_config(const RunConfig& cfg) {
  QuadratureConfig q;
  if (const char* env = std::getenv("KAHLER_CV_TOL")) {
    const auto v = parse_numbers(env, ',', "KAHLER_CV_TOL");
    if (v.size() != 1) {
      throw UsageError("KAHLER_CV_TOL must be a single number");
    }
    q.rel_tol = v[0];
  }
  if (cfg.rel_tol) {
    q.rel_tol = *cfg.rel_tol;
  }
  if (cfg.abs_tol) {
    q.abs_tol = *cfg.abs_tol;
  }
  if (cfg.max_evals) {
    q.max_evals = *cfg.max_evals;
  }
  if (!(q.rel_tol > 0.0) || !(q.abs_tol > 0.0) || q.max_evals == 0) {
    throw UsageError("tolerances and --max-evals must be positive");
  }
  return q;
}

std::vector<PoleSpec> read_poles(const RunConfig& cfg) {
  std::vector<PoleSpec> poles;
  for (const std::string& text : cfg.poles) {
    const auto v = parse_numbers(text, ',', "--pole");
    if (v.size() == 2) {
      poles.push_back({{v[0], v[1]}, std::nullopt});
    } else if (v.size() == 3 && v[2] >= 1 && v[2] == static_cast<int>(v[2])) {
      poles.push_back({{v[0], v[1]}, static_cast<int>(v[2])});
    } else {
      throw UsageError("--pole expects x,y[,order] with integer order >= 1");
    }
  }
  return poles;
}

void emit_value(const RunConfig& cfg, const char* label, const Edif& value, json extra,
                const std::vector<std::pair<std::string, std::string>>& text_extra) {
  if (cfg.json_out) {
    extra["value"] = value;
    std::cout << extra.dump() << '\n';
    return;
  }
  std::cout << label << ": " << format_edif(value) << '\n';
  for (const auto& [k, v] : text_extra) {
    std::cout << k << ": " << v << '\n';
  }
}

void write_samples(const std::string& path, std::vector<std::tuple<double, Point, Edif>> rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });
  std::ofstream out(path);
  if (!out) {
    throw UsageError("cannot write " + path);
  }
  out << "t,x,y,u,v\n";
  for (const auto& [t, p, w] : rows) {
    out << format_real(t) << ',' << format_real(p.x) << ',' << format_real(p.y) << ','
        << format_real(w.u) << ',' << format_real(w.v) << '\n';
  }
}

int cmd_valuate(const RunConfig& cfg) {
  const Expr f = require_expr(cfg);
  const Curve c = require_curve(cfg);
  std::vector<std::tuple<double, Point, Edif>> rows;
  SampleSink sink;
  if (!cfg.dump_samples.empty()) {
    sink = [&rows](double t, const Point& p, const Edif& w) { rows.emplace_back(t, p, w); };
  }
  const ValuationResult r = valuation(f, c, quadrature_config(cfg), {}, sink);
  if (!cfg.dump_samples.empty()) {
    write_samples(cfg.dump_samples, std::move(rows));
  }
  emit_value(cfg, "value", r.value,
             {{"abs_error_estimate", r.abs_error_estimate}, {"integrand_evals", r.integrand_evals}},
             {{"abs_error_estimate", format_real(r.abs_error_estimate)},
              {"integrand_evals", std::to_string(r.integrand_evals)}});
  return kOk;
}

void emit_cauchy(const RunConfig& cfg, const CauchyResult& r) {
  emit_value(cfg, "value", r.value, {{"error_estimate", r.error_estimate}, {"winding", r.winding}},
             {{"error_estimate", format_real(r.error_estimate)},
              {"winding", std::to_string(r.winding)}});
}

int cmd_cauchy(const RunConfig& cfg) {
  const Expr f = require_expr(cfg);
  emit_cauchy(cfg, cauchy_value(f, parse_point(cfg.at, "--at"), require_curve(cfg),
                                quadrature_config(cfg)));
  return kOk;
}

int cmd_derivative(const RunConfig& cfg) {
  const Expr f = require_expr(cfg);
  if (cfg.order < 0) {
    throw UsageError("--order must be >= 0");
  }
  emit_cauchy(cfg, cauchy_derivative(f, parse_point(cfg.at, "--at"), cfg.order, require_curve(cfg),
                                     quadrature_config(cfg)));
  return kOk;
}

int cmd_residue(const RunConfig& cfg) {
  const Expr f = require_expr(cfg);
  const auto poles = read_poles(cfg);
  if (poles.empty()) {
    throw UsageError("at least one --pole is required");
  }
  if (!cfg.radii.empty() && cfg.radii.size() != poles.size()) {
    throw UsageError("give one --radius per --pole, or none");
  }
  const QuadratureConfig q = quadrature_config(cfg);
  std::vector<ResidueReport> reports;
  if (cfg.radii.empty()) {
    reports = residues(f, poles, q);
  } else {
    for (std::size_t i = 0; i < poles.size(); ++i) {
      reports.push_back(residue(f, poles[i], cfg.radii[i], q));
    }
  }
  if (cfg.json_out) {
    std::cout << json{{"residues", reports}}.dump() << '\n';
    return kOk;
  }
  for (const ResidueReport& r : reports) {
    std::cout << "pole (" << format_real(r.pole.location.x) << ", " << format_real(r.pole.location.y)
              << "): " << format_edif(r.residue) << "  [radius " << format_real(r.circle_radius)
              << ", error " << format_real(r.error_estimate) << "]\n";
  }
  return kOk;
}

int cmd_decompose(const RunConfig& cfg) {
  const Expr f = require_expr(cfg);
  const Curve outer = require_curve(cfg);
  const auto poles = read_poles(cfg);
  std::vector<double> radii = cfg.radii;
  if (radii.empty()) {
    for (std::size_t i = 0; i < poles.size(); ++i) {
      double r = std::min(1.0, 0.5 * distance_to_curve(outer, poles[i].location));
      for (std::size_t k = 0; k < poles.size(); ++k) {
        if (k != i) {
          r = std::min(r, 0.4 * distance(poles[i].location, poles[k].location));
        }
      }
      radii.push_back(r);
    }
  }
  if (radii.size() != poles.size()) {
    throw UsageError("give one --radius per --pole, or none");
  }
  const Decomposition d = decompose_valuation(f, outer, poles, radii, quadrature_config(cfg));
  if (cfg.json_out) {
    std::cout << json(d).dump() << '\n';
  } else {
    std::cout << "lhs: " << format_edif(d.lhs) << '\n'
              << "rhs: " << format_edif(d.rhs) << '\n'
              << "error_budget: " << format_real(d.error_budget) << '\n'
              << "agrees: " << (d.agrees ? "true" : "false") << '\n';
  }
  return d.agrees ? kOk : kVerdictFailed;
}

int cmd_potential(const RunConfig& cfg) {
  const Expr f = require_expr(cfg);
  const Point target = parse_point(cfg.at, "--at");
  const Point base = cfg.from.empty() ? Point{0, 0} : parse_point(cfg.from, "--from");
  const QuadratureConfig q = quadrature_config(cfg);
  const auto path = read_curve(cfg);
  const Edif value = path ? valuation_potential(f, base, target, *path, q)
                          : valuation_potential(f, base, target, q);
  emit_value(cfg, "value", value, json::object(), {});
  return kOk;
}

int cmd_check(const RunConfig& cfg) {
  const auto g = parse_numbers(cfg.grid, ',', "--grid");
  if (g.size() != 5 || g[4] < 1 || g[4] != static_cast<int>(g[4])) {
    throw UsageError("--grid expects x0,x1,y0,y1,n");
  }
  const auto samples = grid_samples(g[0], g[1], g[2], g[3], static_cast<int>(g[4]));
  const double tol = cfg.tol > 0.0 ? cfg.tol : kDefaultHarmonicTol;
  Expr f = Expr::z();
  if (!cfg.raw_u.empty() || !cfg.raw_v.empty()) {
    if (!cfg.expr.empty() || cfg.raw_u.empty() || cfg.raw_v.empty()) {
      throw UsageError("give either -e or both --raw-u and --raw-v");
    }
    f = Expr::raw_field(parse_component(cfg.raw_u), parse_component(cfg.raw_v));
  } else {
    f = require_expr(cfg);
  }
  const HarmonicReport r = is_strict_harmonic(f, samples, tol);
  if (cfg.json_out) {
    std::cout << json{{"shedif", r.strict_harmonic}, {"worst", r.worst}, {"samples", samples.size()}}
                     .dump()
              << '\n';
  } else {
    std::cout << "shedif: " << (r.strict_harmonic ? "true" : "false") << '\n'
              << "worst residual: " << format_real(r.worst.magnitude()) << " at ("
              << format_real(r.worst.at.x) << ", " << format_real(r.worst.at.y) << ")\n";
  }
  return r.strict_harmonic ? kOk : kVerdictFailed;
}

int cmd_goursat(const RunConfig& cfg) {
  const Expr f = require_expr(cfg);
  const double tol = cfg.tol > 0.0 ? cfg.tol : 1e-8;
  const double residual = goursat_residual(f, require_curve(cfg), quadrature_config(cfg));
  const bool ok = residual <= tol;
  if (cfg.json_out) {
    std::cout << json{{"residual", residual}, {"tol", tol}, {"holds", ok}}.dump() << '\n';
  } else {
    std::cout << "residual: " << format_real(residual) << '\n'
              << "holds: " << (ok ? "true" : "false") << '\n';
  }
  return ok ? kOk : kVerdictFailed;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("-e,--expr", cfg.expr, "field expression in z");
  sub->add_option("--circle", cfg.circle, "cx,cy,r[,ccw|cw]");
  sub->add_option("--polyline", cfg.polyline, "x,y;x,y;...");
  sub->add_flag("--open", cfg.open, "treat --polyline as an open path");
  sub->add_option("--curve-json", cfg.curve_json, "curve JSON text or file");
  sub->add_option("--rel-tol", cfg.rel_tol, "relative quadrature tolerance");
  sub->add_option("--abs-tol", cfg.abs_tol, "absolute quadrature tolerance");
  sub->add_option("--max-evals", cfg.max_evals, "integrand evaluation budget");
  sub->add_flag("--json", cfg.json_out, "JSON output");
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Valuations and Cauchy formulas for edif fields"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* valuate = app.add_subcommand("valuate", "valuation of a field on a curve");
  add_common(valuate, cfg);
  valuate->add_option("--dump-samples", cfg.dump_samples, "write integrand samples as CSV");

  auto* cauchy = app.add_subcommand("cauchy", "Cauchy integral formula at a point");
  add_common(cauchy, cfg);
  cauchy->add_option("--at", cfg.at, "x,y")->required();

  auto* derivative = app.add_subcommand("derivative", "n-th derivative by the Cauchy formula");
  add_common(derivative, cfg);
  derivative->add_option("--at", cfg.at, "x,y")->required();
  derivative->add_option("--order", cfg.order, "derivative order n");

  auto* res = app.add_subcommand("residue", "residues at declared poles");
  add_common(res, cfg);
  res->add_option("--pole", cfg.poles, "x,y[,order]")->required();
  res->add_option("--radius", cfg.radii, "circle radius, one per pole");

  auto* decompose = app.add_subcommand("decompose", "outer valuation against pole circles");
  add_common(decompose, cfg);
  decompose->add_option("--pole", cfg.poles, "x,y[,order]");
  decompose->add_option("--radius", cfg.radii, "circle radius, one per pole");

  auto* potential = app.add_subcommand("potential", "valuation from --from to --at");
  add_common(potential, cfg);
  potential->add_option("--at", cfg.at, "x,y")->required();
  potential->add_option("--from", cfg.from, "x,y (default 0,0)");

  auto* check = app.add_subcommand("check", "Cauchy-Riemann check on a grid");
  add_common(check, cfg);
  check->add_option("--grid", cfg.grid, "x0,x1,y0,y1,n");
  check->add_option("--raw-u", cfg.raw_u, "scalar part u(x, y)");
  check->add_option("--raw-v", cfg.raw_v, "dxdy part v(x, y)");
  check->add_option("--tol", cfg.tol, "residual tolerance");

  auto* goursat = app.add_subcommand("goursat", "Goursat residual on a closed curve");
  add_common(goursat, cfg);
  goursat->add_option("--tol", cfg.tol, "residual tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (valuate->parsed()) return cmd_valuate(cfg);
  if (cauchy->parsed()) return cmd_cauchy(cfg);
  if (derivative->parsed()) return cmd_derivative(cfg);
  if (res->parsed()) return cmd_residue(cfg);
  if (decompose->parsed()) return cmd_decompose(cfg);
  if (potential->parsed()) return cmd_potential(cfg);
  if (check->parsed()) return cmd_check(cfg);
  return cmd_goursat(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const kahler::ParseError& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const kahler::GeometryError& e) {
    std::cerr << "geometry error: " << e.what() << '\n';
    return kGeometry;
  } catch (const kahler::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kSingular;
  } catch (const std::domain_error& e) {
    std::cerr << "singular: " << e.what() << '\n';
    return kSingular;
  } catch (const std::range_error& e) {
    std::cerr << "non-finite: " << e.what() << '\n';
    return kSingular;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSingular;
  }
}
