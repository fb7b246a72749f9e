#include "kahler/serialize.hpp"

#include <cmath>
#include <cstdio>

namespace kahler {

using nlohmann::json;

void to_json(json& j, const Edif& w) { j = json{{"u", w.u}, {"v", w.v}}; }
void from_json(const json& j, Edif& w) {
  j.at("u").get_to(w.u);
  j.at("v").get_to(w.v);
}

void to_json(json& j, const Point& p) { j = json{{"x", p.x}, {"y", p.y}}; }
void from_json(const json& j, Point& p) {
  j.at("x").get_to(p.x);
  j.at("y").get_to(p.y);
}

void to_json(json& j, const ValuationResult& r) {
  j = json{{"value", r.value},
           {"abs_error_estimate", r.abs_error_estimate},
           {"integrand_evals", r.integrand_evals}};
}
void from_json(const json& j, ValuationResult& r) {
  j.at("value").get_to(r.value);
  j.at("abs_error_estimate").get_to(r.abs_error_estimate);
  j.at("integrand_evals").get_to(r.integrand_evals);
}

void to_json(json& j, const CauchyResult& r) {
  j = json{{"value", r.value}, {"error_estimate", r.error_estimate}, {"winding", r.winding}};
}
void from_json(const json& j, CauchyResult& r) {
  j.at("value").get_to(r.value);
  j.at("error_estimate").get_to(r.error_estimate);
  j.at("winding").get_to(r.winding);
}

void to_json(json& j, const PoleSpec& p) {
  j = json{{"location", p.location}};
  if (p.order_hint) {
    j["order_hint"] = *p.order_hint;
  } else {
    j["order_hint"] = nullptr;
  }
}
void from_json(const json& j, PoleSpec& p) {
  j.at("location").get_to(p.location);
  if (j.contains("order_hint") && !j.at("order_hint").is_null()) {
    p.order_hint = j.at("order_hint").get<int>();
  } else {
    p.order_hint.reset();
  }
}

void to_json(json& j, const ResidueReport& r) {
  j = json{{"pole", r.pole},
           {"residue", r.residue},
           {"circle_radius", r.circle_radius},
           {"error_estimate", r.error_estimate}};
}
void from_json(const json& j, ResidueReport& r) {
  j.at("pole").get_to(r.pole);
  j.at("residue").get_to(r.residue);
  j.at("circle_radius").get_to(r.circle_radius);
  j.at("error_estimate").get_to(r.error_estimate);
}

void to_json(json& j, const Decomposition& d) {
  j = json{{"lhs", d.lhs},
           {"rhs", d.rhs},
           {"error_budget", d.error_budget},
           {"agrees", d.agrees},
           {"outer", d.outer},
           {"circles", d.circles}};
}
void from_json(const json& j, Decomposition& d) {
  j.at("lhs").get_to(d.lhs);
  j.at("rhs").get_to(d.rhs);
  j.at("error_budget").get_to(d.error_budget);
  j.at("agrees").get_to(d.agrees);
  j.at("outer").get_to(d.outer);
  j.at("circles").get_to(d.circles);
}

void to_json(json& j, const CrResidual& r) {
  j = json{{"r1", r.r1}, {"r2", r.r2}, {"at", r.at}};
}
void from_json(const json& j, CrResidual& r) {
  j.at("r1").get_to(r.r1);
  j.at("r2").get_to(r.r2);
  j.at("at").get_to(r.at);
}

Curve curve_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "circle") {
      const std::string orient = j.value("orientation", std::string("ccw"));
      if (orient != "ccw" && orient != "cw") {
        throw GeometryError("orientation must be \"ccw\" or \"cw\"");
      }
      return Curve::circle({j.at("cx").get<double>(), j.at("cy").get<double>()},
                           j.at("r").get<double>(),
                           orient == "ccw" ? Orientation::Ccw : Orientation::Cw);
    }
    if (kind == "polyline") {
      std::vector<Point> pts;
      for (const json& p : j.at("points")) {
        if (!p.is_array() || p.size() != 2) {
          throw GeometryError("polyline points must be [x, y] pairs");
        }
        pts.push_back({p[0].get<double>(), p[1].get<double>()});
      }
      return Curve::polyline(std::move(pts), j.value("closed", false));
    }
    throw GeometryError("unknown curve kind \"" + kind + "\"");
  } catch (const json::exception& e) {
    throw GeometryError(std::string("malformed curve JSON: ") + e.what());
  }
}

json curve_to_json(const Curve& c) {
  if (const auto* k = std::get_if<Circle>(&c.shape())) {
    return json{{"kind", "circle"},
                {"cx", k->center.x},
                {"cy", k->center.y},
                {"r", k->radius},
                {"orientation", k->orientation == Orientation::Ccw ? "ccw" : "cw"}};
  }
  if (const auto* p = std::get_if<Polyline>(&c.shape())) {
    json pts = json::array();
    for (const Point& v : p->vertices) {
      pts.push_back({v.x, v.y});
    }
    return json{{"kind", "polyline"}, {"points", pts}, {"closed", p->closed}};
  }
  throw GeometryError("parametric curves have no JSON form");
}

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_edif(const Edif& w) {
  const bool negative = std::signbit(w.v);
  return format_real(w.u) + (negative ? " - " : " + ") + format_real(std::abs(w.v)) + "·dxdy";
}

}  // namespace kahler
