#pragma once

#include <string>

#include "json.hpp"
#include "kahler/algebra.hpp"
#include "kahler/cauchy.hpp"
#include "kahler/contour.hpp"
#include "kahler/field.hpp"

namespace kahler {

// JSON forms used by the command-line tool. Doubles are written in
// shortest round-trip form, so parse(emit(x)) == x.

void to_json(nlohmann::json& j, const Edif& w);
void from_json(const nlohmann::json& j, Edif& w);

void to_json(nlohmann::json& j, const Point& p);
void from_json(const nlohmann::json& j, Point& p);

void to_json(nlohmann::json& j, const ValuationResult& r);
void from_json(const nlohmann::json& j, ValuationResult& r);

void to_json(nlohmann::json& j, const CauchyResult& r);
void from_json(const nlohmann::json& j, CauchyResult& r);

void to_json(nlohmann::json& j, const PoleSpec& p);
void from_json(const nlohmann::json& j, PoleSpec& p);

void to_json(nlohmann::json& j, const ResidueReport& r);
void from_json(const nlohmann::json& j, ResidueReport& r);

void to_json(nlohmann::json& j, const Decomposition& d);
void from_json(const nlohmann::json& j, Decomposition& d);

void to_json(nlohmann::json& j, const CrResidual& r);
void from_json(const nlohmann::json& j, CrResidual& r);

/// {"kind":"circle","cx":..,"cy":..,"r":..,"orientation":"ccw"|"cw"} or
/// {"kind":"polyline","points":[[x,y],...],"closed":true|false}.
/// Throws GeometryError for malformed or invalid curves.
Curve curve_from_json(const nlohmann::json& j);
/// Parametric curves have no JSON form and throw GeometryError.
nlohmann::json curve_to_json(const Curve& c);

/// "u + v·dxdy" with round-trip precision.
std::string format_edif(const Edif& w);
std::string format_real(double x);

}  // namespace kahler
