#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "weldlab/conformal.hpp"
#include "weldlab/field.hpp"
#include "weldlab/flowline.hpp"
#include "weldlab/loewner.hpp"
#include "weldlab/welding.hpp"

namespace weldlab::io {

using json = nlohmann::json;

json read_json(const std::string& path);
void write_json(const std::string& path, const json& j);
void write_text(const std::string& path, const std::string& text);

// {"kind": ..., "params": {...}, "samples_n": n}
CurveSpec parse_curve_spec(const json& j);
json curve_spec_json(const CurveSpec& spec);
JordanCurve load_curve(const std::string& path);

// {"kind": "constant" | "gaussian_bumps" | "grid", ...}
ScalarField parse_field(const json& j);
ScalarField load_field(const std::string& path);

// CSV with a header row; rows of numbers
std::vector<std::vector<double>> read_csv(const std::string& path, const std::vector<std::string>& columns);
std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

DrivingFunction read_driving(const std::string& path);  // t, lambda
std::string driving_csv(const DrivingFunction& d);
Homeomorphism read_homeo(const std::string& path, Carrier carrier);  // x, h
std::string homeo_csv(const Homeomorphism& h);
BoundaryFunction read_density(const std::string& path, Carrier carrier);  // x, log_density

// NDJSON polyline, one {"t", "x", "y"} object per line
std::string polyline_ndjson(const std::vector<double>& t, const std::vector<cd>& z);
std::string polyline_ndjson(const JordanCurve& c);
// x, y, value on an nx-by-ny grid over [lo, hi]
std::string field_grid_csv(const ScalarField& f, cd lo, cd hi, int nx, int ny);

json to_json(const IdentityReport& r);
std::string format_number(double v);

}  // namespace weldlab::io
