#pragma once

// JSON and CSV encodings of signals, tile sets, fields and reports. Parse
// errors are InputErrors naming the offending field.

#include "lstft/lattice.hpp"
#include "lstft/report.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace lstft::io {

using nlohmann::json;

/// 17 significant digits, '.' decimal, independent of the global locale.
std::string format_double(double x);

json to_json(const LatticeSignal<double>& f);
LatticeSignal<double> signal_from_json(const json& j, const std::string& where = "signal");

json to_json(const TileSet& sigma);
TileSet tileset_from_json(const json& j, const std::string& where = "sigma");

json to_json(const PhasePoint<double>& z);
PhasePoint<double> point_from_json(const json& j, const std::string& where);

/// full_witness = false keeps only params for passing reports.
json to_json(const InequalityReport& r, bool full_witness = true);
InequalityReport report_from_json(const json& j);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

/// Columns m1..mn, w1..wn, re, im, abs; one row per stored sample.
void write_field_csv(std::ostream& os, const PhaseSpaceField<double>& F);
PhaseSpaceField<double> read_field_csv(std::istream& is);

/// |F| heatmap for n = 1: lattice axis horizontal, torus axis vertical.
void write_field_svg(std::ostream& os, const PhaseSpaceField<double>& F);

/// name,lhs,rhs,slack,tolerance,seed
void write_reports_csv(std::ostream& os, const std::vector<InequalityReport>& reports);

}  // namespace lstft::io
