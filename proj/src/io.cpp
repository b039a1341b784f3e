#include "lstft/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace lstft::io {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(where + "." + key + ": missing");
  return *it;
}

int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw InputError(where + ": expected an integer");
  return j.get<int>();
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  return j.get<double>();
}

const json& as_array(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  return j;
}

MultiIndex index_from(const json& j, int n, const std::string& where) {
  as_array(j, where);
  if (int(j.size()) != n) throw InputError(where + ": expected " + std::to_string(n) + " coordinates");
  MultiIndex m(n);
  for (int a = 0; a < n; ++a) m[a] = as_int(j[a], where + "[" + std::to_string(a) + "]");
  return m;
}

Eigen::VectorXd vector_from(const json& j, int n, const std::string& where) {
  as_array(j, where);
  if (int(j.size()) != n) throw InputError(where + ": expected " + std::to_string(n) + " coordinates");
  Eigen::VectorXd v(n);
  for (int a = 0; a < n; ++a) v[a] = as_number(j[a], where + "[" + std::to_string(a) + "]");
  return v;
}

json to_json(const MultiIndex& m) {
  json a = json::array();
  for (int i = 0; i < m.size(); ++i) a.push_back(m[i]);
  return a;
}

json to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

json to_json(const LatticeSignal<double>& f) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < f.values().size(); ++i) {
    const std::complex<double> v = f.values()[i];
    if (v == 0.0) continue;
    entries.push_back({{"index", to_json(f.box().point(i))}, {"re", v.real()}, {"im", v.imag()}});
  }
  return {{"dimension", f.dimension()}, {"half_width", f.box().half_width()}, {"entries", entries}};
}

LatticeSignal<double> signal_from_json(const json& j, const std::string& where) {
  const int n = as_int(field(j, "dimension", where), where + ".dimension");
  const int N = as_int(field(j, "half_width", where), where + ".half_width");
  if (n < 1) throw InputError(where + ".dimension: must be >= 1");
  if (N < 0) throw InputError(where + ".half_width: must be >= 0");
  const json& entries = as_array(field(j, "entries", where), where + ".entries");
  SupportBox box(n, N);
  LatticeSignal<double> f(box);
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const std::string at = where + ".entries[" + std::to_string(e) + "]";
    const MultiIndex k = index_from(field(entries[e], "index", at), n, at + ".index");
    if (!box.contains(k)) throw InputError(at + ".index: outside half_width");
    const double re = as_number(field(entries[e], "re", at), at + ".re");
    const double im = entries[e].contains("im") ? as_number(entries[e]["im"], at + ".im") : 0.0;
    f.values()[box.index(k)] = {re, im};
  }
  return f;
}

json to_json(const TileSet& sigma) {
  json tiles = json::array();
  for (const Tile& t : sigma.tiles()) tiles.push_back({{"m", to_json(t.m)}, {"lo", to_json(t.lo)}, {"hi", to_json(t.hi)}});
  return {{"dimension", sigma.dimension()}, {"tiles", tiles}};
}

TileSet tileset_from_json(const json& j, const std::string& where) {
  const int n = as_int(field(j, "dimension", where), where + ".dimension");
  if (n < 1) throw InputError(where + ".dimension: must be >= 1");
  const json& tiles = as_array(field(j, "tiles", where), where + ".tiles");
  std::vector<Tile> out;
  for (std::size_t t = 0; t < tiles.size(); ++t) {
    const std::string at = where + ".tiles[" + std::to_string(t) + "]";
    Tile tile{index_from(field(tiles[t], "m", at), n, at + ".m"), vector_from(field(tiles[t], "lo", at), n, at + ".lo"),
              vector_from(field(tiles[t], "hi", at), n, at + ".hi")};
    for (int a = 0; a < n; ++a)
      if (!(tile.hi[a] >= tile.lo[a] && tile.hi[a] - tile.lo[a] <= 1))
        throw InputError(at + ": need 0 <= hi - lo <= 1 on every axis");
    out.push_back(std::move(tile));
  }
  return TileSet(n, out);
}

json to_json(const PhasePoint<double>& z) { return {{"m", to_json(z.m)}, {"w", to_json(z.w)}}; }

PhasePoint<double> point_from_json(const json& j, const std::string& where) {
  const json& m = as_array(field(j, "m", where), where + ".m");
  const int n = int(m.size());
  return {index_from(m, n, where + ".m"), vector_from(field(j, "w", where), n, where + ".w")};
}

json to_json(const InequalityReport& r, bool full_witness) {
  auto num = [](double x) -> json {
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  };
  json extras = json::object();
  for (const auto& [k, v] : r.extras) extras[k] = num(v);
  json params = json::object();
  for (const auto& [k, v] : r.witness.params) params[k] = num(v);
  json out = {{"name", r.name},         {"lhs", num(r.lhs)},   {"rhs", num(r.rhs)},
              {"slack", num(r.slack)},  {"tolerance", r.tolerance}, {"status", to_string(r.status)},
              {"seed", r.seed},         {"extras", extras},    {"notes", r.notes}};
  json w = {{"params", params}};
  if (full_witness || r.failed()) {
    json signals = json::object();
    for (const auto& [k, s] : r.witness.signals) signals[k] = to_json(s);
    w["signals"] = signals;
    if (!r.witness.family.empty()) {
      json fam = json::array();
      for (const auto& s : r.witness.family) fam.push_back(to_json(s));
      w["family"] = fam;
    }
    if (r.witness.sigma) w["sigma"] = to_json(*r.witness.sigma);
    if (!r.witness.lattice_set.empty()) {
      json e = json::array();
      for (const auto& k : r.witness.lattice_set) e.push_back(to_json(k));
      w["lattice_set"] = e;
    }
    if (!r.witness.points.empty()) {
      json p = json::array();
      for (const auto& z : r.witness.points) p.push_back(to_json(z));
      w["points"] = p;
    }
  }
  out["witness"] = w;
  return out;
}

namespace {

double number_or_special(const json& j, const std::string& where) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  return as_number(j, where);
}

}  // namespace

InequalityReport report_from_json(const json& j) {
  InequalityReport r;
  const json& name = field(j, "name", "report");
  if (!name.is_string()) throw InputError("report.name: expected a string");
  r.name = name.get<std::string>();
  r.lhs = number_or_special(field(j, "lhs", "report"), "report.lhs");
  r.rhs = number_or_special(field(j, "rhs", "report"), "report.rhs");
  r.slack = number_or_special(field(j, "slack", "report"), "report.slack");
  r.tolerance = as_number(field(j, "tolerance", "report"), "report.tolerance");
  const std::string status = field(j, "status", "report").get<std::string>();
  r.status = status == "pass" ? Status::Pass : status == "fail" ? Status::Fail : Status::NotApplicable;
  r.seed = field(j, "seed", "report").get<std::uint64_t>();
  if (j.contains("extras"))
    for (const auto& [k, v] : j["extras"].items()) r.extras[k] = number_or_special(v, "report.extras." + k);
  if (j.contains("notes"))
    for (const auto& s : j["notes"]) r.notes.push_back(s.get<std::string>());
  const json& w = field(j, "witness", "report");
  if (w.contains("params"))
    for (const auto& [k, v] : w["params"].items()) r.witness.params[k] = number_or_special(v, "witness.params." + k);
  if (w.contains("signals"))
    for (const auto& [k, v] : w["signals"].items()) r.witness.signals.emplace(k, signal_from_json(v, "witness.signals." + k));
  if (w.contains("family"))
    for (std::size_t i = 0; i < w["family"].size(); ++i)
      r.witness.family.push_back(signal_from_json(w["family"][i], "witness.family[" + std::to_string(i) + "]"));
  if (w.contains("sigma")) r.witness.sigma = tileset_from_json(w["sigma"], "witness.sigma");
  if (w.contains("lattice_set"))
    for (std::size_t i = 0; i < w["lattice_set"].size(); ++i) {
      const json& k = w["lattice_set"][i];
      r.witness.lattice_set.push_back(index_from(k, int(k.size()), "witness.lattice_set[" + std::to_string(i) + "]"));
    }
  if (w.contains("points"))
    for (std::size_t i = 0; i < w["points"].size(); ++i)
      r.witness.points.push_back(point_from_json(w["points"][i], "witness.points[" + std::to_string(i) + "]"));
  return r;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": malformed JSON: " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << j.dump(2) << '\n';
}

void write_field_csv(std::ostream& os, const PhaseSpaceField<double>& F) {
  const int n = F.dimension();
  for (int a = 1; a <= n; ++a) os << 'm' << a << ',';
  for (int a = 1; a <= n; ++a) os << 'w' << a << ',';
  os << "re,im,abs\n";
  for (Eigen::Index r = 0; r < F.box().size(); ++r) {
    const MultiIndex m = F.box().point(r);
    for (Eigen::Index c = 0; c < F.grid().size(); ++c) {
      const Eigen::VectorXd w = F.grid().node(c);
      const std::complex<double> v = F.values()(r, c);
      for (int a = 0; a < n; ++a) os << m[a] << ',';
      for (int a = 0; a < n; ++a) os << format_double(w[a]) << ',';
      os << format_double(v.real()) << ',' << format_double(v.imag()) << ',' << format_double(std::abs(v)) << '\n';
    }
  }
}

namespace {

double parse_double(const std::string& s, const std::string& where) {
  double x = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw InputError(where + ": not a number: " + s);
  return x;
}

}  // namespace

PhaseSpaceField<double> read_field_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InputError("field CSV: empty");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) header.push_back(c);
  }
  if (header.size() < 5 || (header.size() - 3) % 2 != 0 || header[header.size() - 3] != "re")
    throw InputError("field CSV: header must be m1..mn,w1..wn,re,im,abs");
  const int n = int(header.size() - 3) / 2;
  struct Row {
    MultiIndex m;
    Eigen::VectorXd w;
    std::complex<double> v;
  };
  std::vector<Row> rows;
  int N = 0;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    const std::string at = "field CSV line " + std::to_string(lineno);
    if (cells.size() != header.size()) throw InputError(at + ": wrong column count");
    Row row{MultiIndex(n), Eigen::VectorXd(n), 0};
    for (int a = 0; a < n; ++a) {
      row.m[a] = int(parse_double(cells[a], at));
      row.w[a] = parse_double(cells[n + a], at);
      N = std::max(N, std::abs(row.m[a]));
    }
    row.v = {parse_double(cells[2 * n], at), parse_double(cells[2 * n + 1], at)};
    rows.push_back(std::move(row));
  }
  const SupportBox box(n, N);
  const auto per_row = double(rows.size()) / double(box.size());
  const int M = int(std::lround(std::pow(per_row, 1.0 / n)));
  if (M < 1 || int_pow(M, n) * box.size() != std::int64_t(rows.size()))
    throw InputError("field CSV: rows do not fill a box times a grid");
  const TorusGrid grid(n, M);
  PhaseSpaceField<double> F(box, grid);
  for (const Row& r : rows) {
    Eigen::VectorXi j(n);
    for (int a = 0; a < n; ++a) j[a] = int(((std::lround(r.w[a] * M) % M) + M) % M);
    F.values()(box.index(r.m), grid.linear_index(j)) = r.v;
  }
  return F;
}

void write_field_svg(std::ostream& os, const PhaseSpaceField<double>& F) {
  if (F.dimension() != 1) throw InputError("heatmaps are drawn for n = 1 only");
  const int cols = int(F.box().size()), rows = int(F.grid().size());
  const int cw = std::max(4, 480 / cols), ch = std::max(2, 320 / rows);
  const double top = std::max(F.sup_norm(), 1e-300);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cols * cw << "\" height=\"" << rows * ch << "\">\n";
  for (int r = 0; r < cols; ++r)
    for (int c = 0; c < rows; ++c) {
      // Nodes j/M sit in [-1/2, 1/2); draw w increasing upwards.
      const int y = rows - 1 - ((c + rows / 2) % rows);
      const int shade = int(std::lround(255 * (1 - std::abs(F.values()(r, c)) / top)));
      os << "<rect x=\"" << r * cw << "\" y=\"" << y * ch << "\" width=\"" << cw << "\" height=\"" << ch
         << "\" fill=\"rgb(" << shade << ',' << shade << ",255)\"/>\n";
    }
  os << "</svg>\n";
}

void write_reports_csv(std::ostream& os, const std::vector<InequalityReport>& reports) {
  os << "name,lhs,rhs,slack,tolerance,seed\n";
  for (const auto& r : reports)
    os << r.name << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ',' << format_double(r.slack) << ','
       << format_double(r.tolerance) << ',' << r.seed << '\n';
}

}  // namespace lstft::io
