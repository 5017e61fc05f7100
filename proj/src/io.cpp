#include "cmatch/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cmatch/errors.hpp"

namespace cmatch {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

double real_of(const json& j, const std::string& what) {
  if (!j.is_number()) throw InputError(what + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InputError(what + " must be finite");
  return v;
}

json real_json(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

json matching_json(const Matching& m) {
  json j;
  j["pairs"] = json::array();
  for (auto [l, r] : m.pairs) j["pairs"].push_back({l, r});
  j["left_to_diagonal"] = m.left_to_delta;
  j["right_to_diagonal"] = m.right_to_delta;
  return j;
}

}  // namespace

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

SimplicialBifiltration parse_complex_json(const std::string& text, const std::string& name) {
  const json j = parse(text);
  if (!j.is_object() || !j.contains("vertices") || !j.contains("simplices")) {
    throw InputError("complex JSON needs \"vertices\" and \"simplices\"");
  }
  const json& jv = j["vertices"];
  const json& js = j["simplices"];
  if (!jv.is_array() || !js.is_array()) throw InputError("\"vertices\" and \"simplices\" must be arrays");
  std::vector<VertexValues> vertices;
  for (std::size_t i = 0; i < jv.size(); ++i) {
    const json& v = jv[i];
    if (!v.is_object() || !v.contains("f1") || !v.contains("f2")) {
      throw InputError("vertex " + std::to_string(i) + " needs f1 and f2");
    }
    vertices.push_back({real_of(v["f1"], "f1"), real_of(v["f2"], "f2")});
  }
  std::vector<std::vector<int>> simplices;
  for (const json& s : js) {
    if (!s.is_array()) throw InputError("every simplex must be an array of vertex indices");
    std::vector<int> idx;
    for (const json& k : s) {
      if (!k.is_number_integer()) throw InputError("vertex indices must be integers");
      idx.push_back(k.get<int>());
    }
    simplices.push_back(std::move(idx));
  }
  return SimplicialBifiltration::from_maximal(std::move(vertices), simplices, name);
}

SimplicialBifiltration load_complex_json(const std::string& path) { return parse_complex_json(read_file(path), path); }

std::string complex_to_json(const SimplicialBifiltration& bif) {
  json j;
  j["vertices"] = json::array();
  for (const auto& v : bif.vertices()) j["vertices"].push_back({{"f1", v.f1}, {"f2", v.f2}});
  j["simplices"] = json::array();
  for (const auto& s : bif.complex().simplices) {
    if (s.size() > 1) j["simplices"].push_back(s);
  }
  return j.dump() + "\n";
}

ParameterRegion parse_region_json(const std::string& text) {
  const json j = parse(text);
  if (!j.is_object() || !j.contains("rect") || !j.contains("c")) throw InputError("region JSON needs \"rect\" and \"c\"");
  const json& r = j["rect"];
  if (!r.is_array() || r.size() != 4) throw InputError("\"rect\" must be [a0, a1, b0, b1]");
  ParameterRegion region;
  region.rect = {real_of(r[0], "a0"), real_of(r[1], "a1"), real_of(r[2], "b0"), real_of(r[3], "b1")};
  region.separation = real_of(j["c"], "c");
  if (j.contains("disks")) {
    if (!j["disks"].is_array()) throw InputError("\"disks\" must be an array");
    for (const json& d : j["disks"]) {
      if (!d.is_array() || d.size() != 3) throw InputError("every disk must be [a, b, r]");
      region.excluded.push_back({{real_of(d[0], "disk a"), real_of(d[1], "disk b")}, real_of(d[2], "disk r")});
    }
  }
  region.validate();
  return region;
}

ParameterRegion load_region_json(const std::string& path) { return parse_region_json(read_file(path)); }

std::string region_to_json(const ParameterRegion& region) {
  json j;
  j["rect"] = {region.rect.a0, region.rect.a1, region.rect.b0, region.rect.b1};
  j["disks"] = json::array();
  for (const auto& d : region.excluded) j["disks"].push_back({d.center.a, d.center.b, d.radius});
  j["c"] = region.separation;
  return j.dump() + "\n";
}

void write_diagram_csv(std::ostream& os, const std::vector<PersistenceDiagram>& diagrams) {
  os << "degree,u,v\n";
  for (const auto& d : diagrams) write_diagram_rows(os, d);
}

void write_heatmap_csv(std::ostream& os, const std::vector<HeatmapRow>& rows) {
  os << "a,b,value\n";
  for (const auto& r : rows) os << format_real(r.a) << ',' << format_real(r.b) << ',' << format_real(r.value) << '\n';
}

void write_singular_csv(std::ostream& os, const std::vector<SingularPairReport>& reports) {
  os << "a,b,degree,gap\n";
  for (const auto& r : reports) {
    os << format_real(r.location.a) << ',' << format_real(r.location.b) << ',' << r.degree << ','
       << format_real(r.min_gap_at_location) << '\n';
  }
}

void write_track_csv(std::ostream& os, const PointTrack& track) {
  os << "s,u,v\n";
  for (const auto& [s, x] : track.samples) {
    os << format_real(s) << ',';
    if (x.is_diagonal()) {
      os << "diag,diag\n";
    } else {
      os << format_real(x.u) << ',' << (x.is_improper() ? std::string("inf") : format_real(x.v)) << '\n';
    }
  }
}

std::string grid_to_json(const ExtendedParetoGrid& grid, int samples, double far) {
  if (samples < 2) throw InputError("grid dump needs at least 2 samples per piece");
  json j;
  j["name"] = grid.name;
  j["contours"] = json::array();
  for (const auto& c : grid.contours) {
    json jc;
    jc["kind"] = c.kind == ContourKind::Arc ? "arc" : (c.kind == ContourKind::Vertical ? "vertical" : "horizontal");
    jc["provenance"] = c.provenance;
    const double t1 = c.kind == ContourKind::Arc ? c.t1 : far;
    jc["polyline"] = json::array();
    for (int k = 0; k < samples; ++k) {
      const double t = c.t0 + (t1 - c.t0) * k / (samples - 1);
      const auto [x, y] = c.point_at(t);
      jc["polyline"].push_back({x, y});
    }
    j["contours"].push_back(jc);
  }
  j["arcs"] = json::array();
  for (const auto& a : grid.arcs) {
    json ja;
    ja["name"] = a.name;
    ja["degree"] = a.degree;
    ja["sign"] = a.sign;
    ja["pieces"] = json::array();
    for (const auto& p : a.pieces) ja["pieces"].push_back({{"contour", p.contour}, {"t0", p.t0}, {"t1", real_json(p.t1)}});
    j["arcs"].push_back(ja);
  }
  j["double_points"] = json::array();
  for (const auto& p : grid.double_points) j["double_points"].push_back({{"name", p.name}, {"x", p.x}, {"y", p.y}});
  j["annihilation_points"] = json::array();
  for (const auto& p : annihilation_catalog(grid)) {
    j["annihilation_points"].push_back({{"arcs", p.name}, {"x", p.x}, {"y", p.y}});
  }
  return j.dump(2) + "\n";
}

void write_intersections_csv(std::ostream& os, const ExtendedParetoGrid& grid, const std::vector<Intersection>& hits) {
  os << "t,x,y,value,contours,arcs,tangent\n";
  for (const auto& h : hits) {
    os << format_real(h.t) << ',' << format_real(h.x) << ',' << format_real(h.y) << ',' << format_real(h.value) << ',';
    for (std::size_t k = 0; k < h.contours.size(); ++k) os << (k ? ";" : "") << h.contours[k];
    os << ',';
    for (std::size_t k = 0; k < h.arcs.size(); ++k) os << (k ? ";" : "") << grid.arcs[h.arcs[k]].name;
    os << ',' << (h.tangent ? 1 : 0) << '\n';
  }
}

std::string group_report_json(const PairPermutationGroup& group, const ParameterRegion& region, int degree) {
  json j;
  j["degree"] = degree;
  j["basepoint"] = {{"a", group.basepoint.a}, {"b", group.basepoint.b}};
  j["region"] = json::parse(region_to_json(region));
  j["order"] = group.order();
  j["generators"] = json::array();
  for (const auto& [pf, pg] : group.generators) j["generators"].push_back({{"f", pf}, {"g", pg}});
  j["elements"] = json::array();
  for (const auto& [pf, pg] : group.elements) j["elements"].push_back({{"f", pf}, {"g", pg}});
  j["tolerance"] = region.separation;
  return j.dump(2) + "\n";
}

std::string cohdist_report_json(const CoherentDistanceReport& rep) {
  json j;
  j["value"] = real_json(rep.value);
  j["witness"] = {{"a", rep.best.witness.a}, {"b", rep.best.witness.b}, {"group_index", rep.best.group_index}};
  j["matching"] = matching_json(rep.best.sigma);
  j["basepoint_cost"] = real_json(rep.best.basepoint_cost);
  j["tolerance"] = real_json(rep.tolerance);
  j["bound_tolerance"] = real_json(rep.bound_tolerance);
  j["group_order"] = rep.group_order;
  j["matchings"] = rep.matchings;
  j["nodes"] = rep.nodes;
  j["dmatch_region"] = real_json(rep.dmatch_region);
  return j.dump(2) + "\n";
}

}  // namespace cmatch
