#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cmatch/bifiltration.hpp"
#include "cmatch/coherent_distance.hpp"
#include "cmatch/pareto_grid.hpp"
#include "cmatch/parameter_space.hpp"
#include "cmatch/transport.hpp"

namespace cmatch {

/// {"vertices": [{"f1": x, "f2": y}, ...], "simplices": [[i0, ..., ik], ...]}.
/// Missing faces are added. Throws InputError on malformed input.
SimplicialBifiltration parse_complex_json(const std::string& text, const std::string& name = "");
SimplicialBifiltration load_complex_json(const std::string& path);
std::string complex_to_json(const SimplicialBifiltration& bif);

/// {"rect": [a0, a1, b0, b1], "disks": [[a, b, r], ...], "c": real}. The
/// region is validated.
ParameterRegion parse_region_json(const std::string& text);
ParameterRegion load_region_json(const std::string& path);
std::string region_to_json(const ParameterRegion& region);

/// Shortest decimal form that reads back to the same double; `inf` for +inf.
std::string format_real(double v);

void write_diagram_csv(std::ostream& os, const std::vector<PersistenceDiagram>& diagrams);
void write_heatmap_csv(std::ostream& os, const std::vector<HeatmapRow>& rows);
void write_singular_csv(std::ostream& os, const std::vector<SingularPairReport>& reports);
/// Rows `s,u,v`; v is `inf` for improper points and the row is `s,diag,diag` for the diagonal.
void write_track_csv(std::ostream& os, const PointTrack& track);

/// Contours with sampled polylines (`samples` points per bounded piece,
/// half-lines cut at `far`), arcs, double points and annihilation points.
std::string grid_to_json(const ExtendedParetoGrid& grid, int samples = 64, double far = 10.0);
/// Rows `t,x,y,value,contours,arcs,tangent`, contour and arc lists joined by `;`.
void write_intersections_csv(std::ostream& os, const ExtendedParetoGrid& grid,
                             const std::vector<Intersection>& hits);

std::string group_report_json(const PairPermutationGroup& group, const ParameterRegion& region, int degree);
std::string cohdist_report_json(const CoherentDistanceReport& rep);

}  // namespace cmatch
