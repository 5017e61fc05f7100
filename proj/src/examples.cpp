#include "cmatch/examples.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "cmatch/errors.hpp"

namespace cmatch {

ExampleId parse_example_id(const std::string& s) {
  if (s == "monodromy_basic") return ExampleId::MonodromyBasic;
  if (s == "torus") return ExampleId::Torus;
  if (s == "two_spheres") return ExampleId::TwoSpheres;
  throw InputError("unknown example id: " + s);
}

std::string example_name(ExampleId id) {
  switch (id) {
    case ExampleId::MonodromyBasic: return "monodromy_basic";
    case ExampleId::Torus: return "torus";
    case ExampleId::TwoSpheres: return "two_spheres";
  }
  return "";
}

double quantize(double v) { return std::ldexp(std::nearbyint(std::ldexp(v, 32)), -32); }

double monodromy_f2(double x, double y) {
  // f2 = -k x + c on the rows y = 0..3, blended linearly in between.
  static constexpr double k[4] = {1.0, 1.0, 2.0, 2.0};
  static constexpr double c[4] = {0.0, 1.0, 0.0, 1.25};
  if (y <= 0.0) return -x - y;
  if (y >= 3.0) return -2.0 * x + 1.25 - (y - 3.0);
  const int i = std::min(2, static_cast<int>(std::floor(y)));
  const double s = y - i;
  return (1.0 - s) * (-k[i] * x + c[i]) + s * (-k[i + 1] * x + c[i + 1]);
}

namespace {

// Triangulated grid of (nu+1) x (nv+1) vertices; each cell split along the
// diagonal from (i,j) to (i+1,j+1). Periodic directions wrap around.
void grid_triangles(int nu, int nv, bool wrap_u, bool wrap_v, std::vector<std::vector<int>>& tris,
                    int offset = 0) {
  const int cols = wrap_u ? nu : nu + 1;
  const int rows = wrap_v ? nv : nv + 1;
  (void)rows;
  auto id = [&](int i, int j) {
    if (wrap_u) i %= nu;
    if (wrap_v) j %= nv;
    return offset + j * cols + i;
  };
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nu; ++i) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
}

SimplicialBifiltration monodromy(const ExampleSpec& spec) {
  if (!(spec.x0 < spec.x1) || !(spec.y0 < spec.y1)) throw InputError("invalid monodromy_basic bounds");
  const int yres = spec.y_resolution > 0 ? spec.y_resolution : std::max(4, spec.resolution / 8);
  const int nx = static_cast<int>(std::lround((spec.x1 - spec.x0) * spec.resolution));
  const int ny = static_cast<int>(std::lround((spec.y1 - spec.y0) * yres));
  if (nx < 1 || ny < 1) throw InputError("monodromy_basic bounds too small for the resolution");
  std::vector<VertexValues> vals;
  vals.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    const double y = spec.y0 + (spec.y1 - spec.y0) * j / ny;
    for (int i = 0; i <= nx; ++i) {
      const double x = spec.x0 + (spec.x1 - spec.x0) * i / nx;
      vals.push_back({quantize(x), quantize(monodromy_f2(x, y))});
    }
  }
  std::vector<std::vector<int>> tris;
  grid_triangles(nx, ny, false, false, tris);
  return SimplicialBifiltration::from_maximal(std::move(vals), tris, "monodromy_basic");
}

SimplicialBifiltration torus(const ExampleSpec& spec) {
  const int n = spec.resolution;
  std::vector<VertexValues> vals;
  vals.reserve(static_cast<std::size_t>(n) * n);
  const double two_pi = 2.0 * std::numbers::pi;
  for (int j = 0; j < n; ++j) {
    const double phi = two_pi * j / n;
    const double rho = spec.major + spec.minor * std::cos(phi);
    for (int i = 0; i < n; ++i) {
      const double theta = two_pi * i / n;
      vals.push_back({quantize(rho * std::cos(theta)), quantize(rho * std::sin(theta))});
    }
  }
  std::vector<std::vector<int>> tris;
  grid_triangles(n, n, true, true, tris);
  return SimplicialBifiltration::from_maximal(std::move(vals), tris, "torus");
}

// Latitude-longitude sphere with poles on the y axis, so the equator is the
// silhouette seen along y.
void add_sphere(const Sphere& s, int n, std::vector<VertexValues>& vals, std::vector<std::vector<int>>& tris) {
  const int bands = std::max(2, n / 2);
  const int base = static_cast<int>(vals.size());
  const double pi = std::numbers::pi;
  vals.push_back({quantize(s.cx), quantize(s.cz)});  // south pole (y = cy - r)
  for (int j = 1; j < bands; ++j) {
    const double lat = -pi / 2 + pi * j / bands;
    for (int i = 0; i < n; ++i) {
      const double lon = 2.0 * pi * i / n;
      vals.push_back({quantize(s.cx + s.r * std::cos(lat) * std::cos(lon)),
                      quantize(s.cz + s.r * std::cos(lat) * std::sin(lon))});
    }
  }
  vals.push_back({quantize(s.cx), quantize(s.cz)});  // north pole
  const int south = base;
  const int north = static_cast<int>(vals.size()) - 1;
  auto ring = [&](int j, int i) { return base + 1 + (j - 1) * n + (i % n); };
  for (int i = 0; i < n; ++i) tris.push_back({south, ring(1, i), ring(1, i + 1)});
  for (int j = 1; j + 1 < bands; ++j) {
    for (int i = 0; i < n; ++i) {
      tris.push_back({ring(j, i), ring(j, i + 1), ring(j + 1, i + 1)});
      tris.push_back({ring(j, i), ring(j + 1, i + 1), ring(j + 1, i)});
    }
  }
  for (int i = 0; i < n; ++i) tris.push_back({north, ring(bands - 1, i), ring(bands - 1, i + 1)});
}

SimplicialBifiltration two_spheres(const ExampleSpec& spec) {
  const auto& s1 = spec.spheres[0];
  const auto& s2 = spec.spheres[1];
  const double dist = std::hypot(s1.cx - s2.cx, s1.cy - s2.cy, s1.cz - s2.cz);
  if (!(s1.r > 0 && s2.r > 0) || dist <= s1.r + s2.r) throw InputError("two_spheres: spheres must be disjoint");
  std::vector<VertexValues> vals;
  std::vector<std::vector<int>> tris;
  add_sphere(s1, spec.resolution, vals, tris);
  add_sphere(s2, spec.resolution, vals, tris);
  return SimplicialBifiltration::from_maximal(std::move(vals), tris, "two_spheres");
}

}  // namespace

SimplicialBifiltration generate(const ExampleSpec& spec) {
  if (spec.resolution < 8) throw InputError("resolution must be at least 8");
  switch (spec.id) {
    case ExampleId::MonodromyBasic: return monodromy(spec);
    case ExampleId::Torus: return torus(spec);
    case ExampleId::TwoSpheres: return two_spheres(spec);
  }
  throw InputError("unknown example");
}

SimplicialBifiltration shifted(const SimplicialBifiltration& f, double s, const std::string& name) {
  std::vector<VertexValues> vals = f.vertices();
  for (auto& v : vals) {
    v.f1 += s;
    v.f2 -= s;
  }
  return f.with_values(std::move(vals), name);
}

}  // namespace cmatch
