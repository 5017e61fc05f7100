#include "cmatch/bifiltration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "cmatch/errors.hpp"

namespace cmatch {

namespace {

struct TupleHash {
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

std::shared_ptr<const Complex> build_complex(std::size_t num_vertices,
                                             std::vector<std::vector<int>> simplices) {
  if (simplices.empty()) throw StructuralError("complex is empty");
  auto cx = std::make_shared<Complex>();
  cx->num_vertices = static_cast<int>(num_vertices);
  std::unordered_map<std::vector<int>, int, TupleHash> index;
  index.reserve(simplices.size() * 2);
  for (std::size_t i = 0; i < simplices.size(); ++i) {
    auto& s = simplices[i];
    if (s.empty()) throw StructuralError("empty simplex at index " + std::to_string(i));
    if (s.size() > 4) throw StructuralError("simplex of dimension > 3 at index " + std::to_string(i));
    for (int v : s) {
      if (v < 0 || static_cast<std::size_t>(v) >= num_vertices) {
        throw StructuralError("vertex index " + std::to_string(v) + " out of range");
      }
    }
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
      throw StructuralError("repeated vertex in simplex " + std::to_string(i));
    }
    if (!index.emplace(s, static_cast<int>(i)).second) {
      throw StructuralError("duplicate simplex at index " + std::to_string(i));
    }
  }
  cx->vertex_simplex.assign(num_vertices, -1);
  cx->dims.resize(simplices.size());
  cx->facets.resize(simplices.size());
  std::vector<int> face;
  for (std::size_t i = 0; i < simplices.size(); ++i) {
    const auto& s = simplices[i];
    int d = static_cast<int>(s.size()) - 1;
    cx->dims[i] = d;
    cx->max_dim = std::max(cx->max_dim, d);
    if (d == 0) {
      cx->vertex_simplex[s[0]] = static_cast<int>(i);
      continue;
    }
    auto& fs = cx->facets[i];
    fs.reserve(s.size());
    for (std::size_t skip = 0; skip < s.size(); ++skip) {
      face.clear();
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (k != skip) face.push_back(s[k]);
      }
      auto it = index.find(face);
      if (it == index.end()) {
        throw StructuralError("missing face of simplex " + std::to_string(i));
      }
      fs.push_back(it->second);
    }
  }
  for (std::size_t v = 0; v < num_vertices; ++v) {
    if (cx->vertex_simplex[v] < 0) {
      throw StructuralError("vertex " + std::to_string(v) + " is not listed as a 0-simplex");
    }
  }
  cx->simplices = std::move(simplices);
  return cx;
}

}  // namespace

bool ParamPoint::valid() const { return std::isfinite(a) && std::isfinite(b) && a > 0.0 && a < 1.0; }

std::vector<int> Complex::count_by_dim() const {
  std::vector<int> counts(max_dim + 1, 0);
  for (int d : dims) ++counts[d];
  return counts;
}

SimplicialBifiltration::SimplicialBifiltration(std::vector<VertexValues> vertices,
                                               std::vector<std::vector<int>> simplices,
                                               std::string name)
    : values_(std::move(vertices)), name_(std::move(name)) {
  for (const auto& v : values_) {
    if (!std::isfinite(v.f1) || !std::isfinite(v.f2)) throw InputError("non-finite vertex value");
  }
  complex_ = build_complex(values_.size(), std::move(simplices));
}

SimplicialBifiltration::SimplicialBifiltration(std::vector<VertexValues> values,
                                               std::shared_ptr<const Complex> complex,
                                               std::string name)
    : values_(std::move(values)), complex_(std::move(complex)), name_(std::move(name)) {}

SimplicialBifiltration SimplicialBifiltration::from_maximal(std::vector<VertexValues> vertices,
                                                            const std::vector<std::vector<int>>& maximal,
                                                            std::string name) {
  std::vector<std::vector<int>> all;
  for (std::size_t v = 0; v < vertices.size(); ++v) all.push_back({static_cast<int>(v)});
  for (const auto& raw : maximal) {
    std::vector<int> s = raw;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
      throw StructuralError("repeated vertex in simplex");
    }
    if (s.empty() || s.size() > 4) throw StructuralError("simplex must have 1 to 4 vertices");
    for (int v : s) {
      if (v < 0 || static_cast<std::size_t>(v) >= vertices.size()) {
        throw StructuralError("vertex index " + std::to_string(v) + " out of range");
      }
    }
    const int n = static_cast<int>(s.size());
    for (int mask = 1; mask < (1 << n); ++mask) {
      std::vector<int> face;
      for (int k = 0; k < n; ++k) {
        if (mask & (1 << k)) face.push_back(s[k]);
      }
      if (face.size() > 1) all.push_back(std::move(face));
    }
  }
  std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    return x < y;
  });
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return SimplicialBifiltration(std::move(vertices), std::move(all), std::move(name));
}

SimplicialBifiltration SimplicialBifiltration::with_values(std::vector<VertexValues> values,
                                                           std::string name) const {
  if (values.size() != values_.size()) throw InputError("vertex count mismatch");
  for (const auto& v : values) {
    if (!std::isfinite(v.f1) || !std::isfinite(v.f2)) throw InputError("non-finite vertex value");
  }
  return SimplicialBifiltration(std::move(values), complex_, name.empty() ? name_ : std::move(name));
}

bool SimplicialBifiltration::same_complex(const SimplicialBifiltration& other) const {
  if (complex_ == other.complex_) return true;
  return complex_->num_vertices == other.complex_->num_vertices &&
         complex_->simplices == other.complex_->simplices;
}

double SimplicialBifiltration::sup_norm() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max({m, std::abs(v.f1), std::abs(v.f2)});
  return m;
}

double sup_norm_distance(const SimplicialBifiltration& f, const SimplicialBifiltration& g) {
  if (!f.same_complex(g)) throw InputError("bifiltrations live on different complexes");
  double m = 0.0;
  for (std::size_t i = 0; i < f.vertices().size(); ++i) {
    m = std::max({m, std::abs(f.vertices()[i].f1 - g.vertices()[i].f1),
                  std::abs(f.vertices()[i].f2 - g.vertices()[i].f2)});
  }
  return m;
}

// Evaluated as max{f1 - b, r (f2 + b)} for a <= 1/2 and max{r (f1 - b), f2 + b}
// otherwise, with r = min(a,1-a)/max(a,1-a) <= 1. Exact at a = 1/2.
double slice_value(double f1, double f2, ParamPoint p) {
  const double a = p.a;
  const double b = p.b;
  if (a <= 0.5) {
    const double r = a / (1.0 - a);
    return std::max(f1 - b, r * (f2 + b));
  }
  const double r = (1.0 - a) / a;
  return std::max(r * (f1 - b), f2 + b);
}

namespace {

SliceFiltration finish_slice(const SimplicialBifiltration& bif, ParamPoint p,
                             const std::vector<double>& vertex_values, int max_dim) {
  const Complex& cx = bif.complex();
  SliceFiltration s;
  s.source = &bif;
  s.param = p;
  const std::size_t n = cx.simplices.size();
  s.simplex_values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = -std::numeric_limits<double>::infinity();
    for (int x : cx.simplices[i]) v = std::max(v, vertex_values[x]);
    s.simplex_values[i] = v;
  }
  s.max_dim = max_dim < 0 ? cx.max_dim : std::min(max_dim, cx.max_dim);
  s.order.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (cx.dims[i] <= s.max_dim) s.order.push_back(static_cast<int>(i));
  }
  std::sort(s.order.begin(), s.order.end(), [&](int x, int y) {
    if (s.simplex_values[x] != s.simplex_values[y]) return s.simplex_values[x] < s.simplex_values[y];
    if (cx.dims[x] != cx.dims[y]) return cx.dims[x] < cx.dims[y];
    return x < y;
  });
  s.position.assign(n, -1);
  for (std::size_t k = 0; k < s.order.size(); ++k) s.position[s.order[k]] = static_cast<int>(k);
  return s;
}

}  // namespace

SliceFiltration build_slice(const SimplicialBifiltration& bif, ParamPoint p, int max_dim) {
  if (!p.valid()) throw InputError("parameter a must lie in (0,1)");
  std::vector<double> vv(bif.vertices().size());
  for (std::size_t i = 0; i < vv.size(); ++i) {
    vv[i] = slice_value(bif.vertices()[i].f1, bif.vertices()[i].f2, p);
  }
  return finish_slice(bif, p, vv, max_dim);
}

SliceFiltration build_lower_star(const SimplicialBifiltration& bif, const std::vector<double>& vertex_values) {
  if (vertex_values.size() != bif.vertices().size()) throw InputError("vertex value count mismatch");
  return finish_slice(bif, ParamPoint{}, vertex_values, -1);
}

double sup_norm_slice_gap(const SimplicialBifiltration& f, const SimplicialBifiltration& g, ParamPoint p) {
  if (!f.same_complex(g)) throw InputError("bifiltrations live on different complexes");
  if (!p.valid()) throw InputError("parameter a must lie in (0,1)");
  double m = 0.0;
  for (std::size_t i = 0; i < f.vertices().size(); ++i) {
    const auto& x = f.vertices()[i];
    const auto& y = g.vertices()[i];
    m = std::max(m, std::abs(slice_value(x.f1, x.f2, p) - slice_value(y.f1, y.f2, p)));
  }
  return m;
}

}  // namespace cmatch
