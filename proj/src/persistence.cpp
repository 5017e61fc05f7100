#include "cmatch/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>

#include "cmatch/errors.hpp"

namespace cmatch {

DiagramPoint DiagramPoint::proper(double u, double v) { return {PointKind::Proper, u, v}; }
DiagramPoint DiagramPoint::improper(double u) { return {PointKind::Improper, u, kInf}; }
DiagramPoint DiagramPoint::diagonal() { return {PointKind::Diagonal, 0.0, 0.0}; }

int PersistenceDiagram::improper_count() const {
  return static_cast<int>(std::count_if(points.begin(), points.end(),
                                        [](const DiagramPoint& p) { return p.is_improper(); }));
}

void PersistenceDiagram::canonicalize() {
  std::sort(points.begin(), points.end(), [](const DiagramPoint& x, const DiagramPoint& y) {
    if (x.kind != y.kind) return x.kind == PointKind::Improper;
    if (x.u != y.u) return x.u < y.u;
    return x.v < y.v;
  });
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
};

// Elder rule on the 1-skeleton. Roots are kept at the oldest vertex, so the
// surviving root of a merge is the one with the smaller filtration position.
PersistenceDiagram degree_zero(const SliceFiltration& s) {
  const Complex& cx = s.source->complex();
  PersistenceDiagram d;
  d.degree = 0;
  UnionFind uf(cx.num_vertices);
  auto vpos = [&](int v) { return s.position[cx.vertex_simplex[v]]; };
  for (int idx : s.order) {
    if (cx.dims[idx] != 1) continue;
    const auto& e = cx.simplices[idx];
    int r0 = uf.find(e[0]);
    int r1 = uf.find(e[1]);
    if (r0 == r1) continue;
    if (vpos(r0) > vpos(r1)) std::swap(r0, r1);
    const double birth = s.simplex_values[cx.vertex_simplex[r1]];
    const double death = s.simplex_values[idx];
    if (birth < death) d.points.push_back(DiagramPoint::proper(birth, death));
    uf.parent[r1] = r0;
  }
  for (int v = 0; v < cx.num_vertices; ++v) {
    if (uf.find(v) == v) d.points.push_back(DiagramPoint::improper(s.simplex_values[cx.vertex_simplex[v]]));
  }
  d.canonicalize();
  return d;
}

// Column reduction over Z/2 for one dimension. Columns are sorted lists of
// filtration positions; the pivot is the last entry.
struct DimReduction {
  std::vector<char> positive;   // per simplex index: column reduced to zero
  std::vector<std::pair<int, int>> pairs;  // (creator simplex, destroyer simplex)
};

void add_column(std::vector<int>& target, const std::vector<int>& source, std::vector<int>& scratch) {
  scratch.clear();
  std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                std::back_inserter(scratch));
  target.swap(scratch);
}

void reduce_dimension(const SliceFiltration& s, int dim, const std::vector<char>& cleared,
                      DimReduction& out) {
  const Complex& cx = s.source->complex();
  std::unordered_map<int, std::vector<int>> by_pivot;
  std::vector<int> col, scratch;
  for (int idx : s.order) {
    if (cx.dims[idx] != dim || cleared[idx]) continue;
    col.clear();
    for (int f : cx.facets[idx]) col.push_back(s.position[f]);
    std::sort(col.begin(), col.end());
    while (!col.empty()) {
      auto it = by_pivot.find(col.back());
      if (it == by_pivot.end()) break;
      add_column(col, it->second, scratch);
    }
    if (col.empty()) {
      out.positive[idx] = 1;
    } else {
      const int pivot_simplex = s.order[col.back()];
      out.pairs.emplace_back(pivot_simplex, idx);
      by_pivot.emplace(col.back(), col);
    }
  }
}

std::vector<PersistenceDiagram> reduce_all(const SliceFiltration& s, int max_degree) {
  const Complex& cx = s.source->complex();
  std::vector<PersistenceDiagram> out(max_degree + 1);
  for (int k = 0; k <= max_degree; ++k) out[k].degree = k;
  if (max_degree < 0) return out;
  out[0] = degree_zero(s);
  if (max_degree == 0 || cx.max_dim < 1) return out;

  const std::size_t n = cx.simplices.size();
  std::vector<char> cleared(n, 0);
  DimReduction red;
  red.positive.assign(n, 0);
  const int top = std::min(cx.max_dim, max_degree + 1);
  // Paired creators per dimension, for essential-class detection.
  std::vector<char> paired(n, 0);
  for (int dim = top; dim >= 1; --dim) {
    red.pairs.clear();
    reduce_dimension(s, dim, cleared, red);
    for (auto [creator, destroyer] : red.pairs) {
      cleared[creator] = 1;
      paired[creator] = 1;
      const int k = dim - 1;
      if (k >= 1 && k <= max_degree) {
        const double b = s.simplex_values[creator];
        const double d = s.simplex_values[destroyer];
        if (b < d) out[k].points.push_back(DiagramPoint::proper(b, d));
      }
    }
  }
  // Cleared simplices are positive (they are pivots of a higher column).
  for (std::size_t i = 0; i < n; ++i) {
    const int k = cx.dims[i];
    if (k < 1 || k > max_degree) continue;
    const bool pos = red.positive[i] || cleared[i];
    if (pos && !paired[i]) out[k].points.push_back(DiagramPoint::improper(s.simplex_values[i]));
  }
  for (int k = 1; k <= max_degree; ++k) out[k].canonicalize();
  return out;
}

}  // namespace

PersistenceDiagram compute_diagram(const SliceFiltration& slice, int degree) {
  if (degree < 0) throw InputError("degree must be nonnegative");
  if (degree > slice.source->dimension()) {
    PersistenceDiagram d;
    d.degree = degree;
    return d;
  }
  const Complex& cx = slice.source->complex();
  if (degree + 1 > slice.max_dim && slice.max_dim < cx.max_dim) {
    throw InputError("slice was built without the simplices needed for this degree");
  }
  if (degree == 0) return degree_zero(slice);
  const std::size_t n = cx.simplices.size();
  std::vector<char> cleared(n, 0);
  std::vector<char> paired(n, 0);
  PersistenceDiagram d;
  d.degree = degree;
  DimReduction red;
  red.positive.assign(n, 0);
  if (degree + 1 <= cx.max_dim) {
    reduce_dimension(slice, degree + 1, cleared, red);
    for (auto [creator, destroyer] : red.pairs) {
      cleared[creator] = 1;
      paired[creator] = 1;
      const double b = slice.simplex_values[creator];
      const double v = slice.simplex_values[destroyer];
      if (b < v) d.points.push_back(DiagramPoint::proper(b, v));
    }
  }
  red.pairs.clear();
  reduce_dimension(slice, degree, cleared, red);
  for (std::size_t i = 0; i < n; ++i) {
    if (cx.dims[i] != degree) continue;
    if ((red.positive[i] || cleared[i]) && !paired[i]) {
      d.points.push_back(DiagramPoint::improper(slice.simplex_values[i]));
    }
  }
  d.canonicalize();
  return d;
}

std::vector<PersistenceDiagram> compute_diagrams(const SliceFiltration& slice, int max_degree) {
  if (max_degree < 0) throw InputError("degree must be nonnegative");
  if (max_degree + 1 > slice.max_dim && slice.max_dim < slice.source->dimension()) {
    throw InputError("slice was built without the simplices needed for this degree");
  }
  return reduce_all(slice, max_degree);
}

// ---------------------------------------------------------------------------
// Dense Z/2 linear algebra for the rank oracle.

namespace {

class BitVec {
 public:
  explicit BitVec(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void flip(std::size_t i) { words_[i / 64] ^= (std::uint64_t{1} << (i % 64)); }
  bool get(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
  void xor_with(const BitVec& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
  }
  long highest() const {
    for (std::size_t w = words_.size(); w-- > 0;) {
      if (words_[w]) return static_cast<long>(w * 64 + 63 - __builtin_clzll(words_[w]));
    }
    return -1;
  }
  bool zero() const { return highest() < 0; }

 private:
  std::vector<std::uint64_t> words_;
};

int rank_of(std::vector<BitVec> vecs) {
  std::unordered_map<long, std::size_t> pivots;
  int r = 0;
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    long h = vecs[i].highest();
    while (h >= 0) {
      auto it = pivots.find(h);
      if (it == pivots.end()) break;
      vecs[i].xor_with(vecs[it->second]);
      h = vecs[i].highest();
    }
    if (h >= 0) {
      pivots.emplace(h, i);
      ++r;
    }
  }
  return r;
}

// Basis of the kernel of the boundary map restricted to `cols` (simplex
// indices of dimension k), expressed in the coordinates `coord` of C_k.
std::vector<BitVec> cycle_basis(const Complex& cx, const std::vector<int>& cols,
                                const std::unordered_map<int, std::size_t>& coord, std::size_t dim_ck,
                                std::size_t dim_ckm1, const std::unordered_map<int, std::size_t>& coord_m1) {
  std::vector<BitVec> bnd, comb;
  for (int c : cols) {
    BitVec b(dim_ckm1);
    for (int f : cx.facets[c]) b.flip(coord_m1.at(f));
    bnd.push_back(b);
    BitVec e(dim_ck);
    e.flip(coord.at(c));
    comb.push_back(e);
  }
  std::unordered_map<long, std::size_t> pivots;
  std::vector<BitVec> kernel;
  for (std::size_t i = 0; i < bnd.size(); ++i) {
    long h = bnd[i].highest();
    while (h >= 0) {
      auto it = pivots.find(h);
      if (it == pivots.end()) break;
      bnd[i].xor_with(bnd[it->second]);
      comb[i].xor_with(comb[it->second]);
      h = bnd[i].highest();
    }
    if (h >= 0) {
      pivots.emplace(h, i);
    } else {
      kernel.push_back(comb[i]);
    }
  }
  return kernel;
}

int betti_rank(const SliceFiltration& s, int k, double u, double v) {
  const Complex& cx = s.source->complex();
  if (k < 0 || k > cx.max_dim) return 0;
  std::vector<int> ck_v, cols_u, ckm1, ckp1_v;
  for (std::size_t i = 0; i < cx.simplices.size(); ++i) {
    const double val = s.simplex_values[i];
    if (cx.dims[i] == k && val <= v) ck_v.push_back(static_cast<int>(i));
    if (cx.dims[i] == k && val <= u) cols_u.push_back(static_cast<int>(i));
    if (cx.dims[i] == k - 1) ckm1.push_back(static_cast<int>(i));
    if (cx.dims[i] == k + 1 && val <= v) ckp1_v.push_back(static_cast<int>(i));
  }
  std::unordered_map<int, std::size_t> coord, coord_m1;
  for (std::size_t i = 0; i < ck_v.size(); ++i) coord[ck_v[i]] = i;
  for (std::size_t i = 0; i < ckm1.size(); ++i) coord_m1[ckm1[i]] = i;

  std::vector<BitVec> z;
  if (k == 0) {
    for (int c : cols_u) {
      BitVec e(ck_v.size());
      e.flip(coord.at(c));
      z.push_back(e);
    }
  } else {
    z = cycle_basis(cx, cols_u, coord, ck_v.size(), ckm1.size(), coord_m1);
  }
  std::vector<BitVec> b;
  for (int c : ckp1_v) {
    BitVec e(ck_v.size());
    for (int f : cx.facets[c]) e.flip(coord.at(f));
    b.push_back(e);
  }
  std::vector<BitVec> zb = z;
  zb.insert(zb.end(), b.begin(), b.end());
  return rank_of(zb) - rank_of(b);
}

}  // namespace

PersistenceDiagram diagram_at(const SimplicialBifiltration& bif, ParamPoint p, int degree) {
  return compute_diagram(build_slice(bif, p, degree + 1), degree);
}

int persistent_betti(const SliceFiltration& slice, int degree, double u, double v) {
  if (!(u < v)) throw InputError("persistent_betti requires u < v");
  return betti_rank(slice, degree, u, v);
}

int multiplicity(const SliceFiltration& slice, int degree, const DiagramPoint& point) {
  if (point.is_diagonal()) throw InputError("multiplicity is undefined for the diagonal");
  std::set<double> vals(slice.simplex_values.begin(), slice.simplex_values.end());
  vals.insert(point.u);
  if (point.is_proper()) vals.insert(point.v);
  double gap = kInf;
  for (auto it = vals.begin(); std::next(it) != vals.end(); ++it) gap = std::min(gap, *std::next(it) - *it);
  const double eps = std::isfinite(gap) ? gap / 2.0 : 1.0;
  const double u = point.u;
  if (point.is_improper()) {
    const double big = *vals.rbegin() + 1.0;
    return betti_rank(slice, degree, u + eps, big) - betti_rank(slice, degree, u - eps, big);
  }
  if (!(u < point.v)) return 0;
  const double v = point.v;
  return betti_rank(slice, degree, u + eps, v - eps) - betti_rank(slice, degree, u - eps, v - eps) -
         betti_rank(slice, degree, u + eps, v + eps) + betti_rank(slice, degree, u - eps, v + eps);
}

std::vector<int> betti_numbers(const SimplicialBifiltration& bif) {
  // ranks of boundary maps via sparse elimination in dimension order
  const Complex& cx = bif.complex();
  std::vector<int> rank(cx.max_dim + 2, 0);
  for (int d = 1; d <= cx.max_dim; ++d) {
    std::unordered_map<int, std::vector<int>> by_pivot;
    std::vector<int> col, scratch;
    for (std::size_t i = 0; i < cx.simplices.size(); ++i) {
      if (cx.dims[i] != d) continue;
      col = cx.facets[i];
      std::sort(col.begin(), col.end());
      while (!col.empty()) {
        auto it = by_pivot.find(col.back());
        if (it == by_pivot.end()) break;
        add_column(col, it->second, scratch);
      }
      if (!col.empty()) {
        by_pivot.emplace(col.back(), col);
        ++rank[d];
      }
    }
  }
  auto counts = cx.count_by_dim();
  std::vector<int> betti(cx.max_dim + 1);
  for (int k = 0; k <= cx.max_dim; ++k) betti[k] = counts[k] - rank[k] - rank[k + 1];
  return betti;
}

void write_diagram_rows(std::ostream& os, const PersistenceDiagram& d) {
  char buf[96];
  for (const auto& p : d.points) {
    if (p.is_improper()) {
      std::snprintf(buf, sizeof buf, "%d,%.17g,inf\n", d.degree, p.u);
    } else {
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", d.degree, p.u, p.v);
    }
    os << buf;
  }
}

}  // namespace cmatch
