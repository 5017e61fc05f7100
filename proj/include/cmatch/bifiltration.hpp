#pragma once

#include <memory>
#include <string>
#include <vector>

namespace cmatch {

struct VertexValues {
  double f1 = 0.0;
  double f2 = 0.0;

  friend bool operator==(const VertexValues&, const VertexValues&) = default;
};

/// A point (a, b) of the open strip ]0,1[ x R. It names the positive-slope
/// line through (b, -b) with direction (a, 1 - a).
struct ParamPoint {
  double a = 0.5;
  double b = 0.0;

  bool valid() const;
  friend bool operator==(const ParamPoint&, const ParamPoint&) = default;
};

/// Combinatorial part of a bifiltration, shared between bifiltrations that
/// differ only in their vertex values.
struct Complex {
  std::vector<std::vector<int>> simplices;  // sorted vertex tuples
  std::vector<std::vector<int>> facets;     // boundary simplices, by index
  std::vector<int> dims;
  std::vector<int> vertex_simplex;          // vertex id -> simplex index
  int max_dim = 0;
  int num_vertices = 0;

  std::vector<int> count_by_dim() const;
};

/// Finite simplicial complex with a pair of real values on every vertex.
/// Immutable after construction.
class SimplicialBifiltration {
 public:
  /// `simplices` must already be closed under faces; every vertex must be
  /// listed as a 0-simplex.
  SimplicialBifiltration(std::vector<VertexValues> vertices,
                         std::vector<std::vector<int>> simplices,
                         std::string name = "");

  /// Builds the face closure of `maximal` (plus all vertices) and orders
  /// simplices by dimension, then lexicographically.
  static SimplicialBifiltration from_maximal(std::vector<VertexValues> vertices,
                                             const std::vector<std::vector<int>>& maximal,
                                             std::string name = "");

  const std::vector<VertexValues>& vertices() const { return values_; }
  const Complex& complex() const { return *complex_; }
  const std::shared_ptr<const Complex>& complex_ptr() const { return complex_; }
  const std::string& name() const { return name_; }
  int dimension() const { return complex_->max_dim; }
  std::size_t num_simplices() const { return complex_->simplices.size(); }

  /// Same complex, new vertex values.
  SimplicialBifiltration with_values(std::vector<VertexValues> values, std::string name = "") const;

  bool same_complex(const SimplicialBifiltration& other) const;

  /// max over vertices of max(|f1|, |f2|).
  double sup_norm() const;

 private:
  SimplicialBifiltration(std::vector<VertexValues> values, std::shared_ptr<const Complex> complex,
                         std::string name);

  std::vector<VertexValues> values_;
  std::shared_ptr<const Complex> complex_;
  std::string name_;
};

/// Vertexwise sup-norm of f - g. Throws InputError on complex mismatch.
double sup_norm_distance(const SimplicialBifiltration& f, const SimplicialBifiltration& g);

/// min{a,1-a} * max{(f1-b)/a, (f2+b)/(1-a)}.
double slice_value(double f1, double f2, ParamPoint p);

struct SliceFiltration {
  const SimplicialBifiltration* source = nullptr;
  ParamPoint param;
  std::vector<double> simplex_values;
  std::vector<int> order;      // simplex indices sorted by (value, dim, index)
  std::vector<int> position;   // inverse of order; -1 for simplices above max_dim
  int max_dim = 0;             // only simplices up to this dimension are ordered
};

/// Slice filtration at p. A nonnegative `max_dim` orders only the simplices
/// of dimension <= max_dim, which is enough for diagrams up to max_dim - 1.
SliceFiltration build_slice(const SimplicialBifiltration& bif, ParamPoint p, int max_dim = -1);

/// Lower-star filtration from explicit vertex values (used by tests).
SliceFiltration build_lower_star(const SimplicialBifiltration& bif, const std::vector<double>& vertex_values);

/// max over vertices of |f*_(a,b) - g*_(a,b)|.
double sup_norm_slice_gap(const SimplicialBifiltration& f, const SimplicialBifiltration& g, ParamPoint p);

}  // namespace cmatch
