#pragma once

#include <array>
#include <string>

#include "cmatch/bifiltration.hpp"

namespace cmatch {

enum class ExampleId { MonodromyBasic, Torus, TwoSpheres };

ExampleId parse_example_id(const std::string& s);
std::string example_name(ExampleId id);

struct Sphere {
  double cx = 0.0, cy = 0.0, cz = 0.0, r = 1.0;
};

struct ExampleSpec {
  ExampleId id = ExampleId::MonodromyBasic;
  /// Mesh density. monodromy_basic: cells per unit length in x.
  /// torus: segments around each circle. two_spheres: longitude segments.
  int resolution = 32;

  // monodromy_basic domain.
  double x0 = -5.0, x1 = 5.0, y0 = -1.0, y1 = 5.0;
  /// Cells per unit length in y; 0 picks max(4, resolution / 8).
  int y_resolution = 0;

  // torus: tube around the circle of radius `major` in the xz-plane.
  double major = 1.5, minor = 0.5;

  std::array<Sphere, 2> spheres{Sphere{0.0, 0.0, 0.0, 4.0}, Sphere{-1.0, 10.0, 1.25, 4.0}};
};

SimplicialBifiltration generate(const ExampleSpec& spec);

/// The second coordinate of the monodromy example on the plane.
double monodromy_f2(double x, double y);

/// Rounds to a multiple of 2^-32 so that slice-gap comparisons between
/// examples and their perturbations are exact in floating point.
double quantize(double v);

/// g = f + (s, -s) on every vertex: the slice of g at (a,b) equals the slice
/// of f at (a, b - s).
SimplicialBifiltration shifted(const SimplicialBifiltration& f, double s, const std::string& name = "");

}  // namespace cmatch
