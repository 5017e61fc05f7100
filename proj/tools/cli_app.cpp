#include "cli_app.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cmatch/coherent_distance.hpp"
#include "cmatch/errors.hpp"
#include "cmatch/examples.hpp"
#include "cmatch/io.hpp"
#include "cmatch/pareto_grid.hpp"
#include "cmatch/parameter_space.hpp"
#include "cmatch/persistence.hpp"

namespace cmatch::cli {

namespace {

struct Source {
  std::string example;
  std::string input;
  int resolution = 32;

  bool given() const { return !example.empty() || !input.empty(); }

  SimplicialBifiltration load() const {
    if (!example.empty() && !input.empty()) throw InputError("give either --example or --input, not both");
    if (!input.empty()) return load_complex_json(input);
    if (example.empty()) throw InputError("missing --example or --input");
    ExampleSpec spec;
    spec.id = parse_example_id(example);
    spec.resolution = resolution;
    return generate(spec);
  }
};

struct Common {
  Source f;
  int degree = 0;
  int threads = 0;
  unsigned long seed = 0;
  std::string out_path;
};

std::vector<double> parse_reals(const std::string& text, std::size_t count, const std::string& flag) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError(flag + ": not a number: '" + item + "'");
    }
  }
  if (v.size() != count) throw InputError(flag + " needs " + std::to_string(count) + " comma-separated numbers");
  return v;
}

Rect parse_rect(const std::string& text) {
  const auto v = parse_reals(text, 4, "--rect");
  Rect r{v[0], v[1], v[2], v[3]};
  if (!r.valid()) throw InputError("--rect must satisfy 0 < a0 < a1 < 1 and b0 < b1");
  return r;
}

ParamPoint checked_point(double a, double b) {
  ParamPoint p{a, b};
  if (!p.valid()) throw InputError("a must lie in ]0,1[ and b must be finite");
  return p;
}

ParamPoint default_basepoint(const ParameterRegion& region) {
  const Rect& r = region.rect;
  return {r.a0 + 0.05 * (r.a1 - r.a0), r.b0 + 0.05 * (r.b1 - r.b0)};
}

void add_source(CLI::App* cmd, Source& s, const std::string& prefix, const std::string& what) {
  cmd->add_option("--" + prefix + "example", s.example, "Built-in " + what + ": monodromy_basic, torus, two_spheres");
  cmd->add_option("--" + prefix + "input", s.input, "Complex JSON file for " + what);
  cmd->add_option("--" + prefix + "resolution", s.resolution, "Mesh resolution of the built-in " + what)
      ->check(CLI::Range(8, 4096));
}

void add_common(CLI::App* cmd, Common& c) {
  add_source(cmd, c.f, "", "f");
  cmd->add_option("--degree", c.degree, "Homology degree")->check(CLI::Range(0, 3));
  cmd->add_option("--threads", c.threads, "Worker threads (0: all cores)")->check(CLI::Range(0, 1024));
  cmd->add_option("--seed", c.seed, "Accepted for interface compatibility; results do not depend on it");
  cmd->add_option("--out", c.out_path, "Output file (default: stdout)");
}

void emit(const Common& c, std::ostream& out, const std::string& text) {
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out_path, std::ios::binary);
  if (!f) throw InputError("cannot write " + c.out_path);
  f << text;
}

SimplicialBifiltration load_g(const Source& g, double shift, const SimplicialBifiltration& f) {
  if (g.given()) {
    if (shift != 0.0) throw InputError("--shift cannot be combined with --g-example or --g-input");
    return g.load();
  }
  return shift != 0.0 ? shifted(f, shift) : f;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Matching and coherent matching distances between bifiltrations"};
  app.require_subcommand(1);

  Common c;
  Source g;
  double a = 0.5, b = 0.0, shift = 0.0, refine_tol = 1e-3;
  int degree_opt = -1, grid_n = 16, samples = 64;
  std::string rect_text = "0.1,0.9,-1,1", region_path, basepoint_text;
  bool a_given = false;

  auto* diagram = app.add_subcommand("diagram", "Persistence diagram of one slice as CSV degree,u,v");
  add_common(diagram, c);
  diagram->add_option("--a", a, "Slope parameter in ]0,1[")->required();
  diagram->add_option("--b", b, "Offset parameter")->required();
  diagram->add_option("--max-degree", degree_opt, "Emit every degree from 0 to this one instead of --degree");

  auto* heatmap = app.add_subcommand("heatmap", "Bottleneck distance between slices of f and g as CSV a,b,value");
  add_common(heatmap, c);
  add_source(heatmap, g, "g-", "g");
  heatmap->add_option("--shift", shift, "Use g = f + (s, -s)");
  heatmap->add_option("--rect", rect_text, "a0,a1,b0,b1");
  heatmap->add_option("--grid", grid_n, "Lattice points per side");

  auto* singular = app.add_subcommand("singular", "Singular pairs in a rectangle as CSV a,b,degree,gap");
  add_common(singular, c);
  singular->add_option("--rect", rect_text, "a0,a1,b0,b1");
  singular->add_option("--grid", grid_n, "Scan lattice points per side");
  singular->add_option("--refine-tol", refine_tol, "Final refinement radius");

  auto* monodromy = app.add_subcommand("monodromy", "Monodromy group of f and g at a basepoint as JSON");
  add_common(monodromy, c);
  add_source(monodromy, g, "g-", "g");
  monodromy->add_option("--shift", shift, "Use g = f + (s, -s)");
  monodromy->add_option("--region", region_path, "Region JSON")->required();
  monodromy->add_option("--basepoint", basepoint_text, "a,b (default: near the lower left corner)");

  auto* cohdist = app.add_subcommand("cohdist", "Coherent matching distance over a region as JSON");
  add_common(cohdist, c);
  add_source(cohdist, g, "g-", "g");
  cohdist->add_option("--shift", shift, "Use g = f + (s, -s)");
  cohdist->add_option("--region", region_path, "Region JSON")->required();
  cohdist->add_option("--basepoint", basepoint_text, "a,b (default: near the lower left corner)");
  cohdist->add_option("--grid", grid_n, "Sample lattice points per side");

  auto* grid = app.add_subcommand("grid", "Analytic grid as JSON, or its intersections with one line as CSV");
  add_common(grid, c);
  auto* grid_a = grid->add_option("--a", a, "Slope parameter of the line");
  grid->add_option("--b", b, "Offset parameter of the line");
  grid->add_option("--samples", samples, "Polyline samples per contour")->check(CLI::Range(2, 100000));

  auto* complex = app.add_subcommand("complex", "Built-in example as complex JSON");
  add_common(complex, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  a_given = grid_a->count() > 0;

  try {
    std::ostringstream os;
    if (diagram->parsed()) {
      const ParamPoint p = checked_point(a, b);
      const SimplicialBifiltration f = c.f.load();
      const SliceFiltration slice = build_slice(f, p);
      std::vector<PersistenceDiagram> dgms;
      if (degree_opt >= 0) {
        dgms = compute_diagrams(slice, degree_opt);
      } else {
        dgms.push_back(compute_diagram(slice, c.degree));
      }
      write_diagram_csv(os, dgms);
    } else if (heatmap->parsed()) {
      const Rect rect = parse_rect(rect_text);
      if (grid_n < 2) throw InputError("--grid must be at least 2");
      const SimplicialBifiltration f = c.f.load();
      const SimplicialBifiltration gg = load_g(g, shift, f);
      write_heatmap_csv(os, dmatch(f, gg, c.degree, rect, grid_n, c.threads).table);
    } else if (singular->parsed()) {
      const Rect rect = parse_rect(rect_text);
      if (grid_n < 8) throw InputError("--grid must be at least 8");
      if (!(refine_tol > 0.0)) throw InputError("--refine-tol must be positive");
      const SimplicialBifiltration f = c.f.load();
      ScanOptions opt;
      opt.threads = c.threads;
      write_singular_csv(os, detect_singular_pairs(f, c.degree, rect, grid_n, refine_tol, opt));
    } else if (monodromy->parsed() || cohdist->parsed()) {
      const ParameterRegion region = load_region_json(region_path);
      ParamPoint base = default_basepoint(region);
      if (!basepoint_text.empty()) {
        const auto v = parse_reals(basepoint_text, 2, "--basepoint");
        base = checked_point(v[0], v[1]);
      }
      if (!region.contains(base)) throw InputError("basepoint is not in the region");
      const SimplicialBifiltration f = c.f.load();
      const SimplicialBifiltration gg = load_g(g, shift, f);
      TransportConfig cfg;
      cfg.separation = region.separation;
      if (monodromy->parsed()) {
        os << group_report_json(monodromy_group(f, gg, c.degree, region, base, cfg), region, c.degree);
      } else {
        if (grid_n < 2) throw InputError("--grid must be at least 2");
        SampleSpec spec;
        spec.lattice_n = grid_n;
        spec.threads = c.threads;
        os << cohdist_report_json(coherent_matching_distance(f, gg, c.degree, region, base, spec, cfg));
      }
    } else if (grid->parsed()) {
      if (!c.f.input.empty()) throw InputError("grids exist only for built-in examples");
      ExampleSpec spec;
      spec.id = parse_example_id(c.f.example.empty() ? std::string("torus") : c.f.example);
      const ExtendedParetoGrid eg = builtin_grid(spec.id, spec);
      if (a_given) {
        write_intersections_csv(os, eg, line_grid_intersections(eg, AdmissibleLine(checked_point(a, b))));
      } else {
        os << grid_to_json(eg, samples);
      }
    } else if (complex->parsed()) {
      if (c.f.example.empty()) throw InputError("complex needs --example");
      os << complex_to_json(c.f.load());
    }
    emit(c, out, os.str());
    return 0;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "computation error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace cmatch::cli
