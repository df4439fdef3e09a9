#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "gapfield/assemble.hpp"
#include "gapfield/coefficients.hpp"
#include "gapfield/geometry.hpp"
#include "gapfield/solve.hpp"
#include "gapfield/types.hpp"

namespace gapfield {

/// Scenario configuration, parsed from flat "section.key = value" text.
/// Any unknown key aborts parsing.
struct Scenario {
  std::string id;

  struct Geometry {
    std::string family = "ball";  // ball | quadratic
    double radius = 1.0;
    std::vector<double> Q;  // row-major (n-1)^2, quadratic family
    double epsilon = 1e-2;
    double R0 = 0.8;
    double kappa = 2.0;
    int dimension = 2;
  } geometry;

  struct Coefficient {
    std::string family = "identity";  // identity | smooth-perturbation | layered
    double lambda = 1.0;
    double Lambda = 1.0;
    double alpha = 0.5;
    double amplitude = 0.0;
    std::vector<double> wavevector;
  } coefficient;

  struct Boundary {
    std::string family = "linear";  // linear | harmonic-quadratic
    std::vector<double> direction;
    double quad_coeff = 0.0;
  } boundary;

  struct Numerics {
    int target_cells = 600;
    int vertical_cells = 32;
    double c_grade = 0.05;
    double tol = 1e-10;
    int max_iter = 100000;
    double gamma = 0.3;
    std::string precond = "ssor";  // none | jacobi | ssor
    double ssor_omega = 1.5;
  } numerics;

  struct Sweep {
    std::vector<double> epsilons;
    std::vector<double> harnack_epsilons;  // defaults to epsilons
    std::vector<double> harnack_x0;        // defaults to the origin
  } sweep;

  struct Layers {
    std::vector<int> l_list;
    std::vector<std::uint64_t> seeds;
    double amplitude = 0.3;
    int lateral_cells = 128;
    int vertical_cells = 256;
  } layers;

  // Derived quantities.
  double lateral_extent() const;  // R_lat, just inside R0/sqrt(n-1)
  GapGeometry make_geometry(double epsilon) const;
  CoefficientField make_coefficient() const;
  BoundaryData make_boundary() const;
  PrecondKind precond_kind() const;
  void validate() const;
};

Scenario parse_scenario_file(const std::string& path);
Scenario parse_scenario_text(const std::string& text);

}  // namespace gapfield
