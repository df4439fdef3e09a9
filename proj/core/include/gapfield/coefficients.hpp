#pragma once

#include <cstdint>
#include <vector>

#include "gapfield/types.hpp"

namespace gapfield {

/// Horizontal cuts -1 = c_0 < c_1 < ... < c_l = 1 splitting the cylinder
/// S = {|x'|<1, |x_n|<1} into l layers; m0 is the 1-based layer containing 0.
struct LayeredPartition {
  std::vector<double> cuts;  // size l+1, cuts.front() == -1, cuts.back() == 1
  int m0 = 1;
  double mu = 0.5;  // layer-wise Hoelder exponent

  explicit LayeredPartition(std::vector<double> cut_points, double mu_exp);
  int layer_count() const { return static_cast<int>(cuts.size()) - 1; }
  // 1-based layer index of x_n; interface points belong to the lower layer.
  int layer_of(double xn) const;
};

/// Symmetric coefficient matrix field a(x) with certified ellipticity bounds.
/// Families:
///   identity            a = I
///   smooth-perturbation a = I + amplitude * sin(k.x) * S,  S = sym unit
///                        off-diagonal coupling of axes 1 and n
///   layered             a = s_m(x) I per layer, s_m = 1 + amp_m cos(k_m e.x
///                        + phase_m), drawn per layer from a seeded RNG
class CoefficientField {
 public:
  enum class Family { Identity, SmoothPerturbation, Layered };

  static CoefficientField identity(int dim);
  static CoefficientField smooth_perturbation(int dim, double amplitude,
                                              const VecN& wavevector);
  static CoefficientField layered(int dim, const LayeredPartition& part,
                                  double amplitude, std::uint64_t seed);

  MatN eval(const VecN& x) const;

  Family family() const { return family_; }
  int dim() const { return dim_; }
  double lambda() const { return lambda_; }
  double Lambda() const { return Lambda_; }
  double alpha() const { return alpha_; }
  double holder_seminorm() const { return holder_seminorm_; }
  // Closed-form per-layer C^mu norm bound (sup + seminorm), max over layers.
  double max_layer_holder_norm() const;
  const LayeredPartition* partition() const {
    return family_ == Family::Layered ? &partition_ : nullptr;
  }
  // Piecewise-constant coefficients associated to this layered field: the
  // one-sided limit toward the origin-facing interface per layer, and a(0)
  // on the layer containing 0.  Identity on non-layered fields.
  CoefficientField piecewise_constant_approx() const;

 private:
  CoefficientField() : partition_({-1.0, 1.0}, 0.5) {}

  Family family_ = Family::Identity;
  int dim_ = 2;
  double lambda_ = 1.0;
  double Lambda_ = 1.0;
  double alpha_ = 0.5;
  double holder_seminorm_ = 0.0;

  double amplitude_ = 0.0;
  VecN wavevector_;

  LayeredPartition partition_;
  struct LayerWave {
    double amp;
    double freq;
    VecN dir;
    double phase;
  };
  std::vector<LayerWave> layers_;
  bool frozen_ = false;               // piecewise-constant variant
  std::vector<double> frozen_value_;  // scalar per layer when frozen
  double layer_scalar(int m, const VecN& x) const;
};

}  // namespace gapfield
