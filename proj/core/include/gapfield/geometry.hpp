#pragma once

#include <vector>

#include "gapfield/types.hpp"

namespace gapfield {

enum class Orientation { Upper, Lower };

/// Boundary profile of one inclusion over the lateral disk, written as a
/// graph x_n = f(x').  Profiles are analytic: value, gradient and Hessian
/// come from closed forms, never from differencing.
class InclusionProfile {
 public:
  enum class Family { Ball, Quadratic, MonomialSum };

  static InclusionProfile ball(double radius, Orientation o, int lateral_dim);
  // f(x') = x'^T Q x' / 2 (upper); the mirrored pair has f - g = x'^T Q x'.
  static InclusionProfile quadratic(const LatMat& Q, Orientation o);
  // f(x') = sum_k c_k |x'|^(2k), k starting at 1 (radial even powers).
  static InclusionProfile monomial_sum(const std::vector<double>& coeffs,
                                       Orientation o, int lateral_dim);

  double value(const LatVec& xp) const;
  LatVec gradient(const LatVec& xp) const;
  LatMat hessian(const LatVec& xp) const;

  Family family() const { return family_; }
  Orientation orientation() const { return orientation_; }
  int lateral_dim() const { return lateral_dim_; }
  // Largest lateral radius the profile is defined on (ball: R).
  double domain_radius() const;

 private:
  InclusionProfile() = default;
  // Convex shape s(x') with s(0)=0, grad s(0)=0; Lower negates it.
  double shape(const LatVec& xp) const;
  LatVec shape_gradient(const LatVec& xp) const;
  LatMat shape_hessian(const LatVec& xp) const;

  Family family_ = Family::Ball;
  Orientation orientation_ = Orientation::Upper;
  int lateral_dim_ = 1;
  double radius_ = 1.0;
  LatMat Q_;
  std::vector<double> coeffs_;
};

struct ConvexityReport {
  double min_eig = 0.0;
  LatVec worst_point;
  bool pass = false;
};

/// The gap configuration: upper profile f, lower profile g, separation
/// epsilon, validity radius R0 and relative-convexity constant kappa.  The
/// physical gap is  g(x') - eps/2 < x_n < f(x') + eps/2  over |x'| < R0.
class GapGeometry {
 public:
  GapGeometry(InclusionProfile f, InclusionProfile g, double epsilon,
              double R0, double kappa, int dim);

  // Symmetric pairs used by the shipped scenarios.
  static GapGeometry unit_balls(double epsilon, double R0, int dim);
  static GapGeometry quadratic_pair(const LatMat& Q, double epsilon, double R0,
                                    int dim);

  double epsilon() const { return epsilon_; }
  double R0() const { return R0_; }
  double kappa() const { return kappa_; }
  int dim() const { return dim_; }
  int lateral_dim() const { return dim_ - 1; }
  // Working radius for interior estimates; R0/4 once the strict dyadic-range
  // constraint is vacuous at this epsilon (it is at any desk-scale epsilon).
  double working_radius() const { return r0_; }
  const InclusionProfile& upper() const { return f_; }
  const InclusionProfile& lower() const { return g_; }

  // eps + f(x') - g(x'), the vertical opening at lateral position x'.
  double gap_height(const LatVec& xp) const;
  // sqrt(eps + |x0'|^2), the natural local length scale.
  double delta_scale(const LatVec& x0p) const;
  // Gap height at the point x0' retracted by r/4 toward the origin; the
  // retraction direction degenerates to e_1 as |x0'| -> 0.
  double retracted_gap_height(const LatVec& x0p, double r) const;

  // (-grad f, 1)/|.| on the upper boundary, (grad g, -1)/|.| on the lower.
  VecN boundary_normal(const LatVec& xp, Orientation side) const;

  ConvexityReport verify_relative_convexity(int sample_count) const;

 private:
  InclusionProfile f_;
  InclusionProfile g_;
  double epsilon_;
  double R0_;
  double kappa_;
  int dim_;
  double r0_;
};

/// Omega_{x0,r}: the slice of the gap over the lateral disk |x' - x0'| < r.
struct GapSubdomain {
  LatVec center;
  double radius;

  GapSubdomain(const GapGeometry& geom, const LatVec& x0p, double r);
  bool contains_lateral(const LatVec& xp) const;
  // The annulus Omega_{x0,r} \ Omega_{x0,r/2} membership test.
  bool in_annulus(const LatVec& xp) const;
};

}  // namespace gapfield
