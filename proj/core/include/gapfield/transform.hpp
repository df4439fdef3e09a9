#pragma once

#include <cstdint>

#include "gapfield/coefficients.hpp"
#include "gapfield/geometry.hpp"
#include "gapfield/types.hpp"

namespace gapfield {

/// Change of variables from the physical gap to a box/annulus with the flat
/// faces at z_n = +-half_height.  Three kinds:
///
///   global   z' = x',              z_n = 2 t(x) - 1,        half = 1
///   local    z' = 4 (x'-x0')/d,    z_n = 2 d (t(x) - 1/2),  half = d (delta)
///   annulus  z' = x' - x0',        z_n = 2 h (t(x) - 1/2),  half = h
///
/// where t(x) = (x_n - g(x') + eps/2) / (eps + f(x') - g(x')) is the gap
/// fraction (0 on the lower boundary, 1 on the upper) and h is the retracted
/// gap height of the annulus construction.  All maps, Jacobians and inverses
/// are closed-form.
class FlattenMap {
 public:
  enum class Kind { Global, Local, Annulus };

  static FlattenMap global(const GapGeometry& geom);
  static FlattenMap local(const GapGeometry& geom, const LatVec& x0p);
  static FlattenMap annulus(const GapGeometry& geom, const LatVec& x0p,
                            double r);

  Kind kind() const { return kind_; }
  double half_height() const { return half_; }
  double annulus_radius() const { return annulus_r_; }
  const GapGeometry& geometry() const { return *geom_; }
  const LatVec& center() const { return x0p_; }
  int dim() const { return geom_->dim(); }

  VecN forward(const VecN& x) const;
  VecN inverse(const VecN& z) const;

  // d z / d x, rows z_1..z_n, columns x_1..x_n; lateral rows are diagonal,
  // all coupling sits in the last row.
  MatN jacobian(const VecN& x) const;

  // The matrix actually conjugating the coefficients.  For the local map the
  // pre-dilation x -> x/delta only rescales the operator by a harmless
  // positive constant, so the pushforward uses the delta-normalized Jacobian
  // (lateral entries 4, vertical entry 2 delta^2 / gap height); for the other
  // kinds this equals jacobian().
  MatN pushforward_jacobian(const VecN& x) const;

  double jacobian_det(const VecN& x) const;

  // b(z) = P a(x(z)) P^t / det P with P = pushforward_jacobian.
  MatN pushforward(const CoefficientField& a, const VecN& z) const;

  // Physical lateral coordinate of a flattened point.
  LatVec lateral_preimage(const LatVec& zp) const;

 private:
  FlattenMap(Kind kind, const GapGeometry& geom, LatVec x0p, double half);
  double gap_fraction(const VecN& x) const;

  Kind kind_;
  const GapGeometry* geom_;
  LatVec x0p_;
  double half_;
  double annulus_r_ = 0.0;
};

/// Index data for the even extension across the flat faces: fold z_n into
/// [-half, half] through the reflection group generated by the two faces.
/// Points on a face z_n = (2l+1) half are assigned to the lower slab.
struct ReflectionIndex {
  std::int64_t slab = 0;  // l: source slab, z_n in ((2l-1) half, (2l+1) half]
  double source_zn = 0.0;
  int sign = 1;  // (-1)^l, the parity applied to mixed coefficient entries
};

ReflectionIndex reflection_index(double half_height, double zn);

// Extended scalar field value: plain copy of the source value.
inline double reflect_scalar(const ReflectionIndex&, double source_value) {
  return source_value;
}

// Extended coefficient: rows/columns n get the slab parity on off-diagonal
// entries; the result is orthogonally conjugate to the source matrix.
MatN reflect_coefficient(const ReflectionIndex& ri, const MatN& b_source);

}  // namespace gapfield
