#include "gapfield/transform.hpp"

#include <cmath>

namespace gapfield {

FlattenMap::FlattenMap(Kind kind, const GapGeometry& geom, LatVec x0p,
                       double half)
    : kind_(kind), geom_(&geom), x0p_(std::move(x0p)), half_(half) {}

FlattenMap FlattenMap::global(const GapGeometry& geom) {
  return FlattenMap(Kind::Global, geom, LatVec::Zero(geom.lateral_dim()), 1.0);
}

FlattenMap FlattenMap::local(const GapGeometry& geom, const LatVec& x0p) {
  return FlattenMap(Kind::Local, geom, x0p, geom.delta_scale(x0p));
}

FlattenMap FlattenMap::annulus(const GapGeometry& geom, const LatVec& x0p,
                               double r) {
  const double h = geom.retracted_gap_height(x0p, r);
  FlattenMap m(Kind::Annulus, geom, x0p, h);
  m.annulus_r_ = r;
  return m;
}

double FlattenMap::gap_fraction(const VecN& x) const {
  const int n = geom_->dim();
  const LatVec xp = x.head(n - 1);
  const double den = geom_->gap_height(xp);
  const double num = x[n - 1] - geom_->lower().value(xp) + 0.5 * geom_->epsilon();
  return num / den;
}

VecN FlattenMap::forward(const VecN& x) const {
  const int n = geom_->dim();
  const double t = gap_fraction(x);
  if (t < -1e-12 || t > 1.0 + 1e-12)
    throw DomainError("forward: point outside the gap");
  VecN z(n);
  switch (kind_) {
    case Kind::Global:
      z.head(n - 1) = x.head(n - 1);
      break;
    case Kind::Local:
      z.head(n - 1) = 4.0 * (x.head(n - 1) - x0p_) / half_;
      break;
    case Kind::Annulus:
      z.head(n - 1) = x.head(n - 1) - x0p_;
      break;
  }
  z[n - 1] = 2.0 * half_ * (t - 0.5);
  return z;
}

LatVec FlattenMap::lateral_preimage(const LatVec& zp) const {
  switch (kind_) {
    case Kind::Global:
      return zp;
    case Kind::Local:
      return x0p_ + half_ * zp / 4.0;
    case Kind::Annulus:
      return x0p_ + zp;
  }
  return zp;
}

VecN FlattenMap::inverse(const VecN& z) const {
  const int n = geom_->dim();
  if (std::abs(z[n - 1]) > half_ * (1.0 + 1e-12))
    throw DomainError("inverse: |z_n| exceeds half height");
  const LatVec xp = lateral_preimage(z.head(n - 1));
  const double t = 0.5 * (z[n - 1] / half_ + 1.0);
  VecN x(n);
  x.head(n - 1) = xp;
  x[n - 1] = geom_->lower().value(xp) - 0.5 * geom_->epsilon() +
             t * geom_->gap_height(xp);
  return x;
}

MatN FlattenMap::jacobian(const VecN& x) const {
  const int n = geom_->dim();
  const LatVec xp = x.head(n - 1);
  const double den = geom_->gap_height(xp);
  const double t = gap_fraction(x);
  const LatVec gf = geom_->upper().gradient(xp);
  const LatVec gg = geom_->lower().gradient(xp);
  double lateral = 1.0;
  if (kind_ == Kind::Local) lateral = 4.0 / half_;
  const double scale = 2.0 * half_;  // z_n = scale * (t - 1/2)
  MatN J = MatN::Zero(n, n);
  for (int i = 0; i < n - 1; ++i) J(i, i) = lateral;
  for (int i = 0; i < n - 1; ++i)
    J(n - 1, i) = scale * (-gg[i] - t * (gf[i] - gg[i])) / den;
  J(n - 1, n - 1) = scale / den;
  return J;
}

MatN FlattenMap::pushforward_jacobian(const VecN& x) const {
  MatN J = jacobian(x);
  if (kind_ == Kind::Local) J *= half_;  // delta-normalized
  return J;
}

double FlattenMap::jacobian_det(const VecN& x) const {
  // The only off-diagonal entries sit in the last row, so the determinant is
  // the product of the diagonal.
  const MatN J = jacobian(x);
  double d = 1.0;
  for (int i = 0; i < J.rows(); ++i) d *= J(i, i);
  return d;
}

MatN FlattenMap::pushforward(const CoefficientField& a, const VecN& z) const {
  const VecN x = inverse(z);
  const MatN P = pushforward_jacobian(x);
  double det = 1.0;
  for (int i = 0; i < P.rows(); ++i) det *= P(i, i);
  if (det <= 0.0)
    throw OrientationError("pushforward: non-positive Jacobian determinant");
  const MatN ax = a.eval(x);
  MatN b = P * ax * P.transpose() / det;
  // Conjugation preserves symmetry; enforce it exactly against roundoff.
  b = 0.5 * (b + b.transpose()).eval();
  return b;
}

ReflectionIndex reflection_index(double half_height, double zn) {
  if (half_height <= 0.0)
    throw DomainError("reflection_index: half height must be positive");
  ReflectionIndex ri;
  // Nearest slab center 2 l half; exact face points go to the lower slab.
  ri.slab = static_cast<std::int64_t>(std::ceil(zn / (2.0 * half_height) - 0.5));
  ri.sign = (ri.slab % 2 == 0) ? 1 : -1;
  ri.source_zn = ri.sign * (zn - 2.0 * static_cast<double>(ri.slab) * half_height);
  return ri;
}

MatN reflect_coefficient(const ReflectionIndex& ri, const MatN& b_source) {
  MatN b = b_source;
  const int n = static_cast<int>(b.rows());
  if (ri.sign < 0) {
    for (int k = 0; k < n - 1; ++k) {
      b(n - 1, k) = -b(n - 1, k);
      b(k, n - 1) = -b(k, n - 1);
    }
  }
  return b;
}

}  // namespace gapfield
