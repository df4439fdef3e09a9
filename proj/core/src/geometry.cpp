#include "gapfield/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

namespace gapfield {

namespace {
constexpr double kDegenerateDirection = 1e-12;
}

InclusionProfile InclusionProfile::ball(double radius, Orientation o,
                                        int lateral_dim) {
  if (radius <= 0.0) throw DomainError("ball radius must be positive");
  InclusionProfile p;
  p.family_ = Family::Ball;
  p.orientation_ = o;
  p.lateral_dim_ = lateral_dim;
  p.radius_ = radius;
  return p;
}

InclusionProfile InclusionProfile::quadratic(const LatMat& Q, Orientation o) {
  if (Q.rows() != Q.cols()) throw DomainError("Q must be square");
  if (!Q.isApprox(Q.transpose(), 0.0))
    throw DomainError("Q must be symmetric");
  Eigen::SelfAdjointEigenSolver<LatMat> es(Q);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw DomainError("Q must be positive definite");
  InclusionProfile p;
  p.family_ = Family::Quadratic;
  p.orientation_ = o;
  p.lateral_dim_ = static_cast<int>(Q.rows());
  p.Q_ = Q;
  return p;
}

InclusionProfile InclusionProfile::monomial_sum(
    const std::vector<double>& coeffs, Orientation o, int lateral_dim) {
  if (coeffs.empty()) throw DomainError("monomial profile needs coefficients");
  InclusionProfile p;
  p.family_ = Family::MonomialSum;
  p.orientation_ = o;
  p.lateral_dim_ = lateral_dim;
  p.coeffs_ = coeffs;
  return p;
}

double InclusionProfile::domain_radius() const {
  if (family_ == Family::Ball) return radius_;
  return std::numeric_limits<double>::infinity();
}

double InclusionProfile::shape(const LatVec& xp) const {
  switch (family_) {
    case Family::Ball: {
      const double s2 = xp.squaredNorm();
      if (s2 >= radius_ * radius_)
        throw DomainError("point outside ball profile domain");
      return radius_ - std::sqrt(radius_ * radius_ - s2);
    }
    case Family::Quadratic:
      return 0.5 * xp.dot(Q_ * xp);
    case Family::MonomialSum: {
      const double s2 = xp.squaredNorm();
      double v = 0.0, pw = s2;
      for (double c : coeffs_) {
        v += c * pw;
        pw *= s2;
      }
      return v;
    }
  }
  return 0.0;
}

LatVec InclusionProfile::shape_gradient(const LatVec& xp) const {
  switch (family_) {
    case Family::Ball: {
      const double s2 = xp.squaredNorm();
      if (s2 >= radius_ * radius_)
        throw DomainError("point outside ball profile domain");
      return xp / std::sqrt(radius_ * radius_ - s2);
    }
    case Family::Quadratic:
      return Q_ * xp;
    case Family::MonomialSum: {
      const double s2 = xp.squaredNorm();
      double scal = 0.0, pw = 1.0;
      for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        scal += coeffs_[k] * 2.0 * static_cast<double>(k + 1) * pw;
        pw *= s2;
      }
      return scal * xp;
    }
  }
  return LatVec::Zero(lateral_dim_);
}

LatMat InclusionProfile::shape_hessian(const LatVec& xp) const {
  const int m = lateral_dim_;
  switch (family_) {
    case Family::Ball: {
      const double s2 = xp.squaredNorm();
      if (s2 >= radius_ * radius_)
        throw DomainError("point outside ball profile domain");
      const double s = std::sqrt(radius_ * radius_ - s2);
      return LatMat::Identity(m, m) / s + (xp * xp.transpose()) / (s * s * s);
    }
    case Family::Quadratic:
      return Q_;
    case Family::MonomialSum: {
      const double s2 = xp.squaredNorm();
      // d/dx [ sum 2k c_k |x|^(2k-2) x ] = sum 2k c_k [ |x|^(2k-2) I
      //   + (2k-2)|x|^(2k-4) x x^T ]
      double aI = 0.0, axx = 0.0, pw = 1.0, pw2 = 0.0;
      for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        const double kk = static_cast<double>(k + 1);
        aI += coeffs_[k] * 2.0 * kk * pw;
        if (k >= 1) axx += coeffs_[k] * 2.0 * kk * (2.0 * kk - 2.0) * pw2;
        pw2 = pw;
        pw *= s2;
      }
      return aI * LatMat::Identity(m, m) + axx * (xp * xp.transpose());
    }
  }
  return LatMat::Zero(m, m);
}

double InclusionProfile::value(const LatVec& xp) const {
  return orientation_ == Orientation::Upper ? shape(xp) : -shape(xp);
}

LatVec InclusionProfile::gradient(const LatVec& xp) const {
  return orientation_ == Orientation::Upper ? shape_gradient(xp)
                                            : LatVec(-shape_gradient(xp));
}

LatMat InclusionProfile::hessian(const LatVec& xp) const {
  return orientation_ == Orientation::Upper ? shape_hessian(xp)
                                            : LatMat(-shape_hessian(xp));
}

GapGeometry::GapGeometry(InclusionProfile f, InclusionProfile g,
                         double epsilon, double R0, double kappa, int dim)
    : f_(std::move(f)), g_(std::move(g)), epsilon_(epsilon), R0_(R0),
      kappa_(kappa), dim_(dim) {
  if (dim_ != 2 && dim_ != 3) throw DomainError("dimension must be 2 or 3");
  if (epsilon_ <= 0.0) throw DomainError("epsilon must be positive");
  if (R0_ <= 0.0) throw DomainError("R0 must be positive");
  if (kappa_ <= 0.0) throw DomainError("kappa must be positive");
  if (f_.orientation() != Orientation::Upper ||
      g_.orientation() != Orientation::Lower)
    throw DomainError("gap needs an upper f and a lower g profile");
  if (f_.lateral_dim() != dim_ - 1 || g_.lateral_dim() != dim_ - 1)
    throw DomainError("profile lateral dimension mismatch");
  if (R0_ > f_.domain_radius() || R0_ > g_.domain_radius())
    throw DomainError("R0 exceeds profile domain");
  r0_ = std::min(R0_ / 4.0, 0.3 * R0_);
  if (epsilon_ > r0_ * r0_)
    throw DomainError("epsilon must satisfy epsilon <= r0^2");
}

GapGeometry GapGeometry::unit_balls(double epsilon, double R0, int dim) {
  return GapGeometry(
      InclusionProfile::ball(1.0, Orientation::Upper, dim - 1),
      InclusionProfile::ball(1.0, Orientation::Lower, dim - 1), epsilon, R0,
      2.0, dim);
}

GapGeometry GapGeometry::quadratic_pair(const LatMat& Q, double epsilon,
                                        double R0, int dim) {
  Eigen::SelfAdjointEigenSolver<LatMat> es(Q);
  return GapGeometry(
      InclusionProfile::quadratic(Q, Orientation::Upper),
      InclusionProfile::quadratic(Q, Orientation::Lower), epsilon, R0,
      // f - g = x'^T Q x', so the relative-convexity constant is 2 min eig(Q).
      2.0 * es.eigenvalues().minCoeff(), dim);
}

double GapGeometry::gap_height(const LatVec& xp) const {
  if (xp.norm() >= R0_)
    throw DomainError("gap_height: lateral point outside |x'| < R0");
  return epsilon_ + f_.value(xp) - g_.value(xp);
}

double GapGeometry::delta_scale(const LatVec& x0p) const {
  if (x0p.norm() >= R0_)
    throw DomainError("delta_scale: lateral point outside |x'| < R0");
  return std::sqrt(epsilon_ + x0p.squaredNorm());
}

double GapGeometry::retracted_gap_height(const LatVec& x0p, double r) const {
  LatVec dir;
  const double norm = x0p.norm();
  if (norm < kDegenerateDirection) {
    // |x0'| -> 0 limit: the direction is immaterial for radially symmetric
    // profiles; fix e_1.
    dir = LatVec::Zero(lateral_dim());
    dir[0] = 1.0;
  } else {
    dir = x0p / norm;
  }
  return gap_height(x0p - (r / 4.0) * dir);
}

VecN GapGeometry::boundary_normal(const LatVec& xp, Orientation side) const {
  if (xp.norm() >= R0_)
    throw DomainError("boundary_normal: lateral point outside |x'| < R0");
  VecN nu(dim_);
  if (side == Orientation::Upper) {
    nu.head(dim_ - 1) = -f_.gradient(xp);
    nu[dim_ - 1] = 1.0;
  } else {
    nu.head(dim_ - 1) = g_.gradient(xp);
    nu[dim_ - 1] = -1.0;
  }
  return nu / nu.norm();
}

ConvexityReport GapGeometry::verify_relative_convexity(
    int sample_count) const {
  if (sample_count < 10)
    throw DomainError("verify_relative_convexity: sample_count >= 10");
  ConvexityReport rep;
  rep.min_eig = std::numeric_limits<double>::infinity();
  rep.worst_point = LatVec::Zero(lateral_dim());
  const int m = lateral_dim();
  // Quasi-uniform samples of the lateral disk |x'| < R0: a sunflower spiral
  // for m = 2, symmetric ticks for m = 1.  Both include the origin.
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < sample_count; ++k) {
    LatVec xp(m);
    if (m == 1) {
      xp[0] = R0_ * 0.999 * (2.0 * k / (sample_count - 1.0) - 1.0);
    } else {
      const double rad =
          R0_ * 0.999 * std::sqrt((k + 0.5) / static_cast<double>(sample_count));
      const double th = golden * k;
      xp[0] = rad * std::cos(th);
      xp[1] = rad * std::sin(th);
    }
    const LatMat H = f_.hessian(xp) - g_.hessian(xp);
    double lo;
    if (m == 1) {
      lo = H(0, 0);
    } else {
      Eigen::SelfAdjointEigenSolver<LatMat> es(H);
      lo = es.eigenvalues().minCoeff();
    }
    if (lo < rep.min_eig) {
      rep.min_eig = lo;
      rep.worst_point = xp;
    }
  }
  rep.pass = rep.min_eig >= kappa_;
  return rep;
}

GapSubdomain::GapSubdomain(const GapGeometry& geom, const LatVec& x0p,
                           double r)
    : center(x0p), radius(r) {
  if (r <= 0.0 || r > geom.R0())
    throw DomainError("GapSubdomain: radius must satisfy 0 < r <= R0");
}

bool GapSubdomain::contains_lateral(const LatVec& xp) const {
  return (xp - center).norm() < radius;
}

bool GapSubdomain::in_annulus(const LatVec& xp) const {
  const double d = (xp - center).norm();
  return d < radius && d >= 0.5 * radius;
}

}  // namespace gapfield
