#include "gapfield/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gapfield {

LayeredPartition::LayeredPartition(std::vector<double> cut_points,
                                   double mu_exp)
    : cuts(std::move(cut_points)), mu(mu_exp) {
  if (cuts.size() < 2 || cuts.front() != -1.0 || cuts.back() != 1.0)
    throw DomainError("partition must run from -1 to 1");
  for (std::size_t i = 1; i < cuts.size(); ++i)
    if (cuts[i] <= cuts[i - 1])
      throw DomainError("partition cuts must be strictly increasing");
  if (mu <= 0.0 || mu >= 1.0) throw DomainError("mu must lie in (0,1)");
  m0 = 0;
  for (int m = 1; m <= layer_count(); ++m)
    if (cuts[m - 1] <= 0.0 && 0.0 < cuts[m]) m0 = m;
  if (m0 == 0) throw DomainError("no layer contains 0");
}

int LayeredPartition::layer_of(double xn) const {
  // Interfaces belong to the lower layer.
  const int l = layer_count();
  for (int m = 1; m <= l; ++m)
    if (xn <= cuts[m] || m == l) return m;
  return l;
}

CoefficientField CoefficientField::identity(int dim) {
  CoefficientField c;
  c.family_ = Family::Identity;
  c.dim_ = dim;
  c.lambda_ = 1.0;
  c.Lambda_ = 1.0;
  c.alpha_ = 0.5;
  c.holder_seminorm_ = 0.0;
  return c;
}

CoefficientField CoefficientField::smooth_perturbation(int dim,
                                                       double amplitude,
                                                       const VecN& wavevector) {
  if (std::abs(amplitude) >= std::sqrt(2.0))
    throw DomainError("perturbation amplitude breaks ellipticity");
  CoefficientField c;
  c.family_ = Family::SmoothPerturbation;
  c.dim_ = dim;
  c.amplitude_ = amplitude;
  c.wavevector_ = wavevector;
  // S couples axes 1 and n with spectral norm 1/sqrt(2) each sign.
  c.lambda_ = 1.0 - std::abs(amplitude) / std::sqrt(2.0);
  c.Lambda_ = 1.0 + std::abs(amplitude) / std::sqrt(2.0);
  c.alpha_ = 0.5;
  const double k = wavevector.norm();
  c.holder_seminorm_ =
      std::abs(amplitude) * std::pow(2.0, 1.0 - c.alpha_) * std::pow(k, c.alpha_);
  return c;
}

CoefficientField CoefficientField::layered(int dim,
                                           const LayeredPartition& part,
                                           double amplitude,
                                           std::uint64_t seed) {
  if (amplitude < 0.0 || amplitude > 0.3)
    throw DomainError("layered amplitude must lie in [0, 0.3]");
  CoefficientField c;
  c.family_ = Family::Layered;
  c.dim_ = dim;
  c.partition_ = part;
  c.alpha_ = part.mu;
  c.lambda_ = 1.0 - amplitude;
  c.Lambda_ = 1.0 + amplitude;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double max_semi = 0.0;
  for (int m = 1; m <= part.layer_count(); ++m) {
    LayerWave w;
    w.amp = amplitude * (0.5 + 0.5 * u01(rng));
    w.freq = 2.0 + 4.0 * u01(rng);
    VecN dir(dim);
    for (int d = 0; d < dim; ++d) dir[d] = 2.0 * u01(rng) - 1.0;
    if (dir.norm() < 1e-6) dir.setOnes();
    w.dir = dir / dir.norm();
    w.phase = 2.0 * M_PI * u01(rng);
    c.layers_.push_back(w);
    const double semi = std::sqrt(static_cast<double>(dim)) * w.amp *
                        std::pow(2.0, 1.0 - part.mu) * std::pow(w.freq, part.mu);
    max_semi = std::max(max_semi, semi);
  }
  c.holder_seminorm_ = max_semi;
  return c;
}

double CoefficientField::layer_scalar(int m, const VecN& x) const {
  if (frozen_) return frozen_value_[static_cast<std::size_t>(m - 1)];
  const LayerWave& w = layers_[static_cast<std::size_t>(m - 1)];
  return 1.0 + w.amp * std::cos(w.freq * w.dir.dot(x) + w.phase);
}

MatN CoefficientField::eval(const VecN& x) const {
  switch (family_) {
    case Family::Identity:
      return MatN::Identity(dim_, dim_);
    case Family::SmoothPerturbation: {
      MatN a = MatN::Identity(dim_, dim_);
      const double s =
          amplitude_ * std::sin(wavevector_.dot(x)) / std::sqrt(2.0);
      a(0, dim_ - 1) += s;
      a(dim_ - 1, 0) += s;
      return a;
    }
    case Family::Layered: {
      const int m = partition_.layer_of(x[dim_ - 1]);
      return layer_scalar(m, x) * MatN::Identity(dim_, dim_);
    }
  }
  return MatN::Identity(dim_, dim_);
}

double CoefficientField::max_layer_holder_norm() const {
  if (family_ != Family::Layered)
    return std::sqrt(static_cast<double>(dim_)) * Lambda_ + holder_seminorm_;
  const double rootn = std::sqrt(static_cast<double>(dim_));
  double best = 0.0;
  for (const LayerWave& w : layers_) {
    const double sup = rootn * (1.0 + w.amp);
    const double semi = rootn * w.amp * std::pow(2.0, 1.0 - partition_.mu) *
                        std::pow(w.freq, partition_.mu);
    best = std::max(best, sup + semi);
  }
  return best;
}

CoefficientField CoefficientField::piecewise_constant_approx() const {
  if (family_ != Family::Layered) return *this;
  CoefficientField c = *this;
  c.frozen_ = true;
  c.frozen_value_.assign(static_cast<std::size_t>(partition_.layer_count()),
                         1.0);
  const int l = partition_.layer_count();
  for (int m = 1; m <= l; ++m) {
    VecN anchor = VecN::Zero(dim_);
    if (m > partition_.m0) {
      anchor[dim_ - 1] = partition_.cuts[static_cast<std::size_t>(m - 1)];
    } else if (m < partition_.m0) {
      anchor[dim_ - 1] = partition_.cuts[static_cast<std::size_t>(m)];
    }  // m == m0: anchor stays the origin, value a(0)
    c.frozen_value_[static_cast<std::size_t>(m - 1)] = layer_scalar(m, anchor);
  }
  c.holder_seminorm_ = 0.0;
  return c;
}

}  // namespace gapfield
