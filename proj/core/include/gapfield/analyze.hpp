#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gapfield/coefficients.hpp"
#include "gapfield/grid.hpp"
#include "gapfield/solve.hpp"
#include "gapfield/transform.hpp"
#include "gapfield/types.hpp"

namespace gapfield {

/// Physical gradient of u = w o forward, reconstructed per node as
/// J^t grad_z w with J the map Jacobian at the node's preimage.  grad_z w by
/// centered differences, one-sided second-order three-point stencils at the
/// faces.
struct GradientField {
  const TensorGrid* grid = nullptr;
  std::vector<double> magnitude;   // |grad u| per node
  std::vector<double> components;  // n per node, component-major per node
};

GradientField gradient_pullback(const DiscreteField& w,
                                const FlattenMap* map = nullptr);

/// Max of |grad u| over the vertical node column nearest to lateral x0p.
double segment_max_gradient(const GradientField& gf, const FlattenMap& map,
                            const LatVec& x0p);

/// Max of |grad u| excluding nodes within `exclude_cells` of the lateral
/// Dirichlet boundary.
double max_gradient_interior(const GradientField& gf, int exclude_cells = 2);

/// sup - inf of nodal values whose physical preimages lie in Omega_{x0,r}.
double oscillation(const DiscreteField& u, const FlattenMap& map,
                   const LatVec& x0p, double r);

/// (sup/inf) of orient*u + shift over nodes in the annulus
/// Omega_{x0,r} \ Omega_{x0,r/2}; throws on non-positive shifted values.
double harnack_ratio(const DiscreteField& u, const FlattenMap& map,
                     const LatVec& x0p, double r, double shift,
                     double orient = 1.0);

struct HarnackPair {
  double ratio_from_above = 0.0;  // sup_{2r} u - u
  double ratio_from_below = 0.0;  // u - inf_{2r} u
  double max_ratio = 0.0;
  bool dim2_warning = false;  // annulus disconnects in dimension 2
};

/// Both shifted ratios of the oscillation-decay argument on one annulus.
HarnackPair harnack_ratio_pair(const DiscreteField& u, const FlattenMap& map,
                               const LatVec& x0p, double r);

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double r_squared = 1.0;
};

/// OLS on (log eps, log m); all m must be positive.
PowerLawFit fit_power_law(const std::vector<double>& eps,
                          const std::vector<double>& m);

struct OscDecayFit {
  double sigma = 0.0;  // slope of log2 osc vs log2 r
  std::vector<double> step_ratios;
  PowerLawFit fit;
};

OscDecayFit osc_decay_fit(const std::vector<double>& radii,
                          const std::vector<double>& osc);

/// Dyadic radius ladder for the oscillation/Harnack diagnostics at x0p:
/// r_max = delta^(1-gamma) capped by the domain, halving while the annulus
/// stays resolvable on the grid and r > 5 |x0p|.  The strict lower cap 5*delta
/// is recorded but not enforced; it empties the ladder at any reachable
/// epsilon.
struct OscDecayConfig {
  double gamma = 0.3;
  std::vector<double> radii;  // descending
  bool below_strict_floor = false;

  static OscDecayConfig feasible(const GapGeometry& geom, const LatVec& x0p,
                                 double gamma, double lateral_spacing,
                                 double max_lateral, int min_count = 4);
};

/// sup over dyadic r in {1, 1/2, ..., 2^-(levels-1)} of
/// r^(1-s) (mean over rS of |F|^p)^(1/p), midpoint quadrature on a scaled
/// tensor grid over the cylinder rS = {|x'|<r, |x_n|<r}.
double y_norm(const std::function<double(const VecN&)>& F, int dim, double s,
              double p, int dyadic_levels = 9, int samples_per_axis = 64);

/// Mean of F over the cylinder S by the same quadrature (the constant
/// approximation of zero-order terms).
double cylinder_mean(const std::function<double(const VecN&)>& F, int dim,
                     int samples_per_axis = 64);

struct LayerExperimentOptions {
  int lateral_cells = 128;
  int vertical_cells = 256;
  double amplitude = 0.3;
  double mu = 0.5;
  double tol = 1e-10;
  int max_iter = 50000;
  int y_norm_samples = 200;
};

struct LayerExperimentResult {
  int layers = 0;
  std::uint64_t seed = 0;
  double grad_ratio = 0.0;    // ||grad u||_inf(S/2) / ||u||_L2(S)
  double y_norm_ratio = 0.0;  // ||A - Abar||_Y^{1+mu,2} / max_m ||A||_C^mu
  int cg_iterations = 0;
};

/// Random layered coefficient on the square cylinder S = (-1,1)^2, Dirichlet
/// data H = x_1 on the whole boundary; measures the interior gradient bound
/// and the Y-norm distance to the piecewise-constant coefficients.
LayerExperimentResult layered_gradient_experiment(
    int layers, std::uint64_t seed, const LayerExperimentOptions& opts = {});

// Deterministic layer partition used by the experiment (exposed for tests).
LayeredPartition random_partition(int layers, std::uint64_t seed, double mu);

/// Max over a fixed lateral sample lattice (|x'| <= r0, midline) of
/// |grad u(x)| (eps + |x'|^2)^(1/2 - beta) / ||u||_inf.
double normalized_gradient_max(const GradientField& gf,
                               const DiscreteField& u, const FlattenMap& map,
                               double beta_hat, double r0,
                               int lattice_per_axis = 9);

/// Largest discrete Hoelder quotient |b(p)-b(q)|_F / |p-q|^alpha over sample
/// pairs of the pushforward coefficient on the local box Q_{1,delta}.
double pushforward_holder_quotient(const FlattenMap& local_map,
                                   const CoefficientField& a, double alpha,
                                   int samples_per_axis = 7);

struct EigenvalueRange {
  double min_eig = 0.0;
  double max_eig = 0.0;
};

/// Eigenvalue range of the pushforward coefficient sampled over the local
/// box Q_{1,delta}.
EigenvalueRange pushforward_eigen_range(const FlattenMap& local_map,
                                        const CoefficientField& a,
                                        int samples_per_axis = 9);

}  // namespace gapfield
