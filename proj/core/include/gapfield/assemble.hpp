#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gapfield/grid.hpp"
#include "gapfield/transform.hpp"
#include "gapfield/types.hpp"

namespace gapfield {

/// Harmonic background potential H supplying the lateral Dirichlet data.
class BoundaryData {
 public:
  // H = dir . x
  static BoundaryData linear(const VecN& direction);
  // H = dir . x + q ( x_1^2 - (|x|^2 - x_1^2)/(n-1) ), harmonic by
  // construction.
  static BoundaryData harmonic_quadratic(const VecN& direction, double q);

  double eval(const VecN& x) const;
  int dim() const { return static_cast<int>(dir_.size()); }

 private:
  BoundaryData() = default;
  VecN dir_;
  double quad_ = 0.0;
};

/// Symmetric sparse system in compressed row form.  Dirichlet rows are
/// identity rows; their couplings are folded into the right-hand side so the
/// matrix stays symmetric.
struct LinearSystem {
  std::int64_t n = 0;
  std::vector<std::int64_t> row_ptr;
  std::vector<std::int32_t> col;
  std::vector<double> val;
  std::vector<double> rhs;
  std::vector<std::uint8_t> dirichlet;
  std::vector<std::int64_t> diag;  // position of the diagonal entry per row

  double max_abs_entry() const;
  // max_i |A_ij - A_ji| over stored entries (test support).
  double symmetry_defect() const;
  // max row sum magnitude (test support).
  double max_row_sum() const;
};

/// Coefficient evaluator handed to assembly: b(z) on the flattened domain,
/// plus the vertical coordinates of coefficient jumps, if any.  Edges of the
/// vertical axis crossing a cut get a length-weighted harmonic (series)
/// conductance; everything else uses the arithmetic node mean.
struct AssemblyCoefficient {
  std::function<MatN(const VecN&)> eval;
  std::vector<double> vertical_cuts;
};

AssemblyCoefficient pushforward_coefficient(const FlattenMap& map,
                                            const CoefficientField& a);
AssemblyCoefficient direct_coefficient(const CoefficientField& a);

struct AssembleOptions {
  bool natural_top_bottom = true;  // zero conormal flux on the vertical faces
  bool all_natural = false;        // no Dirichlet rows at all (test support)
  bool flip_bn1 = false;           // fault injection: negate b^{1n} samples
  int threads = 1;
};

/// Second-order conservative finite volumes on the tensor grid:
/// two-point fluxes for the b^{dd} terms with face coefficients averaged
/// between the adjacent nodes, and cross terms b^{dj} (d != j) as paired
/// difference quadrature  sum_K V_K b^{dj}(K) (D_d w)(K) (D_j phi)(K),
/// which keeps the matrix symmetric.  The zero conormal flux on the top and
/// bottom faces is the natural condition: the boundary flux term is simply
/// omitted.
LinearSystem assemble(const TensorGrid& grid, const AssemblyCoefficient& coeff,
                      const std::function<double(const VecN&)>& dirichlet_value,
                      const AssembleOptions& options = {});

/// Dirichlet trace H(inverse(z)) on the lateral boundary nodes; returned as
/// (node index, value) pairs in node order.
std::vector<std::pair<std::int64_t, double>> dirichlet_trace(
    const BoundaryData& bc, const FlattenMap& map, const TensorGrid& grid);

// Residual b = A x - f restricted to non-Dirichlet rows (test support).
std::vector<double> residual(const LinearSystem& sys,
                             const std::vector<double>& x);

}  // namespace gapfield
