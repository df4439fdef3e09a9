#pragma once

#include <cstdint>
#include <vector>

#include "gapfield/geometry.hpp"
#include "gapfield/types.hpp"

namespace gapfield {

/// Tensor-product grid on a flattened domain.  The last axis is vertical and
/// spans exactly [-half_height, +half_height]; the others are lateral and
/// symmetric about 0.  Node ordering is row-major with the vertical index
/// fastest.
class TensorGrid {
 public:
  explicit TensorGrid(std::vector<std::vector<double>> axes);

  int dim() const { return static_cast<int>(axes_.size()); }
  int vertical_axis() const { return dim() - 1; }
  const std::vector<double>& axis(int d) const {
    return axes_[static_cast<std::size_t>(d)];
  }
  int size(int d) const {
    return static_cast<int>(axes_[static_cast<std::size_t>(d)].size());
  }
  std::int64_t node_count() const { return node_count_; }

  std::int64_t index(const int* multi) const;
  void unindex(std::int64_t lin, int* multi) const;
  VecN coord(const int* multi) const;
  VecN coord(std::int64_t lin) const;

  // Dual (control-volume) width around node i of axis d; halved at the ends.
  double dual_width(int d, int i) const {
    return dual_[static_cast<std::size_t>(d)][static_cast<std::size_t>(i)];
  }
  double spacing(int d, int i) const {  // t[i+1] - t[i]
    const auto& a = axes_[static_cast<std::size_t>(d)];
    return a[static_cast<std::size_t>(i + 1)] - a[static_cast<std::size_t>(i)];
  }
  // True if the node touches the boundary of a lateral axis.
  bool on_lateral_boundary(const int* multi) const;
  // Nearest node index along axis d for a coordinate value.
  int nearest_index(int d, double value) const;

 private:
  std::vector<std::vector<double>> axes_;
  std::vector<std::vector<double>> dual_;
  std::vector<std::int64_t> stride_;
  std::int64_t node_count_ = 0;
};

/// Nodal scalar values on a TensorGrid.
struct DiscreteField {
  const TensorGrid* grid = nullptr;
  std::vector<double> values;

  DiscreteField() = default;
  explicit DiscreteField(const TensorGrid& g)
      : grid(&g), values(static_cast<std::size_t>(g.node_count()), 0.0) {}
};

/// Lateral axes graded so that the spacing at position t obeys
/// h <= c_grade * sqrt(eps + t^2); the marching construction is rescaled to
/// end exactly at the extent, which only tightens the bound.  Vertical axis
/// uniform on [-half_height, half_height].
TensorGrid build_graded_grid(const GapGeometry& geom, double lateral_extent,
                             int target_cells_per_axis, double c_grade,
                             int vertical_cells, double half_height = 1.0);

// Single graded lateral axis (exposed for tests).
std::vector<double> graded_axis(double epsilon, double extent, double c_grade,
                                int target_cells);

// Uniform axis helper.
std::vector<double> uniform_axis(double lo, double hi, int cells);

}  // namespace gapfield
