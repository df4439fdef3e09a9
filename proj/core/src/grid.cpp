#include "gapfield/grid.hpp"

#include <algorithm>
#include <cmath>

namespace gapfield {

TensorGrid::TensorGrid(std::vector<std::vector<double>> axes)
    : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() > 3)
    throw DomainError("grid needs 1 to 3 axes");
  for (const auto& a : axes_) {
    if (a.size() < 2) throw DomainError("axis needs at least 2 nodes");
    for (std::size_t i = 1; i < a.size(); ++i)
      if (a[i] <= a[i - 1])
        throw DomainError("axis coordinates must be strictly increasing");
  }
  dual_.resize(axes_.size());
  for (std::size_t d = 0; d < axes_.size(); ++d) {
    const auto& a = axes_[d];
    auto& w = dual_[d];
    w.resize(a.size());
    w.front() = 0.5 * (a[1] - a[0]);
    w.back() = 0.5 * (a[a.size() - 1] - a[a.size() - 2]);
    for (std::size_t i = 1; i + 1 < a.size(); ++i)
      w[i] = 0.5 * (a[i + 1] - a[i - 1]);
  }
  stride_.assign(axes_.size(), 1);
  for (int d = static_cast<int>(axes_.size()) - 2; d >= 0; --d)
    stride_[static_cast<std::size_t>(d)] =
        stride_[static_cast<std::size_t>(d + 1)] *
        static_cast<std::int64_t>(axes_[static_cast<std::size_t>(d + 1)].size());
  node_count_ = stride_[0] * static_cast<std::int64_t>(axes_[0].size());
}

std::int64_t TensorGrid::index(const int* multi) const {
  std::int64_t lin = 0;
  for (std::size_t d = 0; d < axes_.size(); ++d)
    lin += stride_[d] * multi[d];
  return lin;
}

void TensorGrid::unindex(std::int64_t lin, int* multi) const {
  for (std::size_t d = 0; d < axes_.size(); ++d) {
    multi[d] = static_cast<int>(lin / stride_[d]);
    lin %= stride_[d];
  }
}

VecN TensorGrid::coord(const int* multi) const {
  VecN z(dim());
  for (int d = 0; d < dim(); ++d)
    z[d] = axes_[static_cast<std::size_t>(d)][static_cast<std::size_t>(multi[d])];
  return z;
}

VecN TensorGrid::coord(std::int64_t lin) const {
  int multi[3];
  unindex(lin, multi);
  return coord(multi);
}

bool TensorGrid::on_lateral_boundary(const int* multi) const {
  for (int d = 0; d < dim() - 1; ++d)
    if (multi[d] == 0 || multi[d] == size(d) - 1) return true;
  return false;
}

int TensorGrid::nearest_index(int d, double value) const {
  const auto& a = axes_[static_cast<std::size_t>(d)];
  const auto it = std::lower_bound(a.begin(), a.end(), value);
  if (it == a.begin()) return 0;
  if (it == a.end()) return static_cast<int>(a.size()) - 1;
  const auto i = static_cast<int>(it - a.begin());
  return (value - a[static_cast<std::size_t>(i - 1)] <=
          a[static_cast<std::size_t>(i)] - value)
             ? i - 1
             : i;
}

std::vector<double> uniform_axis(double lo, double hi, int cells) {
  if (cells < 1) throw DomainError("axis needs at least one cell");
  std::vector<double> a(static_cast<std::size_t>(cells) + 1);
  for (int i = 0; i <= cells; ++i)
    a[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(cells);
  a.front() = lo;
  a.back() = hi;
  return a;
}

std::vector<double> graded_axis(double epsilon, double extent, double c_grade,
                                int target_cells) {
  if (extent <= 0.0 || c_grade <= 0.0 || epsilon <= 0.0)
    throw DomainError("graded_axis: positive extent, c_grade, epsilon");
  const double root_eps = std::sqrt(epsilon);
  if (root_eps >= extent) {
    // No boundary layer: a uniform grid at the finest rate obeys the bound.
    const int half = std::max(2, static_cast<int>(std::ceil(
                                     extent / (c_grade * root_eps))));
    if (2 * half > target_cells)
      throw GridBudgetError("graded_axis: uniform refinement exceeds budget",
                            2 * half);
    return uniform_axis(-extent, extent, 2 * half);
  }
  // March outward from 0 with h = c_grade * sqrt(eps + t^2), then rescale so
  // the last node lands exactly on the extent (scaling by s < 1 preserves
  // h(t) <= c_grade sqrt(eps + t^2)).
  std::vector<double> half_axis{0.0};
  double t = 0.0;
  while (t < extent) {
    t += c_grade * std::sqrt(epsilon + t * t);
    half_axis.push_back(t);
  }
  const double s = extent / half_axis.back();
  for (double& v : half_axis) v *= s;
  const int cells = 2 * (static_cast<int>(half_axis.size()) - 1);
  if (cells > target_cells)
    throw GridBudgetError("graded_axis: grading policy exceeds cell budget",
                          cells);
  std::vector<double> a;
  a.reserve(half_axis.size() * 2 - 1);
  for (auto it = half_axis.rbegin(); it != half_axis.rend(); ++it)
    a.push_back(-*it);
  for (std::size_t i = 1; i < half_axis.size(); ++i) a.push_back(half_axis[i]);
  a[half_axis.size() - 1] = 0.0;
  return a;
}

TensorGrid build_graded_grid(const GapGeometry& geom, double lateral_extent,
                             int target_cells_per_axis, double c_grade,
                             int vertical_cells, double half_height) {
  if (target_cells_per_axis < 16)
    throw DomainError("build_graded_grid: target_cells >= 16 per axis");
  if (vertical_cells < 8)
    throw DomainError("build_graded_grid: vertical axis needs >= 8 cells");
  std::vector<std::vector<double>> axes;
  for (int d = 0; d < geom.lateral_dim(); ++d)
    axes.push_back(graded_axis(geom.epsilon(), lateral_extent, c_grade,
                               target_cells_per_axis));
  axes.push_back(uniform_axis(-half_height, half_height, vertical_cells));
  return TensorGrid(std::move(axes));
}

}  // namespace gapfield
