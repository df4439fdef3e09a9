#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace gapfield {

// Spatial dimension is 2 or 3 at runtime; fixed-capacity types avoid heap
// traffic in per-node loops.
using VecN = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using MatN = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;
// Lateral (n-1)-vector.
using LatVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 2, 1>;
using LatMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 2, 2>;

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AssemblyError : NumericalError {
  using NumericalError::NumericalError;
};

// b = J a J^t / det J requires det J > 0; a violation signals broken geometry.
struct OrientationError : NumericalError {
  using NumericalError::NumericalError;
};

struct DegenerateDataError : NumericalError {
  using NumericalError::NumericalError;
};

struct ResolutionError : NumericalError {
  using NumericalError::NumericalError;
};

struct GridBudgetError : NumericalError {
  GridBudgetError(const std::string& what, int required)
      : NumericalError(what), required_cells(required) {}
  int required_cells;
};

}  // namespace gapfield
