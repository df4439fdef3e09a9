#pragma once

#include <optional>
#include <vector>

#include "gapfield/assemble.hpp"
#include "gapfield/types.hpp"

namespace gapfield {

struct SolveReport {
  int iterations = 0;
  double final_relative_residual = 0.0;
  double wall_time = 0.0;
  std::vector<double> residual_history;
};

struct NonConvergenceError : NumericalError {
  NonConvergenceError(const std::string& what, std::vector<double> best,
                      std::vector<double> history)
      : NumericalError(what), best_iterate(std::move(best)),
        residual_history(std::move(history)) {}
  std::vector<double> best_iterate;
  std::vector<double> residual_history;
};

struct NotSpdError : NumericalError {
  using NumericalError::NumericalError;
};

enum class PrecondKind { None, Jacobi, Ssor };

/// Symmetric positive preconditioner.  Jacobi is the baseline; SSOR uses the
/// assembled ordering (vertical index fastest), which acts like a line
/// relaxation on the stiff vertical direction.
class Preconditioner {
 public:
  static Preconditioner build(const LinearSystem& sys, PrecondKind kind,
                              double ssor_omega = 1.5);
  void apply(const LinearSystem& sys, const std::vector<double>& r,
             std::vector<double>& z) const;
  PrecondKind kind() const { return kind_; }

 private:
  PrecondKind kind_ = PrecondKind::None;
  double omega_ = 1.5;
  std::vector<double> inv_diag_;
};

struct CgOptions {
  double tol = 1e-10;
  int max_iter = 100000;
  PrecondKind precond = PrecondKind::Jacobi;
  double ssor_omega = 1.5;
  int threads = 1;
  const std::vector<double>* warm_start = nullptr;
};

/// Preconditioned conjugate gradients on the assembled SPD system.
/// Terminates at ||Ax-f||_2 / ||f||_2 <= tol (verified against the true
/// residual, not just the recurrence).  Deterministic for identical inputs:
/// dot products are fixed-order serial reductions, and the parallel
/// matrix-vector product partitions rows statically.
std::pair<std::vector<double>, SolveReport> cg_solve(
    const LinearSystem& sys, const CgOptions& options = {});

// y = A x with optional static row partitioning across threads.
void spmv(const LinearSystem& sys, const std::vector<double>& x,
          std::vector<double>& y, int threads = 1);

// Smallest Ritz value of a fixed-seed 30-step Lanczos run (SPD smoke test).
double lanczos_min_ritz(const LinearSystem& sys, int steps = 30);

}  // namespace gapfield
