#include "gapfield/solve.hpp"

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <thread>

namespace gapfield {

namespace {

double dot_serial(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) {
  return std::sqrt(dot_serial(a, a));
}

}  // namespace

void spmv(const LinearSystem& sys, const std::vector<double>& x,
          std::vector<double>& y, int threads) {
  y.resize(static_cast<std::size_t>(sys.n));
  auto range = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      double s = 0.0;
      for (std::int64_t k = sys.row_ptr[static_cast<std::size_t>(i)];
           k < sys.row_ptr[static_cast<std::size_t>(i) + 1]; ++k)
        s += sys.val[static_cast<std::size_t>(k)] *
             x[static_cast<std::size_t>(sys.col[static_cast<std::size_t>(k)])];
      y[static_cast<std::size_t>(i)] = s;
    }
  };
  if (threads <= 1) {
    range(0, sys.n);
    return;
  }
  std::vector<std::thread> ts;
  for (int t = 0; t < threads; ++t)
    ts.emplace_back(range, sys.n * t / threads, sys.n * (t + 1) / threads);
  for (auto& th : ts) th.join();
}

Preconditioner Preconditioner::build(const LinearSystem& sys, PrecondKind kind,
                                     double ssor_omega) {
  Preconditioner p;
  p.kind_ = kind;
  p.omega_ = ssor_omega;
  if (kind == PrecondKind::None) return p;
  p.inv_diag_.resize(static_cast<std::size_t>(sys.n));
  for (std::int64_t i = 0; i < sys.n; ++i) {
    const std::int64_t di = sys.diag[static_cast<std::size_t>(i)];
    if (di < 0 || sys.val[static_cast<std::size_t>(di)] == 0.0)
      throw AssemblyError("preconditioner: zero or missing diagonal entry");
    p.inv_diag_[static_cast<std::size_t>(i)] =
        1.0 / sys.val[static_cast<std::size_t>(di)];
  }
  return p;
}

void Preconditioner::apply(const LinearSystem& sys,
                           const std::vector<double>& r,
                           std::vector<double>& z) const {
  const std::size_t N = r.size();
  z.resize(N);
  switch (kind_) {
    case PrecondKind::None:
      z = r;
      return;
    case PrecondKind::Jacobi:
      for (std::size_t i = 0; i < N; ++i) z[i] = r[i] * inv_diag_[i];
      return;
    case PrecondKind::Ssor: {
      // M = (D + wL) D^-1 (D + wU) / (w (2 - w));  z = M^-1 r.
      const double w = omega_;
      // forward: (D + wL) t = r
      for (std::int64_t i = 0; i < sys.n; ++i) {
        double s = r[static_cast<std::size_t>(i)];
        for (std::int64_t k = sys.row_ptr[static_cast<std::size_t>(i)];
             k < sys.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
          const std::int64_t j = sys.col[static_cast<std::size_t>(k)];
          if (j < i)
            s -= w * sys.val[static_cast<std::size_t>(k)] *
                 z[static_cast<std::size_t>(j)];
        }
        z[static_cast<std::size_t>(i)] = s * inv_diag_[static_cast<std::size_t>(i)];
      }
      // scale by D, then backward: (D + wU) z = t'
      for (std::int64_t i = sys.n - 1; i >= 0; --i) {
        double s = z[static_cast<std::size_t>(i)] /
                   inv_diag_[static_cast<std::size_t>(i)];
        for (std::int64_t k = sys.row_ptr[static_cast<std::size_t>(i)];
             k < sys.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
          const std::int64_t j = sys.col[static_cast<std::size_t>(k)];
          if (j > i)
            s -= w * sys.val[static_cast<std::size_t>(k)] *
                 z[static_cast<std::size_t>(j)];
        }
        z[static_cast<std::size_t>(i)] =
            s * inv_diag_[static_cast<std::size_t>(i)] * w * (2.0 - w);
      }
      return;
    }
  }
}

std::pair<std::vector<double>, SolveReport> cg_solve(const LinearSystem& sys,
                                                     const CgOptions& options) {
  if (options.tol <= 0.0 || options.tol > 1e-4)
    throw DomainError("cg_solve: tol must lie in (0, 1e-4]");
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t N = static_cast<std::size_t>(sys.n);
  SolveReport rep;
  std::vector<double> x(N, 0.0);
  if (options.warm_start) x = *options.warm_start;

  const double fnorm = norm2(sys.rhs);
  if (fnorm == 0.0) {
    rep.iterations = 0;
    rep.final_relative_residual = 0.0;
    rep.wall_time = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    return {std::vector<double>(N, 0.0), rep};
  }

  const Preconditioner M =
      Preconditioner::build(sys, options.precond, options.ssor_omega);
  std::vector<double> r(N), z(N), p(N), Ap(N);
  spmv(sys, x, Ap, options.threads);
  for (std::size_t i = 0; i < N; ++i) r[i] = sys.rhs[i] - Ap[i];
  M.apply(sys, r, z);
  p = z;
  double rz = dot_serial(r, z);
  double rnorm = norm2(r);
  rep.residual_history.push_back(rnorm / fnorm);

  int it = 0;
  while (it < options.max_iter) {
    if (rnorm / fnorm <= options.tol) {
      // guard against recurrence drift: re-check the true residual
      spmv(sys, x, Ap, options.threads);
      for (std::size_t i = 0; i < N; ++i) r[i] = sys.rhs[i] - Ap[i];
      rnorm = norm2(r);
      if (rnorm / fnorm <= options.tol) break;
      M.apply(sys, r, z);
      p = z;
      rz = dot_serial(r, z);
    }
    spmv(sys, p, Ap, options.threads);
    const double pAp = dot_serial(p, Ap);
    if (pAp <= 0.0)
      throw NotSpdError("cg_solve: negative curvature direction encountered");
    const double alpha = rz / pAp;
    for (std::size_t i = 0; i < N; ++i) x[i] += alpha * p[i];
    for (std::size_t i = 0; i < N; ++i) r[i] -= alpha * Ap[i];
    M.apply(sys, r, z);
    const double rz_new = dot_serial(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < N; ++i) p[i] = z[i] + beta * p[i];
    rnorm = norm2(r);
    ++it;
    rep.residual_history.push_back(rnorm / fnorm);
  }
  rep.iterations = it;
  rep.final_relative_residual = rnorm / fnorm;
  rep.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (rep.final_relative_residual > options.tol)
    throw NonConvergenceError("cg_solve: max_iter reached", std::move(x),
                              std::move(rep.residual_history));
  return {std::move(x), rep};
}

double lanczos_min_ritz(const LinearSystem& sys, int steps) {
  const std::size_t N = static_cast<std::size_t>(sys.n);
  steps = std::min<int>(steps, static_cast<int>(N));
  std::vector<std::vector<double>> V;
  std::vector<double> alpha, beta;
  std::vector<double> v(N), w(N);
  for (std::size_t i = 0; i < N; ++i) v[i] = std::sin(static_cast<double>(i) + 1.0);
  double nv = norm2(v);
  for (auto& vi : v) vi /= nv;
  V.push_back(v);
  for (int k = 0; k < steps; ++k) {
    spmv(sys, V.back(), w, 1);
    const double a = dot_serial(w, V.back());
    alpha.push_back(a);
    for (std::size_t i = 0; i < N; ++i) w[i] -= a * V.back()[i];
    if (k > 0)
      for (std::size_t i = 0; i < N; ++i) w[i] -= beta.back() * V[V.size() - 2][i];
    // full reorthogonalization: cheap at 30 vectors
    for (const auto& u : V) {
      const double c = dot_serial(w, u);
      for (std::size_t i = 0; i < N; ++i) w[i] -= c * u[i];
    }
    const double b = norm2(w);
    if (b < 1e-14) break;
    beta.push_back(b);
    for (auto& wi : w) wi /= b;
    V.push_back(w);
  }
  const int m = static_cast<int>(alpha.size());
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    T(i, i) = alpha[static_cast<std::size_t>(i)];
    if (i + 1 < m) {
      T(i, i + 1) = beta[static_cast<std::size_t>(i)];
      T(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  return es.eigenvalues().minCoeff();
}

}  // namespace gapfield
