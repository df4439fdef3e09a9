#include "gapfield/assemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>
#include <thread>

namespace gapfield {

BoundaryData BoundaryData::linear(const VecN& direction) {
  BoundaryData b;
  b.dir_ = direction;
  return b;
}

BoundaryData BoundaryData::harmonic_quadratic(const VecN& direction,
                                              double q) {
  BoundaryData b;
  b.dir_ = direction;
  b.quad_ = q;
  return b;
}

double BoundaryData::eval(const VecN& x) const {
  double v = dir_.dot(x);
  if (quad_ != 0.0) {
    const int n = static_cast<int>(x.size());
    const double rest = x.squaredNorm() - x[0] * x[0];
    v += quad_ * (x[0] * x[0] - rest / static_cast<double>(n - 1));
  }
  return v;
}

double LinearSystem::max_abs_entry() const {
  double m = 0.0;
  for (double v : val) m = std::max(m, std::abs(v));
  return m;
}

double LinearSystem::symmetry_defect() const {
  // Probe A_ij against A_ji through binary search in row j.
  double defect = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      const std::int64_t j = col[static_cast<std::size_t>(k)];
      double aji = 0.0;
      for (std::int64_t k2 = row_ptr[j]; k2 < row_ptr[j + 1]; ++k2)
        if (col[static_cast<std::size_t>(k2)] == i) {
          aji = val[static_cast<std::size_t>(k2)];
          break;
        }
      if (dirichlet[static_cast<std::size_t>(i)] ||
          dirichlet[static_cast<std::size_t>(j)])
        continue;
      defect = std::max(defect,
                        std::abs(val[static_cast<std::size_t>(k)] - aji));
    }
  }
  return defect;
}

double LinearSystem::max_row_sum() const {
  double m = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::int64_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      s += val[static_cast<std::size_t>(k)];
    m = std::max(m, std::abs(s));
  }
  return m;
}

AssemblyCoefficient pushforward_coefficient(const FlattenMap& map,
                                            const CoefficientField& a) {
  AssemblyCoefficient c;
  c.eval = [&map, &a](const VecN& z) { return map.pushforward(a, z); };
  return c;
}

AssemblyCoefficient direct_coefficient(const CoefficientField& a) {
  AssemblyCoefficient c;
  c.eval = [&a](const VecN& z) { return a.eval(z); };
  if (const LayeredPartition* p = a.partition())
    c.vertical_cuts.assign(p->cuts.begin() + 1, p->cuts.end() - 1);
  return c;
}

namespace {

// Symmetric component storage: (d,j) with d <= j packed row-major.
inline int sym_index(int n, int d, int j) {
  if (d > j) std::swap(d, j);
  int idx = 0;
  for (int r = 0; r < d; ++r) idx += n - r;
  return idx + (j - d);
}

struct DiffStencil {
  int offsets[3];
  double weights[3];
  int count;
};

// Derivative of the interpolating quadratic; falls back to the two-point
// difference at the ends so all offsets stay within {-1,0,1}.
DiffStencil diff_stencil(const std::vector<double>& t, int i) {
  DiffStencil s{};
  const int n = static_cast<int>(t.size());
  if (i == 0) {
    const double h = t[1] - t[0];
    s.count = 2;
    s.offsets[0] = 0;
    s.offsets[1] = 1;
    s.weights[0] = -1.0 / h;
    s.weights[1] = 1.0 / h;
  } else if (i == n - 1) {
    const double h = t[static_cast<std::size_t>(n - 1)] -
                     t[static_cast<std::size_t>(n - 2)];
    s.count = 2;
    s.offsets[0] = -1;
    s.offsets[1] = 0;
    s.weights[0] = -1.0 / h;
    s.weights[1] = 1.0 / h;
  } else {
    const double hm = t[static_cast<std::size_t>(i)] -
                      t[static_cast<std::size_t>(i - 1)];
    const double hp = t[static_cast<std::size_t>(i + 1)] -
                      t[static_cast<std::size_t>(i)];
    s.count = 3;
    s.offsets[0] = -1;
    s.offsets[1] = 0;
    s.offsets[2] = 1;
    s.weights[0] = -hp / (hm * (hm + hp));
    s.weights[1] = (hp - hm) / (hm * hp);
    s.weights[2] = hm / (hp * (hm + hp));
  }
  return s;
}

struct Workspace {
  const TensorGrid* grid;
  int n;
  int ncomp;
  const std::vector<double>* bnode;
  const std::vector<std::uint8_t>* dirichlet;
  const std::vector<double>* dirichlet_value;
  // per-axis precomputed stencils
  std::vector<std::vector<DiffStencil>> stencils;
  // vertical edge conductances (per vertical interval, shared lateral factor
  // applied later): sigma[k] such that flux coef = area * sigma[k]
  // (only the vertical axis can carry coefficient cuts)
  std::vector<double> vertical_sigma_override;  // empty if unused
};

// scratch slot for a neighbor offset in {-1,0,1}^n
inline int slot_of(const int* off, int n) {
  int s = 0;
  for (int d = 0; d < n; ++d) s = s * 3 + (off[d] + 1);
  return s;
}

}  // namespace

LinearSystem assemble(const TensorGrid& grid, const AssemblyCoefficient& coeff,
                      const std::function<double(const VecN&)>& dirichlet_value,
                      const AssembleOptions& options) {
  const int n = grid.dim();
  const std::int64_t N = grid.node_count();
  const int ncomp = n * (n + 1) / 2;
  const int vax = grid.vertical_axis();

  // Interior must be nonempty in every direction.
  for (int d = 0; d < n; ++d)
    if (grid.size(d) < 3 && !(options.all_natural))
      throw DomainError("assemble: empty interior");

  // ---- node coefficient samples + SPD check -------------------------------
  std::vector<double> bnode(static_cast<std::size_t>(N) * ncomp);
  {
    int multi[3];
    for (std::int64_t p = 0; p < N; ++p) {
      grid.unindex(p, multi);
      const VecN z = grid.coord(multi);
      MatN b = coeff.eval(z);
      if (options.flip_bn1 && n >= 2) {
        b(0, n - 1) = -b(0, n - 1);
        b(n - 1, 0) = -b(n - 1, 0);
      }
      // Sylvester minors
      bool spd = b(0, 0) > 0.0;
      if (n >= 2 && spd)
        spd = b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0) > 0.0;
      if (n >= 3 && spd) spd = b.determinant() > 0.0;
      if (!spd) {
        std::ostringstream os;
        os << "assemble: coefficient not SPD at z = (";
        for (int d = 0; d < n; ++d) os << (d ? "," : "") << z[d];
        os << ")";
        throw AssemblyError(os.str());
      }
      for (int d = 0; d < n; ++d)
        for (int j = d; j < n; ++j)
          bnode[static_cast<std::size_t>(p) * ncomp + sym_index(n, d, j)] =
              b(d, j);
    }
  }

  // ---- Dirichlet mask ------------------------------------------------------
  std::vector<std::uint8_t> dir(static_cast<std::size_t>(N), 0);
  std::vector<double> dval(static_cast<std::size_t>(N), 0.0);
  if (!options.all_natural) {
    int multi[3];
    for (std::int64_t p = 0; p < N; ++p) {
      grid.unindex(p, multi);
      bool on = grid.on_lateral_boundary(multi);
      if (!options.natural_top_bottom)
        on = on || multi[vax] == 0 || multi[vax] == grid.size(vax) - 1;
      if (on) {
        dir[static_cast<std::size_t>(p)] = 1;
        dval[static_cast<std::size_t>(p)] = dirichlet_value(grid.coord(multi));
      }
    }
  }

  // ---- per-axis stencils ---------------------------------------------------
  std::vector<std::vector<DiffStencil>> stencils(static_cast<std::size_t>(n));
  for (int d = 0; d < n; ++d) {
    stencils[static_cast<std::size_t>(d)].resize(
        static_cast<std::size_t>(grid.size(d)));
    for (int i = 0; i < grid.size(d); ++i)
      stencils[static_cast<std::size_t>(d)][static_cast<std::size_t>(i)] =
          diff_stencil(grid.axis(d), i);
  }

  // Vertical edge conductance: series (harmonic) combination across cuts,
  // arithmetic node mean otherwise.
  const bool has_cuts = !coeff.vertical_cuts.empty();
  auto vertical_edge_sigma = [&](const int* multi, int iv) -> double {
    const auto& za = grid.axis(vax);
    const double z0 = za[static_cast<std::size_t>(iv)];
    const double z1 = za[static_cast<std::size_t>(iv + 1)];
    // Series resistance of the sub-segments between cuts, each sampled at
    // its midpoint (a single-layer point, so the one-sided limits never
    // enter).  Without interior cuts this is the plain midpoint sample.
    std::vector<double> pts{z0};
    for (double c : coeff.vertical_cuts)
      if (c > z0 && c < z1) pts.push_back(c);
    pts.push_back(z1);
    double resist = 0.0;
    VecN z = grid.coord(multi);
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
      z[vax] = 0.5 * (pts[s] + pts[s + 1]);
      const MatN b = coeff.eval(z);
      resist += (pts[s + 1] - pts[s]) / b(n - 1, n - 1);
    }
    return 1.0 / resist;
  };

  // ---- row computation (gather form) --------------------------------------
  const int nslots = n == 1 ? 3 : (n == 2 ? 9 : 27);
  auto compute_row = [&](std::int64_t p, double* slots, double* rhs_out) {
    std::fill(slots, slots + nslots, 0.0);
    *rhs_out = 0.0;
    int multi[3];
    grid.unindex(p, multi);
    if (dir[static_cast<std::size_t>(p)]) {
      int zero[3] = {0, 0, 0};
      slots[slot_of(zero, n)] = 1.0;
      *rhs_out = dval[static_cast<std::size_t>(p)];
      return;
    }
    double dualw[3];
    for (int d = 0; d < n; ++d) dualw[d] = grid.dual_width(d, multi[d]);
    // two-point fluxes of the diagonal coefficients
    for (int d = 0; d < n; ++d) {
      double face_area = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != d) face_area *= dualw[j];
      const int bd = sym_index(n, d, d);
      for (int side = -1; side <= 1; side += 2) {
        const int i = multi[d];
        if (i + side < 0 || i + side >= grid.size(d)) continue;
        double sigma;
        if (d == vax && has_cuts) {
          sigma = vertical_edge_sigma(multi, side < 0 ? i - 1 : i);
        } else {
          int m2[3];
          std::memcpy(m2, multi, sizeof(m2));
          m2[d] = i + side;
          const std::int64_t q = grid.index(m2);
          const double h = side < 0 ? grid.spacing(d, i - 1) : grid.spacing(d, i);
          sigma = 0.5 *
                  (bnode[static_cast<std::size_t>(p) * ncomp + bd] +
                   bnode[static_cast<std::size_t>(q) * ncomp + bd]) /
                  h;
        }
        const double T = sigma * face_area;
        int off0[3] = {0, 0, 0};
        int off1[3] = {0, 0, 0};
        off1[d] = side;
        slots[slot_of(off0, n)] += T;
        slots[slot_of(off1, n)] -= T;
      }
    }
    // paired cross-term quadrature
    for (int d = 0; d < n; ++d) {
      for (int j = 0; j < n; ++j) {
        if (j == d) continue;
        const int bdj = sym_index(n, d, j);
        // K differs from p only in axis j; find the stencil weight K gives p.
        for (int kj = multi[j] - 1; kj <= multi[j] + 1; ++kj) {
          if (kj < 0 || kj >= grid.size(j)) continue;
          const DiffStencil& sj =
              stencils[static_cast<std::size_t>(j)][static_cast<std::size_t>(kj)];
          double w_to_p = 0.0;
          for (int a = 0; a < sj.count; ++a)
            if (kj + sj.offsets[a] == multi[j]) w_to_p = sj.weights[a];
          if (w_to_p == 0.0) continue;
          int mk[3];
          std::memcpy(mk, multi, sizeof(mk));
          mk[j] = kj;
          const std::int64_t K = grid.index(mk);
          double VK = 1.0;
          for (int dd = 0; dd < n; ++dd) VK *= grid.dual_width(dd, mk[dd]);
          const double cK =
              VK * bnode[static_cast<std::size_t>(K) * ncomp + bdj] * w_to_p;
          if (cK == 0.0) continue;
          const DiffStencil& sd =
              stencils[static_cast<std::size_t>(d)]
                      [static_cast<std::size_t>(mk[d])];
          for (int a = 0; a < sd.count; ++a) {
            int off[3] = {0, 0, 0};
            off[j] = kj - multi[j];
            off[d] += sd.offsets[a];
            slots[slot_of(off, n)] += cK * sd.weights[a];
          }
        }
      }
    }
    // fold Dirichlet couplings into the right-hand side
    for (int s = 0; s < nslots; ++s) {
      if (slots[s] == 0.0) continue;
      int off[3] = {0, 0, 0};
      int rem = s;
      for (int d = n - 1; d >= 0; --d) {
        off[d] = rem % 3 - 1;
        rem /= 3;
      }
      int mq[3];
      bool self = true;
      for (int d = 0; d < n; ++d) {
        mq[d] = multi[d] + off[d];
        self = self && off[d] == 0;
      }
      if (self) continue;
      const std::int64_t q = grid.index(mq);
      if (dir[static_cast<std::size_t>(q)]) {
        *rhs_out -= slots[s] * dval[static_cast<std::size_t>(q)];
        slots[s] = 0.0;
      }
    }
  };

  // ---- two passes: count, then fill ---------------------------------------
  LinearSystem sys;
  sys.n = N;
  sys.row_ptr.assign(static_cast<std::size_t>(N) + 1, 0);
  sys.rhs.assign(static_cast<std::size_t>(N), 0.0);
  sys.dirichlet = dir;

  const int nthreads = std::max(1, options.threads);
  auto count_range = [&](std::int64_t lo, std::int64_t hi) {
    std::vector<double> slots(static_cast<std::size_t>(nslots));
    double r;
    for (std::int64_t p = lo; p < hi; ++p) {
      compute_row(p, slots.data(), &r);
      std::int64_t c = 0;
      for (int s = 0; s < nslots; ++s)
        if (slots[static_cast<std::size_t>(s)] != 0.0) ++c;
      sys.row_ptr[static_cast<std::size_t>(p) + 1] = c;
    }
  };
  if (nthreads == 1) {
    count_range(0, N);
  } else {
    std::vector<std::thread> ts;
    for (int t = 0; t < nthreads; ++t)
      ts.emplace_back(count_range, N * t / nthreads, N * (t + 1) / nthreads);
    for (auto& th : ts) th.join();
  }
  for (std::int64_t p = 0; p < N; ++p)
    sys.row_ptr[static_cast<std::size_t>(p) + 1] +=
        sys.row_ptr[static_cast<std::size_t>(p)];
  const std::int64_t nnz = sys.row_ptr.back();
  sys.col.assign(static_cast<std::size_t>(nnz), 0);
  sys.val.assign(static_cast<std::size_t>(nnz), 0.0);
  sys.diag.assign(static_cast<std::size_t>(N), -1);

  auto fill_range = [&](std::int64_t lo, std::int64_t hi) {
    std::vector<double> slots(static_cast<std::size_t>(nslots));
    int multi[3];
    for (std::int64_t p = lo; p < hi; ++p) {
      double r;
      compute_row(p, slots.data(), &r);
      sys.rhs[static_cast<std::size_t>(p)] = r;
      grid.unindex(p, multi);
      std::int64_t at = sys.row_ptr[static_cast<std::size_t>(p)];
      for (int s = 0; s < nslots; ++s) {
        const double v = slots[static_cast<std::size_t>(s)];
        if (v == 0.0) continue;
        int off[3] = {0, 0, 0};
        int rem = s;
        for (int d = n - 1; d >= 0; --d) {
          off[d] = rem % 3 - 1;
          rem /= 3;
        }
        int mq[3];
        for (int d = 0; d < n; ++d) mq[d] = multi[d] + off[d];
        const std::int64_t q = grid.index(mq);
        sys.col[static_cast<std::size_t>(at)] = static_cast<std::int32_t>(q);
        sys.val[static_cast<std::size_t>(at)] = v;
        if (q == p) sys.diag[static_cast<std::size_t>(p)] = at;
        ++at;
      }
    }
  };
  if (nthreads == 1) {
    fill_range(0, N);
  } else {
    std::vector<std::thread> ts;
    for (int t = 0; t < nthreads; ++t)
      ts.emplace_back(fill_range, N * t / nthreads, N * (t + 1) / nthreads);
    for (auto& th : ts) th.join();
  }
  return sys;
}

std::vector<std::pair<std::int64_t, double>> dirichlet_trace(
    const BoundaryData& bc, const FlattenMap& map, const TensorGrid& grid) {
  std::vector<std::pair<std::int64_t, double>> out;
  int multi[3];
  for (std::int64_t p = 0; p < grid.node_count(); ++p) {
    grid.unindex(p, multi);
    if (!grid.on_lateral_boundary(multi)) continue;
    out.emplace_back(p, bc.eval(map.inverse(grid.coord(multi))));
  }
  return out;
}

std::vector<double> residual(const LinearSystem& sys,
                             const std::vector<double>& x) {
  std::vector<double> r(static_cast<std::size_t>(sys.n), 0.0);
  for (std::int64_t i = 0; i < sys.n; ++i) {
    if (sys.dirichlet[static_cast<std::size_t>(i)]) continue;
    double s = -sys.rhs[static_cast<std::size_t>(i)];
    for (std::int64_t k = sys.row_ptr[static_cast<std::size_t>(i)];
         k < sys.row_ptr[static_cast<std::size_t>(i) + 1]; ++k)
      s += sys.val[static_cast<std::size_t>(k)] *
           x[static_cast<std::size_t>(sys.col[static_cast<std::size_t>(k)])];
    r[static_cast<std::size_t>(i)] = s;
  }
  return r;
}

}  // namespace gapfield
