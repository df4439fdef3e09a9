#include "gapfield/analyze.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace gapfield {

namespace {

// Second-order derivative weights along one axis, three points.
void axis_derivative(const std::vector<double>& t, int i, int* offs,
                     double* wts) {
  const int n = static_cast<int>(t.size());
  auto h = [&](int a, int b) {
    return t[static_cast<std::size_t>(a)] - t[static_cast<std::size_t>(b)];
  };
  if (n == 2) {
    offs[0] = i == 0 ? 0 : -1;
    offs[1] = i == 0 ? 1 : 0;
    offs[2] = offs[1];
    wts[0] = -1.0 / h(1, 0);
    wts[1] = 1.0 / h(1, 0);
    wts[2] = 0.0;
    return;
  }
  if (i == 0) {
    const double h1 = h(1, 0), h2 = h(2, 1);
    offs[0] = 0;
    offs[1] = 1;
    offs[2] = 2;
    wts[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2));
    wts[1] = (h1 + h2) / (h1 * h2);
    wts[2] = -h1 / (h2 * (h1 + h2));
  } else if (i == n - 1) {
    const double h1 = h(n - 1, n - 2), h2 = h(n - 2, n - 3);
    offs[0] = 0;
    offs[1] = -1;
    offs[2] = -2;
    wts[0] = (2.0 * h1 + h2) / (h1 * (h1 + h2));
    wts[1] = -(h1 + h2) / (h1 * h2);
    wts[2] = h1 / (h2 * (h1 + h2));
  } else {
    const double hm = h(i, i - 1), hp = h(i + 1, i);
    offs[0] = -1;
    offs[1] = 0;
    offs[2] = 1;
    wts[0] = -hp / (hm * (hm + hp));
    wts[1] = (hp - hm) / (hm * hp);
    wts[2] = hm / (hp * (hm + hp));
  }
}

}  // namespace

GradientField gradient_pullback(const DiscreteField& w, const FlattenMap* map) {
  const TensorGrid& grid = *w.grid;
  const int n = grid.dim();
  const std::int64_t N = grid.node_count();
  GradientField gf;
  gf.grid = &grid;
  gf.magnitude.resize(static_cast<std::size_t>(N));
  gf.components.resize(static_cast<std::size_t>(N) * n);
  int multi[3], offs[3];
  double wts[3];
  for (std::int64_t p = 0; p < N; ++p) {
    grid.unindex(p, multi);
    VecN gz(n);
    for (int d = 0; d < n; ++d) {
      axis_derivative(grid.axis(d), multi[d], offs, wts);
      double s = 0.0;
      int m2[3] = {multi[0], multi[1], multi[2]};
      for (int a = 0; a < 3; ++a) {
        if (wts[a] == 0.0) continue;
        m2[d] = multi[d] + offs[a];
        s += wts[a] * w.values[static_cast<std::size_t>(grid.index(m2))];
      }
      gz[d] = s;
    }
    VecN gu;
    if (map) {
      const VecN x = map->inverse(grid.coord(multi));
      gu = map->jacobian(x).transpose() * gz;
    } else {
      gu = gz;
    }
    gf.magnitude[static_cast<std::size_t>(p)] = gu.norm();
    for (int d = 0; d < n; ++d)
      gf.components[static_cast<std::size_t>(p) * n + d] = gu[d];
  }
  return gf;
}

double segment_max_gradient(const GradientField& gf, const FlattenMap& map,
                            const LatVec& x0p) {
  const TensorGrid& grid = *gf.grid;
  const int n = grid.dim();
  int multi[3] = {0, 0, 0};
  // The lateral preimage is affine per map kind; invert it per axis.
  for (int d = 0; d < n - 1; ++d) {
    double zd = x0p[d];
    if (map.kind() == FlattenMap::Kind::Local)
      zd = 4.0 * (x0p[d] - map.center()[d]) / map.half_height();
    else if (map.kind() == FlattenMap::Kind::Annulus)
      zd = x0p[d] - map.center()[d];
    multi[d] = grid.nearest_index(d, zd);
  }
  double best = 0.0;
  for (int iv = 0; iv < grid.size(n - 1); ++iv) {
    multi[n - 1] = iv;
    best = std::max(best,
                    gf.magnitude[static_cast<std::size_t>(grid.index(multi))]);
  }
  return best;
}

double max_gradient_interior(const GradientField& gf, int exclude_cells) {
  const TensorGrid& grid = *gf.grid;
  const int n = grid.dim();
  double best = 0.0;
  int multi[3];
  for (std::int64_t p = 0; p < grid.node_count(); ++p) {
    grid.unindex(p, multi);
    bool excluded = false;
    for (int d = 0; d < n - 1; ++d)
      if (multi[d] < exclude_cells || multi[d] >= grid.size(d) - exclude_cells)
        excluded = true;
    if (!excluded)
      best = std::max(best, gf.magnitude[static_cast<std::size_t>(p)]);
  }
  return best;
}

namespace {

// Apply fn(node index) to every node whose lateral preimage lies within
// distance r of x0p.  Returns the visit count.
template <typename F>
std::int64_t for_lateral_ball(const TensorGrid& grid, const FlattenMap& map,
                              const LatVec& x0p, double r, F&& fn) {
  const int n = grid.dim();
  std::int64_t count = 0;
  int multi[3];
  const int n1 = grid.size(0);
  const int n2 = n >= 3 ? grid.size(1) : 1;
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      LatVec zp(n - 1);
      zp[0] = grid.axis(0)[static_cast<std::size_t>(i)];
      if (n >= 3) zp[1] = grid.axis(1)[static_cast<std::size_t>(j)];
      const LatVec xp = map.lateral_preimage(zp);
      if ((xp - x0p).norm() >= r) continue;
      multi[0] = i;
      if (n >= 3) multi[1] = j;
      for (int iv = 0; iv < grid.size(n - 1); ++iv) {
        multi[n - 1] = iv;
        fn(grid.index(multi));
        ++count;
      }
    }
  }
  return count;
}

}  // namespace

double oscillation(const DiscreteField& u, const FlattenMap& map,
                   const LatVec& x0p, double r) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const std::int64_t cnt =
      for_lateral_ball(*u.grid, map, x0p, r, [&](std::int64_t p) {
        const double v = u.values[static_cast<std::size_t>(p)];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      });
  if (cnt == 0)
    throw DomainError("oscillation: Omega_{x0,r} misses the grid");
  return hi - lo;
}

double harnack_ratio(const DiscreteField& u, const FlattenMap& map,
                     const LatVec& x0p, double r, double shift,
                     double orient) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::int64_t cnt = 0;
  const TensorGrid& grid = *u.grid;
  const int n = grid.dim();
  const int n1 = grid.size(0);
  const int n2 = n >= 3 ? grid.size(1) : 1;
  int multi[3];
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      LatVec zp(n - 1);
      zp[0] = grid.axis(0)[static_cast<std::size_t>(i)];
      if (n >= 3) zp[1] = grid.axis(1)[static_cast<std::size_t>(j)];
      const LatVec xp = map.lateral_preimage(zp);
      const double d = (xp - x0p).norm();
      if (d >= r || d < 0.5 * r) continue;
      multi[0] = i;
      if (n >= 3) multi[1] = j;
      for (int iv = 0; iv < grid.size(n - 1); ++iv) {
        multi[n - 1] = iv;
        const double v =
            orient * u.values[static_cast<std::size_t>(grid.index(multi))] +
            shift;
        if (v <= 0.0)
          throw DomainError("harnack_ratio: shifted field not positive");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        ++cnt;
      }
    }
  }
  if (cnt == 0) throw DomainError("harnack_ratio: empty annulus");
  return hi / lo;
}

HarnackPair harnack_ratio_pair(const DiscreteField& u, const FlattenMap& map,
                               const LatVec& x0p, double r) {
  double sup2r = -std::numeric_limits<double>::infinity();
  double inf2r = std::numeric_limits<double>::infinity();
  const std::int64_t cnt =
      for_lateral_ball(*u.grid, map, x0p, 2.0 * r, [&](std::int64_t p) {
        const double v = u.values[static_cast<std::size_t>(p)];
        sup2r = std::max(sup2r, v);
        inf2r = std::min(inf2r, v);
      });
  if (cnt == 0) throw DomainError("harnack_ratio_pair: empty Omega_{x0,2r}");
  HarnackPair hp;
  hp.dim2_warning = u.grid->dim() == 2;
  hp.ratio_from_above = harnack_ratio(u, map, x0p, r, sup2r, -1.0);
  hp.ratio_from_below = harnack_ratio(u, map, x0p, r, -inf2r, 1.0);
  hp.max_ratio = std::max(hp.ratio_from_above, hp.ratio_from_below);
  return hp;
}

PowerLawFit fit_power_law(const std::vector<double>& eps,
                          const std::vector<double>& m) {
  if (eps.size() != m.size() || eps.size() < 4)
    throw DegenerateDataError("fit_power_law: need >= 4 pairs");
  const std::size_t k = eps.size();
  std::vector<double> x(k), y(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (eps[i] <= 0.0 || m[i] <= 0.0)
      throw DegenerateDataError("fit_power_law: non-positive data");
    x[i] = std::log(eps[i]);
    y[i] = std::log(m[i]);
  }
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / static_cast<double>(k), my = sy / static_cast<double>(k);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  PowerLawFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    ssr += e * e;
  }
  f.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  f.stderr_slope =
      k > 2 ? std::sqrt(ssr / (static_cast<double>(k) - 2.0) / sxx) : 0.0;
  return f;
}

OscDecayFit osc_decay_fit(const std::vector<double>& radii,
                          const std::vector<double>& osc) {
  if (radii.size() != osc.size() || radii.size() < 4)
    throw DegenerateDataError("osc_decay_fit: need >= 4 dyadic radii");
  for (double o : osc)
    if (o <= 0.0)
      throw DegenerateDataError("osc_decay_fit: non-positive oscillation");
  OscDecayFit od;
  od.fit = fit_power_law(radii, osc);
  od.sigma = od.fit.slope;  // log-log slope equals the log2-log2 slope
  for (std::size_t i = 0; i + 1 < radii.size(); ++i)
    od.step_ratios.push_back(osc[i + 1] / osc[i]);
  return od;
}

OscDecayConfig OscDecayConfig::feasible(const GapGeometry& geom,
                                        const LatVec& x0p, double gamma,
                                        double lateral_spacing,
                                        double max_lateral, int min_count) {
  if (gamma <= 0.0 || gamma >= 1.0)
    throw DomainError("gamma must lie in (0,1)");
  OscDecayConfig cfg;
  cfg.gamma = gamma;
  const double delta = geom.delta_scale(x0p);
  double rmax = std::pow(delta, 1.0 - gamma);
  rmax = std::min(rmax, max_lateral - x0p.norm());
  const double rmin_resolve = 4.0 * lateral_spacing;
  const double rmin_center = 5.0 * x0p.norm();
  const double rmin = std::max(rmin_resolve, rmin_center);
  for (double r = rmax; r >= rmin; r *= 0.5) cfg.radii.push_back(r);
  if (static_cast<int>(cfg.radii.size()) < min_count)
    throw ResolutionError("dyadic ladder too short for the grid resolution");
  cfg.below_strict_floor = cfg.radii.back() < 5.0 * delta;
  return cfg;
}

namespace {

double cylinder_p_mean(const std::function<double(const VecN&)>& F, int dim,
                       double r, double p, int m) {
  if (m < 2) throw ResolutionError("y_norm: too few samples per axis");
  double sum = 0.0;
  std::int64_t cnt = 0;
  VecN x(dim);
  const double h = 2.0 * r / static_cast<double>(m);
  auto sample = [&](int i) { return -r + h * (static_cast<double>(i) + 0.5); };
  if (dim == 2) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        x[0] = sample(i);
        x[1] = sample(j);
        sum += std::pow(std::abs(F(x)), p);
        ++cnt;
      }
  } else {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        x[0] = sample(i);
        x[1] = sample(j);
        if (x.head(2).norm() >= r) continue;  // cylinder mask
        for (int k = 0; k < m; ++k) {
          x[2] = sample(k);
          sum += std::pow(std::abs(F(x)), p);
          ++cnt;
        }
      }
  }
  if (cnt == 0) throw ResolutionError("y_norm: empty sample set");
  return std::pow(sum / static_cast<double>(cnt), 1.0 / p);
}

}  // namespace

double y_norm(const std::function<double(const VecN&)>& F, int dim, double s,
              double p, int dyadic_levels, int samples_per_axis) {
  if (p <= 1.0 || !std::isfinite(p))
    throw DomainError("y_norm: p must lie in (1, inf)");
  double best = 0.0;
  double r = 1.0;
  for (int lev = 0; lev < dyadic_levels; ++lev, r *= 0.5) {
    const double mean = cylinder_p_mean(F, dim, r, p, samples_per_axis);
    best = std::max(best, std::pow(r, 1.0 - s) * mean);
  }
  return best;
}

double cylinder_mean(const std::function<double(const VecN&)>& F, int dim,
                     int samples_per_axis) {
  // p-mean with p = 1 on the signed values
  double sum = 0.0;
  std::int64_t cnt = 0;
  VecN x(dim);
  const int m = samples_per_axis;
  const double h = 2.0 / static_cast<double>(m);
  auto sample = [&](int i) { return -1.0 + h * (static_cast<double>(i) + 0.5); };
  if (dim == 2) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        x[0] = sample(i);
        x[1] = sample(j);
        sum += F(x);
        ++cnt;
      }
  } else {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        x[0] = sample(i);
        x[1] = sample(j);
        if (x.head(2).norm() >= 1.0) continue;
        for (int k = 0; k < m; ++k) {
          x[2] = sample(k);
          sum += F(x);
          ++cnt;
        }
      }
  }
  return sum / static_cast<double>(cnt);
}

LayeredPartition random_partition(int layers, std::uint64_t seed, double mu) {
  if (layers < 1 || layers > 64)
    throw DomainError("layer count must lie in [1, 64]");
  std::mt19937_64 rng(seed * 2654435761ull + 17ull);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<double> thick(static_cast<std::size_t>(layers));
  double total = 0.0;
  for (auto& t : thick) {
    t = 0.2 + u01(rng);  // floor keeps the thinnest layer resolvable
    total += t;
  }
  std::vector<double> cuts{-1.0};
  double acc = -1.0;
  for (int m = 0; m + 1 < layers; ++m) {
    acc += 2.0 * thick[static_cast<std::size_t>(m)] / total;
    cuts.push_back(acc);
  }
  cuts.push_back(1.0);
  return LayeredPartition(cuts, mu);
}

LayerExperimentResult layered_gradient_experiment(
    int layers, std::uint64_t seed, const LayerExperimentOptions& opts) {
  LayerExperimentResult res;
  res.layers = layers;
  res.seed = seed;
  const LayeredPartition part = random_partition(layers, seed, opts.mu);
  const CoefficientField A =
      CoefficientField::layered(2, part, opts.amplitude, seed);

  // conforming vertical axis: uniform nodes plus the cut coordinates
  std::vector<double> vert = uniform_axis(-1.0, 1.0, opts.vertical_cells);
  for (std::size_t m = 1; m + 1 < part.cuts.size(); ++m)
    vert.push_back(part.cuts[m]);
  std::sort(vert.begin(), vert.end());
  vert.erase(std::unique(vert.begin(), vert.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-9; }),
             vert.end());
  TensorGrid grid({uniform_axis(-1.0, 1.0, opts.lateral_cells), vert});

  AssembleOptions aopts;
  aopts.natural_top_bottom = false;  // Dirichlet on the whole boundary
  const AssemblyCoefficient ac = direct_coefficient(A);
  const auto trace = [](const VecN& z) { return z[0]; };  // H = x_1
  LinearSystem sys = assemble(grid, ac, trace, aopts);

  CgOptions copts;
  copts.tol = opts.tol;
  copts.max_iter = opts.max_iter;
  copts.precond = PrecondKind::Ssor;
  auto [u, rep] = cg_solve(sys, copts);
  res.cg_iterations = rep.iterations;

  DiscreteField uf(grid);
  uf.values = u;
  const GradientField gf = gradient_pullback(uf, nullptr);
  double gmax = 0.0;
  int multi[3];
  double l2 = 0.0;
  for (std::int64_t p = 0; p < grid.node_count(); ++p) {
    grid.unindex(p, multi);
    const VecN z = grid.coord(multi);
    const double vol = grid.dual_width(0, multi[0]) * grid.dual_width(1, multi[1]);
    l2 += vol * u[static_cast<std::size_t>(p)] * u[static_cast<std::size_t>(p)];
    if (std::abs(z[0]) <= 0.5 && std::abs(z[1]) <= 0.5)
      gmax = std::max(gmax, gf.magnitude[static_cast<std::size_t>(p)]);
  }
  l2 = std::sqrt(l2);
  res.grad_ratio = l2 > 0.0 ? gmax / l2 : 0.0;

  const CoefficientField Abar = A.piecewise_constant_approx();
  const auto diff = [&](const VecN& x) {
    return (A.eval(x) - Abar.eval(x)).norm();  // Frobenius
  };
  const double yn =
      y_norm(diff, 2, 1.0 + opts.mu, 2.0, 9, opts.y_norm_samples);
  res.y_norm_ratio = yn / A.max_layer_holder_norm();
  return res;
}

double normalized_gradient_max(const GradientField& gf, const DiscreteField& u,
                               const FlattenMap& map, double beta_hat,
                               double r0, int lattice_per_axis) {
  const TensorGrid& grid = *gf.grid;
  const int n = grid.dim();
  const double eps = map.geometry().epsilon();
  double unorm = 0.0;
  for (double v : u.values) unorm = std::max(unorm, std::abs(v));
  if (unorm == 0.0)
    throw DegenerateDataError("normalized_gradient_max: zero field");
  const int iv0 = grid.nearest_index(n - 1, 0.0);

  // bilinear interpolation of |grad u| on the lateral axes at the midline
  auto interp = [&](const LatVec& xp) {
    int multi[3] = {0, 0, 0};
    multi[n - 1] = iv0;
    double wlo[2], whi[2];
    int ilo[2];
    for (int d = 0; d < n - 1; ++d) {
      const auto& a = grid.axis(d);
      // the global map has z' = x'
      const double v = xp[d];
      int i = grid.nearest_index(d, v);
      if (a[static_cast<std::size_t>(i)] > v && i > 0) --i;
      if (i >= grid.size(d) - 1) i = grid.size(d) - 2;
      ilo[d] = i;
      const double h = a[static_cast<std::size_t>(i + 1)] -
                       a[static_cast<std::size_t>(i)];
      whi[d] = (v - a[static_cast<std::size_t>(i)]) / h;
      wlo[d] = 1.0 - whi[d];
    }
    double val = 0.0;
    const int corners = n == 3 ? 4 : 2;
    for (int c = 0; c < corners; ++c) {
      double wgt = 1.0;
      for (int d = 0; d < n - 1; ++d) {
        const int bit = (c >> d) & 1;
        multi[d] = ilo[d] + bit;
        wgt *= bit ? whi[d] : wlo[d];
      }
      val += wgt * gf.magnitude[static_cast<std::size_t>(grid.index(multi))];
    }
    return val;
  };

  double best = 0.0;
  const int m = lattice_per_axis;
  LatVec xp(n - 1);
  for (int i = 0; i < m; ++i) {
    xp[0] = -r0 + 2.0 * r0 * static_cast<double>(i) / (m - 1.0);
    if (n == 2) {
      const double g = interp(xp);
      best = std::max(best,
                      g * std::pow(eps + xp.squaredNorm(), 0.5 - beta_hat));
    } else {
      for (int j = 0; j < m; ++j) {
        xp[1] = -r0 + 2.0 * r0 * static_cast<double>(j) / (m - 1.0);
        if (xp.norm() > r0) continue;
        const double g = interp(xp);
        best = std::max(best,
                        g * std::pow(eps + xp.squaredNorm(), 0.5 - beta_hat));
      }
    }
  }
  return best / unorm;
}

double pushforward_holder_quotient(const FlattenMap& local_map,
                                   const CoefficientField& a, double alpha,
                                   int samples_per_axis) {
  const int n = local_map.dim();
  const double half = local_map.half_height();
  std::vector<VecN> pts;
  std::vector<MatN> vals;
  const int m = samples_per_axis;
  VecN z(n);
  for (int i = 0; i < m; ++i) {
    z[0] = -0.98 + 1.96 * static_cast<double>(i) / (m - 1.0);
    for (int j = 0; j < (n == 3 ? m : 1); ++j) {
      if (n == 3) {
        z[1] = -0.98 + 1.96 * static_cast<double>(j) / (m - 1.0);
        if (z.head(2).norm() > 0.98) continue;
      }
      for (int k = 0; k < m; ++k) {
        z[n - 1] = half * (-0.999 + 1.998 * static_cast<double>(k) / (m - 1.0));
        pts.push_back(z);
        vals.push_back(local_map.pushforward(a, z));
      }
    }
  }
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = (pts[i] - pts[j]).norm();
      if (d < 1e-12) continue;
      best = std::max(best,
                      (vals[i] - vals[j]).norm() / std::pow(d, alpha));
    }
  return best;
}

EigenvalueRange pushforward_eigen_range(const FlattenMap& local_map,
                                        const CoefficientField& a,
                                        int samples_per_axis) {
  const int n = local_map.dim();
  const double half = local_map.half_height();
  EigenvalueRange er;
  er.min_eig = std::numeric_limits<double>::infinity();
  er.max_eig = 0.0;
  const int m = samples_per_axis;
  VecN z(n);
  for (int i = 0; i < m; ++i) {
    z[0] = -1.0 + 2.0 * static_cast<double>(i) / (m - 1.0);
    for (int j = 0; j < (n == 3 ? m : 1); ++j) {
      if (n == 3) {
        z[1] = -1.0 + 2.0 * static_cast<double>(j) / (m - 1.0);
        if (z.head(2).norm() > 1.0) continue;
      }
      for (int k = 0; k < m; ++k) {
        z[n - 1] = half * (-1.0 + 2.0 * static_cast<double>(k) / (m - 1.0));
        const MatN b = local_map.pushforward(a, z);
        Eigen::SelfAdjointEigenSolver<MatN> es(b);
        er.min_eig = std::min(er.min_eig, es.eigenvalues().minCoeff());
        er.max_eig = std::max(er.max_eig, es.eigenvalues().maxCoeff());
      }
    }
  }
  return er;
}

}  // namespace gapfield
