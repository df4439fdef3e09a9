#include "gapfield/runner.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

namespace gapfield {

namespace {

std::string now_stamp() {
  std::time_t t = std::time(nullptr);
  char buf[64];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
}

}  // namespace

int resolve_thread_count(bool serial_flag) {
  if (serial_flag) return 1;
  if (const char* env = std::getenv("GAPFIELD_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

std::vector<double> slab_refinement_errors(double delta, int levels,
                                           double tol, int base_cells) {
  const double k = M_PI / (2.0 * delta);
  const auto exact = [&](const VecN& z) {
    return std::cosh(k * z[0]) * std::cos(k * (z[1] + delta));
  };
  std::vector<double> errs;
  int cells = base_cells;
  for (int lev = 0; lev < levels; ++lev, cells *= 2) {
    TensorGrid grid({uniform_axis(-1.0, 1.0, cells),
                     uniform_axis(-delta, delta, cells / 2)});
    AssemblyCoefficient ac;
    ac.eval = [](const VecN&) { return MatN::Identity(2, 2); };
    LinearSystem sys = assemble(grid, ac, exact, {});
    CgOptions co;
    co.tol = tol;  // a misconfigured tolerance must surface here
    co.max_iter = 200000;
    co.precond = PrecondKind::Ssor;
    auto [x, rep] = cg_solve(sys, co);
    double err = 0.0;
    int multi[3];
    for (std::int64_t p = 0; p < grid.node_count(); ++p) {
      grid.unindex(p, multi);
      err = std::max(err, std::abs(x[static_cast<std::size_t>(p)] -
                                   exact(grid.coord(multi))));
    }
    errs.push_back(err);
  }
  return errs;
}

namespace {

// Transform property suite shared by run_validate.
void transform_checks(const Scenario& sc, const RunOptions& opts,
                      ValidationReport& rep) {
  std::mt19937_64 rng(20240901ull);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double eps = sc.geometry.epsilon;
  const GapGeometry geom = sc.make_geometry(eps);
  const int n = geom.dim();
  const double rlat = sc.lateral_extent();

  LatVec x0 = LatVec::Zero(n - 1);
  x0[0] = 0.3 * std::sqrt(eps);
  const double delta = geom.delta_scale(x0);
  std::vector<FlattenMap> maps;
  maps.push_back(FlattenMap::global(geom));
  maps.push_back(FlattenMap::local(geom, x0));
  const double ann_r = std::min(8.0 * delta, 0.5 * geom.R0());
  maps.push_back(FlattenMap::annulus(geom, x0, ann_r));
  const char* names[3] = {"global", "local", "annulus"};

  for (int mi = 0; mi < 3; ++mi) {
    const FlattenMap& map = maps[static_cast<std::size_t>(mi)];
    // draw physical points inside the map's domain
    auto draw = [&]() {
      VecN x(n);
      while (true) {
        LatVec xp(n - 1);
        if (map.kind() == FlattenMap::Kind::Global) {
          for (int d = 0; d < n - 1; ++d) xp[d] = rlat * (2.0 * u01(rng) - 1.0);
        } else if (map.kind() == FlattenMap::Kind::Local) {
          for (int d = 0; d < n - 1; ++d)
            xp[d] = x0[d] + 0.24 * delta * (2.0 * u01(rng) - 1.0);
        } else {
          for (int d = 0; d < n - 1; ++d)
            xp[d] = x0[d] + 1.9 * ann_r * (2.0 * u01(rng) - 1.0);
          const double dist = (xp - x0).norm();
          if (dist <= 0.26 * ann_r || dist >= 1.9 * ann_r) continue;
        }
        if (xp.norm() >= 0.98 * geom.R0()) continue;
        const double t = 0.02 + 0.96 * u01(rng);
        x.head(n - 1) = xp;
        x[n - 1] = geom.lower().value(xp) - 0.5 * eps + t * geom.gap_height(xp);
        return x;
      }
    };

    double worst_rt = 0.0;
    for (int it = 0; it < 1000; ++it) {
      const VecN x = draw();
      const VecN z = map.forward(x);
      const VecN x2 = map.inverse(z);
      worst_rt = std::max(worst_rt, (x - x2).norm() / std::max(1.0, x.norm()));
    }
    rep.checks.push_back({std::string("transform"),
                          std::string(names[mi]) + " round-trip", worst_rt,
                          worst_rt <= 1e-12});

    double worst_fd = 0.0;
    for (int it = 0; it < 100; ++it) {
      const VecN x = draw();
      const MatN J = map.jacobian(x);
      const double step = 1e-5 * delta;
      for (int col = 0; col < n; ++col) {
        VecN xp = x, xm = x;
        xp[col] += step;
        xm[col] -= step;
        VecN dz;
        try {
          dz = (map.forward(xp) - map.forward(xm)) / (2.0 * step);
        } catch (const DomainError&) {
          continue;  // perturbed point fell off the domain edge
        }
        for (int row = 0; row < n; ++row) {
          const double scale = std::max(1.0, std::abs(J(row, col)));
          worst_fd =
              std::max(worst_fd, std::abs(dz[row] - J(row, col)) / scale);
        }
      }
    }
    rep.checks.push_back({std::string("transform"),
                          std::string(names[mi]) + " jacobian vs FD", worst_fd,
                          worst_fd <= 1e-6});
  }

  // pushforward: symmetry, SPD, positive orientation
  const CoefficientField a = CoefficientField::smooth_perturbation(
      n, 0.25, VecN::Constant(n, 3.0));
  const FlattenMap& lm = maps[1];
  double min_eig = std::numeric_limits<double>::infinity();
  double worst_sym = 0.0;
  for (int it = 0; it < 200; ++it) {
    VecN z(n);
    for (int d = 0; d < n - 1; ++d) z[d] = 0.9 * (2.0 * u01(rng) - 1.0);
    if (n == 3 && z.head(2).norm() > 0.95) continue;
    z[n - 1] = lm.half_height() * 0.98 * (2.0 * u01(rng) - 1.0);
    MatN b = lm.pushforward(a, z);
    if (opts.inject == "bn1-sign") {
      b(0, n - 1) = -b(0, n - 1);  // injected fault: one-sided sign flip
    }
    worst_sym = std::max(worst_sym, (b - b.transpose().eval()).norm());
    Eigen::SelfAdjointEigenSolver<MatN> es(
        MatN(0.5 * (b + b.transpose().eval())));
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
  }
  rep.checks.push_back(
      {"transform", "pushforward exact symmetry", worst_sym, worst_sym == 0.0});
  rep.checks.push_back(
      {"transform", "pushforward SPD (min eigenvalue)", min_eig, min_eig > 0.0});

  // reflection continuity across the face z_n = half
  const double h = lm.half_height();
  const auto w_probe = [&](double zn) {
    const ReflectionIndex ri = reflection_index(h, zn);
    return std::cos(ri.source_zn);  // any even probe field
  };
  double cont = std::abs(w_probe(h - 1e-9) - w_probe(h + 1e-9));
  rep.checks.push_back(
      {"transform", "reflection continuity at the face", cont, cont <= 1e-8});
}

}  // namespace

ValidationReport run_validate(const Scenario& sc, const RunOptions& opts) {
  ValidationReport rep;
  // refinement study: 4 grids, 3 ratios
  try {
    const auto errs = slab_refinement_errors(0.5, 4, sc.numerics.tol);
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
      const double ratio = errs[i] / errs[i + 1];
      rep.checks.push_back({"discretize",
                            "slab refinement ratio level " + std::to_string(i),
                            ratio, ratio >= 3.5 && ratio <= 4.5});
    }
  } catch (const std::exception& e) {
    rep.checks.push_back({"discretize",
                          std::string("slab refinement study (") + e.what() +
                              ")",
                          std::numeric_limits<double>::quiet_NaN(), false});
  }
  transform_checks(sc, opts, rep);
  if (!opts.inject.empty()) {
    // With an injected fault the run passes exactly when the fault was
    // caught, i.e. the pushforward symmetry check failed.
    bool caught = false;
    for (auto& c : rep.checks)
      if (c.property == "pushforward exact symmetry" && !c.pass) caught = true;
    rep.checks.push_back(
        {"validate", "injected fault detected", caught ? 1.0 : 0.0, caught});
  }
  return rep;
}

SolvedCase solve_case(const Scenario& sc, double epsilon,
                      const RunOptions& opts) {
  SolvedCase c;
  c.epsilon = epsilon;
  c.geom = std::make_unique<GapGeometry>(sc.make_geometry(epsilon));
  c.map = std::make_unique<FlattenMap>(FlattenMap::global(*c.geom));
  c.r_lat = sc.lateral_extent();
  c.grid = std::make_unique<TensorGrid>(build_graded_grid(
      *c.geom, c.r_lat, sc.numerics.target_cells, sc.numerics.c_grade,
      sc.numerics.vertical_cells, 1.0));
  const CoefficientField a = sc.make_coefficient();
  const BoundaryData bc = sc.make_boundary();
  const AssemblyCoefficient ac = pushforward_coefficient(*c.map, a);
  const FlattenMap& map = *c.map;
  const auto trace = [&map, &bc](const VecN& z) {
    return bc.eval(map.inverse(z));
  };
  AssembleOptions aopts;
  aopts.threads = opts.threads;
  LinearSystem sys = assemble(*c.grid, ac, trace, aopts);
  CgOptions co;
  co.tol = sc.numerics.tol;
  co.max_iter = sc.numerics.max_iter;
  co.precond = sc.precond_kind();
  co.ssor_omega = sc.numerics.ssor_omega;
  co.threads = opts.threads;
  auto [x, rep] = cg_solve(sys, co);
  c.w = DiscreteField(*c.grid);
  c.w.values = std::move(x);
  c.report = rep;
  c.grad = gradient_pullback(c.w, c.map.get());
  if (opts.debug_dump) {
    ensure_dir(opts.out_dir);
    dump_grid(opts.out_dir + "/grid_eps" + fmt(epsilon) + ".dump", *c.grid);
    dump_system(opts.out_dir + "/system_eps" + fmt(epsilon) + ".dump", sys);
  }
  return c;
}

namespace {

struct CaseDiagnostics {
  std::vector<double> radii;
  std::vector<double> osc;
  double harnack_max = 0.0;
  bool below_floor = false;
  bool osc_ok = true;
};

CaseDiagnostics case_diagnostics(const SolvedCase& c, const Scenario& sc,
                                 const LatVec& x0) {
  CaseDiagnostics d;
  const double h0 = sc.numerics.c_grade * c.geom->delta_scale(x0);
  OscDecayConfig cfg;
  try {
    cfg = OscDecayConfig::feasible(*c.geom, x0, sc.numerics.gamma, h0,
                                   c.r_lat, 4);
  } catch (const ResolutionError&) {
    d.osc_ok = false;
    return d;
  }
  d.radii = cfg.radii;
  d.below_floor = cfg.below_strict_floor;
  for (double r : cfg.radii) {
    d.osc.push_back(oscillation(c.w, *c.map, x0, r));
    // the Harnack pair needs Omega_{2r} inside the grid
    if (x0.norm() + 2.0 * r < c.r_lat) {
      const HarnackPair hp = harnack_ratio_pair(c.w, *c.map, x0, r);
      d.harnack_max = std::max(d.harnack_max, hp.max_ratio);
    }
  }
  return d;
}

}  // namespace

SweepResult run_sweep(const Scenario& sc, const RunOptions& opts) {
  if (sc.sweep.epsilons.size() < 4)
    throw ConfigError("sweep needs sweep.epsilons with >= 4 values");
  SweepResult res;
  res.scenario_id = sc.id;
  res.gamma = sc.numerics.gamma;
  const LatVec x0 = LatVec::Zero(sc.geometry.dimension - 1);

  std::vector<double> eps_ok, grad_glob, grad_seg;
  for (double eps : sc.sweep.epsilons) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      SolvedCase c = solve_case(sc, eps, opts);
      SweepRow row;
      row.epsilon = eps;
      row.delta0 = c.geom->delta_scale(x0);
      row.max_grad_global = max_gradient_interior(c.grad, 2);
      row.max_grad_segment = segment_max_gradient(c.grad, *c.map, x0);
      const CaseDiagnostics d = case_diagnostics(c, sc, x0);
      row.osc_values = d.osc;
      row.osc_radii = d.radii;
      row.harnack_max_ratio = d.harnack_max;
      row.below_strict_floor = d.below_floor;
      row.cg_iters = c.report.iterations;
      row.wall_time_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      res.r0 = c.geom->working_radius();
      res.rows.push_back(std::move(row));
      eps_ok.push_back(eps);
      grad_glob.push_back(res.rows.back().max_grad_global);
      grad_seg.push_back(res.rows.back().max_grad_segment);
    } catch (const NumericalError& e) {
      std::cerr << "sweep: epsilon " << eps << " skipped: " << e.what()
                << "\n";
    }
  }
  if (eps_ok.size() < 4)
    throw DegenerateDataError("sweep: fewer than 4 surviving rows");
  std::sort(res.rows.begin(), res.rows.end(),
            [](const SweepRow& a, const SweepRow& b) {
              return a.epsilon > b.epsilon;
            });
  res.fit_global = fit_power_law(eps_ok, grad_glob);
  res.fit_segment = fit_power_law(eps_ok, grad_seg);
  res.beta_hat_global = res.fit_global.slope + 0.5;
  res.beta_hat_segment = res.fit_segment.slope + 0.5;
  // sigma from the best-resolved (smallest-epsilon) oscillation ladder
  for (auto it = res.rows.rbegin(); it != res.rows.rend(); ++it) {
    if (it->osc_values.size() >= 4) {
      bool positive = true;
      for (double o : it->osc_values) positive = positive && o > 0.0;
      if (!positive) continue;
      res.sigma_hat = osc_decay_fit(it->osc_radii, it->osc_values).sigma;
      break;
    }
  }
  ensure_dir(opts.out_dir);
  write_sweep_csv(opts.out_dir + "/sweep.csv", res);
  write_fit_csv(opts.out_dir + "/fit.csv", res);
  return res;
}

HarnackResult run_harnack(const Scenario& sc, const RunOptions& opts) {
  HarnackResult res;
  res.scenario_id = sc.id;
  res.dim2_warning = sc.geometry.dimension == 2;
  if (res.dim2_warning)
    std::cerr << "harnack: annuli disconnect in dimension 2; ratios carry a "
                 "warning flag\n";
  std::vector<double> eps_list = sc.sweep.harnack_epsilons.empty()
                                     ? sc.sweep.epsilons
                                     : sc.sweep.harnack_epsilons;
  if (eps_list.empty())
    throw ConfigError("harnack needs sweep.harnack_epsilons or sweep.epsilons");
  LatVec x0 = LatVec::Zero(sc.geometry.dimension - 1);
  for (std::size_t d = 0; d < sc.sweep.harnack_x0.size() &&
                          d + 1 < static_cast<std::size_t>(sc.geometry.dimension);
       ++d)
    x0[static_cast<int>(d)] = sc.sweep.harnack_x0[d];

  for (double eps : eps_list) {
    SolvedCase c = solve_case(sc, eps, opts);
    const double h0 = sc.numerics.c_grade * c.geom->delta_scale(x0);
    const OscDecayConfig cfg = OscDecayConfig::feasible(
        *c.geom, x0, sc.numerics.gamma, h0, c.r_lat, 4);
    std::vector<double> osc;
    double max_ratio = 0.0;
    for (double r : cfg.radii) {
      HarnackRow row;
      row.epsilon = eps;
      row.r = r;
      row.osc = oscillation(c.w, *c.map, x0, r);
      if (x0.norm() + 2.0 * r < c.r_lat) {
        const HarnackPair hp = harnack_ratio_pair(c.w, *c.map, x0, r);
        row.ratio_from_above = hp.ratio_from_above;
        row.ratio_from_below = hp.ratio_from_below;
        max_ratio = std::max(max_ratio, hp.max_ratio);
      }
      osc.push_back(row.osc);
      res.rows.push_back(row);
    }
    res.eps_list.push_back(eps);
    res.max_ratio_per_eps.push_back(max_ratio);
    bool positive = true;
    for (double o : osc) positive = positive && o > 0.0;
    if (positive && osc.size() >= 4) {
      res.sigma_per_eps.push_back(osc_decay_fit(cfg.radii, osc).sigma);
    } else {
      std::cerr << "harnack: flat diagnostics at epsilon " << eps
                << "; sigma undefined\n";
      res.sigma_per_eps.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  ensure_dir(opts.out_dir);
  write_harnack_csv(opts.out_dir + "/harnack.csv", res);
  return res;
}

LayersResult run_layers(const Scenario& sc, const RunOptions& opts) {
  if (sc.layers.l_list.empty() || sc.layers.seeds.empty())
    throw ConfigError("layers needs layers.l_list and layers.seeds");
  LayersResult res;
  res.scenario_id = sc.id;
  LayerExperimentOptions lo;
  lo.amplitude = sc.layers.amplitude;
  lo.mu = sc.coefficient.alpha;
  lo.tol = sc.numerics.tol;
  lo.max_iter = sc.numerics.max_iter;
  lo.lateral_cells = sc.layers.lateral_cells;
  lo.vertical_cells = sc.layers.vertical_cells;
  for (int l : sc.layers.l_list)
    for (std::uint64_t s : sc.layers.seeds)
      res.rows.push_back(layered_gradient_experiment(l, s, lo));
  // merged output is keyed (l, seed); order independent of execution order
  std::sort(res.rows.begin(), res.rows.end(),
            [](const LayerExperimentResult& a, const LayerExperimentResult& b) {
              return a.layers != b.layers ? a.layers < b.layers
                                          : a.seed < b.seed;
            });
  ensure_dir(opts.out_dir);
  write_layers_csv(opts.out_dir + "/layers.csv", res);
  return res;
}

void write_sweep_csv(const std::string& path, const SweepResult& res) {
  std::ofstream f(path);
  f << "# gapfield sweep, scenario=" << res.scenario_id
    << ", generated_at=" << now_stamp() << "\n";
  f << "# map=global half_height=1, r0=" << fmt(res.r0)
    << ", gamma=" << fmt(res.gamma)
    << ", osc radii: delta^(1-gamma) halved per entry\n";
  f << "epsilon,delta0,max_grad_global,max_grad_segment,osc_r_list,"
       "harnack_max_ratio,cg_iters,wall_time_s\n";
  for (const auto& r : res.rows) {
    f << fmt(r.epsilon) << "," << fmt(r.delta0) << ","
      << fmt(r.max_grad_global) << "," << fmt(r.max_grad_segment) << ",";
    for (std::size_t i = 0; i < r.osc_values.size(); ++i)
      f << (i ? ";" : "") << fmt(r.osc_values[i]);
    f << "," << fmt(r.harnack_max_ratio) << "," << r.cg_iters << ","
      << fmt(r.wall_time_s) << "\n";
  }
}

void write_fit_csv(const std::string& path, const SweepResult& res,
                   bool append) {
  std::ofstream f(path, append ? std::ios::app : std::ios::out);
  if (!append) {
    f << "# gapfield fit, generated_at=" << now_stamp() << "\n";
    f << "scenario_id,slope,stderr,r_squared,sigma_hat,beta_hat\n";
  }
  f << res.scenario_id << ":global," << fmt(res.fit_global.slope) << ","
    << fmt(res.fit_global.stderr_slope) << "," << fmt(res.fit_global.r_squared)
    << "," << fmt(res.sigma_hat) << "," << fmt(res.beta_hat_global) << "\n";
  f << res.scenario_id << ":segment," << fmt(res.fit_segment.slope) << ","
    << fmt(res.fit_segment.stderr_slope) << ","
    << fmt(res.fit_segment.r_squared) << "," << fmt(res.sigma_hat) << ","
    << fmt(res.beta_hat_segment) << "\n";
}

void write_harnack_csv(const std::string& path, const HarnackResult& res) {
  std::ofstream f(path);
  f << "# gapfield harnack, scenario=" << res.scenario_id
    << ", generated_at=" << now_stamp() << "\n";
  if (res.dim2_warning)
    f << "# warning: dimension 2, the annulus is disconnected\n";
  f << "# sigma_hat per epsilon:";
  for (std::size_t i = 0; i < res.eps_list.size(); ++i)
    f << " " << fmt(res.eps_list[i]) << ":" << fmt(res.sigma_per_eps[i]);
  f << "\n";
  f << "epsilon,r,osc,harnack_ratio_u1,harnack_ratio_u2\n";
  for (const auto& r : res.rows)
    f << fmt(r.epsilon) << "," << fmt(r.r) << "," << fmt(r.osc) << ","
      << fmt(r.ratio_from_above) << "," << fmt(r.ratio_from_below) << "\n";
}

void write_layers_csv(const std::string& path, const LayersResult& res) {
  std::ofstream f(path);
  f << "# gapfield layers, scenario=" << res.scenario_id
    << ", generated_at=" << now_stamp() << "\n";
  f << "l,seed,grad_ratio,y_norm_ratio\n";
  for (const auto& r : res.rows)
    f << r.layers << "," << r.seed << "," << fmt(r.grad_ratio) << ","
      << fmt(r.y_norm_ratio) << "\n";
}

void run_fit(const std::string& out_dir) {
  std::ifstream f(out_dir + "/sweep.csv");
  if (!f) throw ConfigError("fit: missing " + out_dir + "/sweep.csv");
  std::string line;
  std::string scenario_id = "sweep";
  double gamma = 0.3;
  std::vector<double> eps, glob, seg, delta0;
  std::vector<std::vector<double>> oscs;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto pos = line.find("scenario=");
      if (pos != std::string::npos) {
        scenario_id = line.substr(pos + 9);
        const auto comma = scenario_id.find(',');
        if (comma != std::string::npos) scenario_id = scenario_id.substr(0, comma);
      }
      pos = line.find("gamma=");
      if (pos != std::string::npos) gamma = std::stod(line.substr(pos + 6));
      continue;
    }
    if (line.rfind("epsilon,", 0) == 0) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 5) continue;
    eps.push_back(std::stod(cells[0]));
    delta0.push_back(std::stod(cells[1]));
    glob.push_back(std::stod(cells[2]));
    seg.push_back(std::stod(cells[3]));
    std::vector<double> o;
    std::stringstream os(cells[4]);
    while (std::getline(os, cell, ';'))
      if (!cell.empty()) o.push_back(std::stod(cell));
    oscs.push_back(std::move(o));
  }
  SweepResult res;
  res.scenario_id = scenario_id;
  res.gamma = gamma;
  res.fit_global = fit_power_law(eps, glob);
  res.fit_segment = fit_power_law(eps, seg);
  res.beta_hat_global = res.fit_global.slope + 0.5;
  res.beta_hat_segment = res.fit_segment.slope + 0.5;
  // sigma from the smallest-epsilon ladder; radii reconstruct from delta0
  for (std::size_t i = eps.size(); i-- > 0;) {
    if (oscs[i].size() >= 4) {
      bool pos = true;
      for (double o : oscs[i]) pos = pos && o > 0.0;
      if (!pos) continue;
      std::vector<double> radii;
      double r = std::pow(delta0[i], 1.0 - gamma);
      for (std::size_t k = 0; k < oscs[i].size(); ++k, r *= 0.5)
        radii.push_back(r);
      res.sigma_hat = osc_decay_fit(radii, oscs[i]).sigma;
      break;
    }
  }
  write_fit_csv(out_dir + "/fit.csv", res);
}

void run_report(const std::string& out_dir) {
  for (const char* name : {"sweep.csv", "fit.csv", "harnack.csv", "layers.csv"}) {
    const std::string path = out_dir + "/" + name;
    std::ifstream f(path);
    if (!f) continue;
    std::cout << "== " << path << " ==\n";
    std::string line;
    while (std::getline(f, line)) std::cout << line << "\n";
    std::cout << "\n";
  }
}

void dump_grid(const std::string& path, const TensorGrid& grid) {
  std::ofstream f(path, std::ios::binary);
  f << "gapfield-grid dim=" << grid.dim();
  for (int d = 0; d < grid.dim(); ++d) f << " n" << d << "=" << grid.size(d);
  f << "\n";
  for (int d = 0; d < grid.dim(); ++d) {
    const auto& a = grid.axis(d);
    f.write(reinterpret_cast<const char*>(a.data()),
            static_cast<std::streamsize>(a.size() * sizeof(double)));
  }
}

void dump_system(const std::string& path, const LinearSystem& sys) {
  std::ofstream f(path, std::ios::binary);
  f << "gapfield-csr n=" << sys.n << " nnz=" << sys.row_ptr.back() << "\n";
  f.write(reinterpret_cast<const char*>(sys.row_ptr.data()),
          static_cast<std::streamsize>(sys.row_ptr.size() * sizeof(std::int64_t)));
  f.write(reinterpret_cast<const char*>(sys.col.data()),
          static_cast<std::streamsize>(sys.col.size() * sizeof(std::int32_t)));
  f.write(reinterpret_cast<const char*>(sys.val.data()),
          static_cast<std::streamsize>(sys.val.size() * sizeof(double)));
  f.write(reinterpret_cast<const char*>(sys.rhs.data()),
          static_cast<std::streamsize>(sys.rhs.size() * sizeof(double)));
}

}  // namespace gapfield
