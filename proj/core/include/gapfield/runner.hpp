#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gapfield/analyze.hpp"
#include "gapfield/scenario.hpp"

namespace gapfield {

struct RunOptions {
  std::string out_dir = "out";
  bool serial = false;
  bool debug_dump = false;
  int threads = 1;
  std::string inject;  // fault injection for validate: "bn1-sign"
};

struct ValidationCheck {
  std::string module;
  std::string property;
  double measured = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// Manufactured-solution refinement study on the straight slab:
/// w = cosh(k z_1) cos(k (z_n + delta)), k = pi/(2 delta), b = I; the
/// analytic solution has zero conormal flux on both faces.  Returns the
/// L-infinity errors on successively halved grids.
std::vector<double> slab_refinement_errors(double delta, int levels,
                                           double tol, int base_cells = 16);

ValidationReport run_validate(const Scenario& sc, const RunOptions& opts);

/// One solved gap configuration (geometry owned on the heap so the embedded
/// map reference stays valid across moves).
struct SolvedCase {
  std::unique_ptr<GapGeometry> geom;
  std::unique_ptr<FlattenMap> map;
  std::unique_ptr<TensorGrid> grid;
  DiscreteField w;
  GradientField grad;
  SolveReport report;
  double epsilon = 0.0;
  double r_lat = 0.0;
};

SolvedCase solve_case(const Scenario& sc, double epsilon,
                      const RunOptions& opts);

struct SweepRow {
  double epsilon = 0.0;
  double delta0 = 0.0;
  double max_grad_global = 0.0;
  double max_grad_segment = 0.0;
  std::vector<double> osc_values;
  std::vector<double> osc_radii;
  double harnack_max_ratio = 0.0;
  int cg_iters = 0;
  double wall_time_s = 0.0;
  bool below_strict_floor = false;
};

struct SweepResult {
  std::string scenario_id;
  std::vector<SweepRow> rows;  // sorted by epsilon descending
  PowerLawFit fit_global;
  PowerLawFit fit_segment;
  double sigma_hat = 0.0;
  double beta_hat_global = 0.0;
  double beta_hat_segment = 0.0;
  double r0 = 0.0;
  double gamma = 0.3;
};

SweepResult run_sweep(const Scenario& sc, const RunOptions& opts);

struct HarnackRow {
  double epsilon = 0.0;
  double r = 0.0;
  double osc = 0.0;
  double ratio_from_above = 0.0;
  double ratio_from_below = 0.0;
};

struct HarnackResult {
  std::string scenario_id;
  std::vector<HarnackRow> rows;
  std::vector<double> sigma_per_eps;
  std::vector<double> eps_list;
  std::vector<double> max_ratio_per_eps;
  bool dim2_warning = false;
};

HarnackResult run_harnack(const Scenario& sc, const RunOptions& opts);

struct LayersResult {
  std::string scenario_id;
  std::vector<LayerExperimentResult> rows;
};

LayersResult run_layers(const Scenario& sc, const RunOptions& opts);

// Re-fit from an existing sweep.csv (CSV body round-trip).
void run_fit(const std::string& out_dir);
// Print a short summary of the CSV artifacts in out_dir.
void run_report(const std::string& out_dir);

// CSV writers (bodies are byte-stable for identical inputs).
void write_sweep_csv(const std::string& path, const SweepResult& res);
void write_fit_csv(const std::string& path, const SweepResult& res,
                   bool append = false);
void write_harnack_csv(const std::string& path, const HarnackResult& res);
void write_layers_csv(const std::string& path, const LayersResult& res);

// Debug dumps: text header plus little-endian binary payload.
void dump_grid(const std::string& path, const TensorGrid& grid);
void dump_system(const std::string& path, const LinearSystem& sys);

int resolve_thread_count(bool serial_flag);

}  // namespace gapfield
