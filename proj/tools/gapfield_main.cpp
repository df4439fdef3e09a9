// gapfield: narrow-gap insulated conductivity laboratory.
//
// Solves the conormal-flux problem in the thin gap between two convex
// inclusions on a flattened tensor grid and measures gradient blow-up
// exponents, oscillation decay, Harnack ratios and layered-media gradient
// bounds.  Subcommands: validate | solve | sweep | harnack | layers | fit |
// report.  Exit codes: 0 success, 2 config error, 3 numerical failure,
// 4 acceptance-property failure.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "gapfield/runner.hpp"

namespace {

int dispatch(const std::string& cmd, const std::string& config,
             gapfield::RunOptions& opts) {
  using namespace gapfield;
  if (cmd == "fit") {
    run_fit(opts.out_dir);
    std::cout << "fit: wrote " << opts.out_dir << "/fit.csv\n";
    return 0;
  }
  if (cmd == "report") {
    run_report(opts.out_dir);
    return 0;
  }
  const Scenario sc = parse_scenario_file(config);
  opts.threads = resolve_thread_count(opts.serial);
  if (cmd == "validate") {
    const ValidationReport rep = run_validate(sc, opts);
    for (const auto& c : rep.checks)
      std::printf("[%s] %s / %s (measured %.6g)\n", c.pass ? "PASS" : "FAIL",
                  c.module.c_str(), c.property.c_str(), c.measured);
    if (!opts.inject.empty()) {
      // inverted expectation: the injected fault must have been caught
      for (const auto& c : rep.checks)
        if (c.property == "injected fault detected" && c.pass) return 0;
      return 4;
    }
    return rep.all_pass() ? 0 : 4;
  }
  if (cmd == "solve") {
    const SolvedCase c = solve_case(sc, sc.geometry.epsilon, opts);
    std::printf("scenario %s, epsilon %.6g\n", sc.id.c_str(), c.epsilon);
    std::printf("grid:");
    for (int d = 0; d < c.grid->dim(); ++d)
      std::printf(" %d", c.grid->size(d));
    std::printf(" (%lld nodes)\n",
                static_cast<long long>(c.grid->node_count()));
    std::printf("cg: %d iterations, relative residual %.3e, %.2fs\n",
                c.report.iterations, c.report.final_relative_residual,
                c.report.wall_time);
    gapfield::LatVec x0 = gapfield::LatVec::Zero(sc.geometry.dimension - 1);
    std::printf("max |grad u| interior: %.8g\n",
                max_gradient_interior(c.grad, 2));
    std::printf("segment max at x'=0:   %.8g\n",
                segment_max_gradient(c.grad, *c.map, x0));
    return 0;
  }
  if (cmd == "sweep") {
    const SweepResult res = run_sweep(sc, opts);
    std::printf("sweep %s: global slope %.4f (r2 %.5f), segment slope %.4f, "
                "sigma_hat %.4f\n",
                res.scenario_id.c_str(), res.fit_global.slope,
                res.fit_global.r_squared, res.fit_segment.slope,
                res.sigma_hat);
    std::printf("wrote %s/sweep.csv and %s/fit.csv\n", opts.out_dir.c_str(),
                opts.out_dir.c_str());
    return 0;
  }
  if (cmd == "harnack") {
    const HarnackResult res = run_harnack(sc, opts);
    for (std::size_t i = 0; i < res.eps_list.size(); ++i)
      std::printf("epsilon %.6g: sigma_hat %.4f, max harnack ratio %.3f\n",
                  res.eps_list[i], res.sigma_per_eps[i],
                  res.max_ratio_per_eps[i]);
    std::printf("wrote %s/harnack.csv\n", opts.out_dir.c_str());
    return 0;
  }
  if (cmd == "layers") {
    const LayersResult res = run_layers(sc, opts);
    std::printf("layers %s: %zu rows\n", res.scenario_id.c_str(),
                res.rows.size());
    std::printf("wrote %s/layers.csv\n", opts.out_dir.c_str());
    return 0;
  }
  std::cerr << "unknown subcommand " << cmd << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"narrow-gap insulated conductivity laboratory"};
  app.require_subcommand(1);

  std::string config;
  gapfield::RunOptions opts;
  std::vector<CLI::App*> subs;
  for (const char* name :
       {"validate", "solve", "sweep", "harnack", "layers", "fit", "report"}) {
    CLI::App* s = app.add_subcommand(name);
    const bool needs_config = std::string(name) != "fit" &&
                              std::string(name) != "report";
    auto* copt = s->add_option("--config", config, "scenario config file");
    if (needs_config) copt->required();
    s->add_option("--out", opts.out_dir, "output directory");
    s->add_flag("--serial", opts.serial, "single-threaded, bit-reproducible");
    s->add_flag("--debug-dump", opts.debug_dump, "write grid/matrix dumps");
    if (std::string(name) == "validate")
      s->add_option("--inject", opts.inject,
                    "fault injection (bn1-sign) for self-test")
          ->group("");  // hidden
    subs.push_back(s);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (CLI::App* s : subs)
      if (s->parsed()) return dispatch(s->get_name(), config, opts);
  } catch (const gapfield::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const gapfield::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const gapfield::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
