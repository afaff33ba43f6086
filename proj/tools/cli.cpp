#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <iostream>
#include <mutex>

#include "ccl/errors.hpp"
#include "ccl/parallel.hpp"
#include "ccl/reconstruct.hpp"

namespace ccl::cli {
namespace {

struct Window {
  double x_lo, x_hi, t_lo, t_hi;
};

Window window(const RunConfig& cfg, const ProblemSpec& spec) {
  Window w{cfg.x_lo.value_or(spec.domain_x.lo), cfg.x_hi.value_or(spec.domain_x.hi),
           cfg.t_lo.value_or(spec.domain_t.lo), cfg.t_hi.value_or(spec.domain_t.hi)};
  if (!(w.x_lo <= w.x_hi) || !(w.t_lo <= w.t_hi)) throw ConfigError("empty x or t range");
  if (w.t_lo < 0.0) throw ConfigError("t must be non-negative");
  return w;
}

std::size_t workers_for(const RunConfig& cfg) {
  if (!cfg.parallel) return 1;
  return cfg.workers ? cfg.workers : default_workers();
}

EntropyOptions entropy_options(const RunConfig& cfg) {
  EntropyOptions o;
  if (cfg.rel_tol) o.approx.rel_tol = *cfg.rel_tol;
  return o;
}

BvpOptions bvp_options(const RunConfig& cfg) {
  BvpOptions o;
  if (cfg.bvp_tol) o.tol = *cfg.bvp_tol;
  return o;
}

PointSolver make_solver(const RunConfig& cfg, const ProblemSpec& spec) {
  return PointSolver(spec, entropy_options(cfg), bvp_options(cfg));
}

void write_sample_header(std::ostream& out, const ProblemSpec& spec) {
  out << "x,t,u,J";
  if (spec.transform != OutputTransform::kNone) out << ",q";
  out << '\n';
}

void write_sample(std::ostream& out, const ProblemSpec& spec, const SolutionSample& s) {
  out << format_double(s.x) << ',' << format_double(s.t) << ',' << format_double(s.u) << ','
      << format_double(s.J);
  if (spec.transform != OutputTransform::kNone) out << ',' << format_double(spec.report(s.u));
  out << '\n';
}

}  // namespace

const ProblemSpec& resolve_problem(const std::string& name_or_path) {
  const bool is_file = name_or_path.size() > 5 &&
                       name_or_path.compare(name_or_path.size() - 5, 5, ".json") == 0;
  if (!is_file) return find_problem(name_or_path);
  static std::mutex mu;
  static std::deque<ProblemSpec> loaded;
  auto spec = load_problem_file(name_or_path);
  std::lock_guard lock(mu);
  return loaded.emplace_back(std::move(spec));
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void cmd_point(const RunConfig& cfg, std::ostream& out) {
  const auto& spec = resolve_problem(cfg.problem);
  if (cfg.t < 0.0) throw ConfigError("t must be non-negative");
  const auto solver = make_solver(cfg, spec);
  write_sample_header(out, spec);
  write_sample(out, spec, solver.solve(cfg.x, cfg.t));
}

void cmd_grid(const RunConfig& cfg, std::ostream& out) {
  const auto& spec = resolve_problem(cfg.problem);
  if (cfg.nx < 1 || cfg.nt < 1) throw ConfigError("grid counts must be at least 1");
  const auto w = window(cfg, spec);
  const auto xs = linspace(w.x_lo, w.x_hi, cfg.nx);
  const auto ts = linspace(w.t_lo, w.t_hi, cfg.nt);
  const auto solver = make_solver(cfg, spec);
  const auto samples = solver.grid(xs, ts, workers_for(cfg));
  write_sample_header(out, spec);
  for (const auto& s : samples) write_sample(out, spec, s);
}

void cmd_reconstruct(const RunConfig& cfg, std::ostream& out) {
  const auto& spec = resolve_problem(cfg.problem);
  if (cfg.samples < 2) throw ConfigError("reconstruct needs at least 2 samples");
  if (!(cfg.t > 0.0)) throw ConfigError("reconstruct needs t > 0");
  const auto w = window(cfg, spec);
  const auto solver = make_solver(cfg, spec);
  ReconstructOptions opts;
  opts.workers = workers_for(cfg);
  const auto rec = reconstruct([&](double x) { return solver.solve(x, cfg.t).u; }, w.x_lo, w.x_hi, opts);
  out << "kind,x,u_left,u_right\n";
  for (double x : linspace(w.x_lo, w.x_hi, cfg.samples)) {
    const double u = rec.u(x);
    out << "sample," << format_double(x) << ',' << format_double(u) << ',' << format_double(u) << '\n';
  }
  for (const auto& j : rec.jumps)
    out << "jump," << format_double(j.x) << ',' << format_double(j.u_left) << ','
        << format_double(j.u_right) << '\n';
}

bool cmd_table(const RunConfig& cfg, std::ostream& out) {
  const auto& spec = resolve_problem(cfg.problem);
  if (cfg.nx < 1 || cfg.nt < 1) throw ConfigError("grid counts must be at least 1");
  const auto w = window(cfg, spec);
  const auto xs = linspace(w.x_lo, w.x_hi, cfg.nx);
  const auto ts = linspace(w.t_lo, w.t_hi, cfg.nt);
  const auto solver = make_solver(cfg, spec);
  const auto r = analytic_error(
      spec, [&](double x, double t) { return solver.solve(x, t).u; }, xs, ts, cfg.shock_exclusion,
      workers_for(cfg));
  const double rate = r.seconds > 0.0 ? static_cast<double>(r.points) / r.seconds : 0.0;
  out << "problem,nx,nt,x_lo,x_hi,t_lo,t_hi,max_abs,l1,excluded,seconds,points_per_sec\n";
  out << spec.name << ',' << cfg.nx << ',' << cfg.nt << ',' << format_double(w.x_lo) << ','
      << format_double(w.x_hi) << ',' << format_double(w.t_lo) << ',' << format_double(w.t_hi) << ','
      << format_double(r.max_abs) << ',' << format_double(r.l1) << ',' << r.excluded_points << ','
      << format_double(r.seconds) << ',' << format_double(rate) << '\n';
  return !cfg.max_error || r.max_abs <= *cfg.max_error;
}

FvComparison fv_compare(const RunConfig& cfg) {
  const auto& spec = resolve_problem(cfg.problem);
  const auto* flux = std::get_if<ConvexFlux>(&spec.flux);
  if (flux == nullptr) throw ConfigError("fv-compare needs a space-independent flux");
  if (cfg.ncells < 2) throw ConfigError("fv-compare needs at least 2 cells");
  if (cfg.t < 0.0) throw ConfigError("t must be non-negative");
  const auto w = window(cfg, spec);
  FvComparison cmp;
  cmp.grid = run_until(init_from(spec.init.g, w.x_lo, w.x_hi, cfg.ncells), *flux, cfg.t);
  const auto solver = make_solver(cfg, spec);
  cmp.pointwise.resize(cfg.ncells);
  parallel_for(cfg.ncells, workers_for(cfg), [&](std::size_t i) {
    cmp.pointwise[i] = solver.solve(cmp.grid.center(i), cfg.t).u;
  });
  for (std::size_t i = 0; i < cfg.ncells; ++i)
    cmp.l1 += std::abs(cmp.grid.cell_averages[i] - cmp.pointwise[i]);
  cmp.l1 *= cmp.grid.dx();
  return cmp;
}

void cmd_fv_compare(const RunConfig& cfg, std::ostream& out) {
  const auto& spec = resolve_problem(cfg.problem);
  const auto cmp = fv_compare(cfg);
  out << "x,fv,pointwise\n";
  for (std::size_t i = 0; i < cmp.pointwise.size(); ++i)
    out << format_double(cmp.grid.center(i)) << ',' << format_double(spec.report(cmp.grid.cell_averages[i]))
        << ',' << format_double(spec.report(cmp.pointwise[i])) << '\n';
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Pointwise entropy solutions of scalar convex conservation laws", "ccl"};
  app.require_subcommand(1);

  auto add_problem = [&](CLI::App* sub) {
    sub->add_option("-p,--problem", cfg.problem, "catalog name or problem .json file");
    sub->add_option("-o,--output", cfg.output, "output CSV path (default stdout)");
    sub->add_option("--rel-tol", cfg.rel_tol, "relative tolerance of the piecewise approximations");
    sub->add_option("--bvp-tol", cfg.bvp_tol, "collocation tolerance for control problems");
  };
  auto add_window = [&](CLI::App* sub) {
    sub->add_option("--x-lo", cfg.x_lo);
    sub->add_option("--x-hi", cfg.x_hi);
    sub->add_option("--t-lo", cfg.t_lo);
    sub->add_option("--t-hi", cfg.t_hi);
  };
  auto add_parallel = [&](CLI::App* sub) {
    sub->add_flag("--parallel", cfg.parallel, "evaluate points concurrently");
    sub->add_option("--workers", cfg.workers, "worker count (default: $CCL_WORKERS or all cores)");
  };

  auto* point = app.add_subcommand("point", "solve at one (x, t)");
  add_problem(point);
  point->add_option("-x,--x", cfg.x)->required();
  point->add_option("-t,--t", cfg.t)->required();

  auto* grid = app.add_subcommand("grid", "solve on a tensor grid, rows ordered by t then x");
  add_problem(grid);
  add_window(grid);
  add_parallel(grid);
  grid->add_option("--nx", cfg.nx);
  grid->add_option("--nt", cfg.nt);

  auto* recon = app.add_subcommand("reconstruct", "piecewise profile x -> u(x, t) with jumps");
  add_problem(recon);
  add_parallel(recon);
  recon->add_option("-t,--t", cfg.t)->required();
  recon->add_option("--x-lo", cfg.x_lo);
  recon->add_option("--x-hi", cfg.x_hi);
  recon->add_option("--samples", cfg.samples);

  auto* table = app.add_subcommand("table", "error against the exact or reference solution");
  add_problem(table);
  add_window(table);
  add_parallel(table);
  table->add_option("--nx", cfg.nx);
  table->add_option("--nt", cfg.nt);
  table->add_option("--max-error", cfg.max_error, "exit with status 4 when exceeded");
  table->add_option("--shock-exclusion", cfg.shock_exclusion);

  auto* fv = app.add_subcommand("fv-compare", "finite-volume solution next to the pointwise one");
  add_problem(fv);
  add_parallel(fv);
  fv->add_option("-t,--t", cfg.t)->required();
  fv->add_option("--x-lo", cfg.x_lo);
  fv->add_option("--x-hi", cfg.x_hi);
  fv->add_option("--ncells", cfg.ncells);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    std::ofstream file;
    if (!cfg.output.empty()) {
      file.open(cfg.output);
      if (!file) throw ConfigError("cannot open output '" + cfg.output + "'");
    }
    std::ostream& sink = cfg.output.empty() ? out : file;
    if (point->parsed()) {
      cmd_point(cfg, sink);
    } else if (grid->parsed()) {
      cmd_grid(cfg, sink);
    } else if (recon->parsed()) {
      cmd_reconstruct(cfg, sink);
    } else if (table->parsed()) {
      if (!cmd_table(cfg, sink)) {
        err << "error: max_abs exceeds --max-error " << *cfg.max_error << '\n';
        return kGateFailure;
      }
    } else if (fv->parsed()) {
      cmd_fv_compare(cfg, sink);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return kSolverError;
  } catch (const ApproximationError& e) {
    err << "solver error: " << e.what() << '\n';
    return kSolverError;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}

}  // namespace ccl::cli
