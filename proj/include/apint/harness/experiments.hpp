#pragma once

// Sweep drivers for the window experiments. Every (epsilon, T0) cell is
// independent and runs on the worker pool; tables are assembled in sweep
// order afterwards, so output does not depend on scheduling.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "apint/detail/number_format.hpp"
#include "apint/detail/parallel.hpp"
#include "apint/harness/csv.hpp"
#include "apint/harness/initial_condition.hpp"
#include "apint/harness/svg_plot.hpp"
#include "apint/parareal.hpp"
#include "apint/resonance.hpp"
#include "apint/window_opt.hpp"

namespace apint::harness {

enum class ExperimentKind {
  iterations_vs_window,
  coarse_error_vs_window,
  iterative_error_vs_window,
  optimal_window_prediction,
  averaging_oracle,
};

inline std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::iterations_vs_window: return "iterations_vs_window";
    case ExperimentKind::coarse_error_vs_window: return "coarse_error_vs_window";
    case ExperimentKind::iterative_error_vs_window: return "iterative_error_vs_window";
    case ExperimentKind::optimal_window_prediction: return "optimal_window_prediction";
    case ExperimentKind::averaging_oracle: return "averaging_oracle";
  }
  return "unknown";
}

inline ExperimentKind parse_experiment_kind(const std::string& name) {
  for (auto k : {ExperimentKind::iterations_vs_window, ExperimentKind::coarse_error_vs_window,
                 ExperimentKind::iterative_error_vs_window,
                 ExperimentKind::optimal_window_prediction, ExperimentKind::averaging_oracle})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

struct RunParameters {
  double dt_coarse = 0.1;
  double dt_fine = 2e-4;
  double t_end = 1.0;
  double froude = 1.0;
  int nx = 64;
  KernelKind kernel = KernelKind::bump;
  int quad_points = 0;  // 0 picks recommended_quadrature_points per cell
  double tol = 1e-7;
  int max_iters = 10;
  int fixed_iterations = 3;  // iterative_error_vs_window
  double ic_width = 0.5;
  int workers = 1;
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::coarse_error_vs_window;
  std::vector<double> epsilons;
  std::vector<double> windows;  // T0, fast-time units
  RunParameters run;
  std::uint64_t seed = 0;  // recorded only; the Gaussian initial state is deterministic
  std::string output_dir = ".";
  std::optional<FitConstants> constants;  // optimal_window_prediction: skip the fit

  void validate() const {
    if (epsilons.empty()) throw std::invalid_argument("epsilon sweep is empty");
    if (windows.empty()) throw std::invalid_argument("window sweep is empty");
    for (double e : epsilons)
      if (!(e > 0.0)) throw std::invalid_argument("epsilon values must be positive");
    for (double w : windows)
      if (!(w >= 0.0)) throw std::invalid_argument("window values must be non-negative");
    if (!std::is_sorted(windows.begin(), windows.end()))
      throw std::invalid_argument("window values must be ascending");
    if (run.quad_points != 0 && run.quad_points < 4)
      throw std::invalid_argument("quad_points must be 0 (auto) or >= 4");
    if (run.workers < 1) throw std::invalid_argument("workers must be >= 1");
    if (!(run.ic_width > 0.0)) throw std::invalid_argument("initial width must be positive");
    if (run.fixed_iterations < 1) throw std::invalid_argument("fixed iterations must be >= 1");
    if (!(run.t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
    step_count(run.t_end, run.dt_coarse);
    step_count(run.dt_coarse, run.dt_fine);
  }
};

inline std::vector<double> default_windows(double dt_coarse) {
  std::vector<double> w;
  for (double r : {0.125, 0.25, 0.5, 1.0, 2.0, 4.0}) w.push_back(r * dt_coarse);
  return w;
}

inline std::vector<double> default_epsilons() { return {0.01, 0.1, 1.0}; }

inline std::vector<double> default_oracle_windows() { return {0.05, 0.1, 0.2, 0.4}; }

// ---------------------------------------------------------------------------
// Cell setup

struct Cell {
  ModelConfig model;
  EigenDecomposition eig;
  SpectralState u0;
  std::vector<std::string> warnings;
};

inline ModelConfig model_config(double epsilon, const RunParameters& run) {
  ModelConfig m;
  m.epsilon = epsilon;
  m.froude = run.froude;
  m.n_modes = run.nx;
  m.validate();
  return m;
}

inline Cell make_cell(double epsilon, const RunParameters& run) {
  Cell c{model_config(epsilon, run), {}, {}, {}};
  c.eig = eigendecompose(c.model);
  auto ic = make_initial_condition(c.model, InitialKind::gaussian_height, run.ic_width);
  c.u0 = std::move(ic.state);
  c.warnings = std::move(ic.warnings);
  return c;
}

// Window 0 means no averaging.
inline CoarseConfig coarse_config(const RunParameters& run, double window,
                                  const EigenDecomposition& eig) {
  CoarseConfig c;
  c.dt = run.dt_coarse;
  c.kernel = run.kernel == KernelKind::bump ? Kernel::bump() : Kernel::gaussian();
  if (window == 0.0) {
    c.averaging = AveragingConfig::pointwise();
  } else {
    c.averaging.window = window;
    c.averaging.n_quad = run.quad_points > 0
                             ? run.quad_points
                             : recommended_quadrature_points(window, eig.max_frequency());
  }
  c.validate();
  return c;
}

inline PararealConfig parareal_config(const RunParameters& run, const CoarseConfig& coarse) {
  PararealConfig p;
  p.n_slabs = static_cast<int>(step_count(run.t_end, run.dt_coarse));
  p.t_end = run.t_end;
  p.tol = run.tol;
  p.max_iters = run.max_iters;
  p.workers = 1;  // parallelism lives at the sweep level
  p.coarse = coarse;
  p.fine.dt = run.dt_fine;
  p.validate();
  return p;
}

// ---------------------------------------------------------------------------
// Minimum analysis

inline constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

// All indices attaining the minimum; NaN entries are ignored.
inline std::vector<std::size_t> argmin_indices(const std::vector<double>& values) {
  double best = std::numeric_limits<double>::infinity();
  for (double v : values)
    if (!std::isnan(v)) best = std::min(best, v);
  std::vector<std::size_t> out;
  if (std::isinf(best)) return out;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] == best) out.push_back(i);
  return out;
}

// Minimum attained strictly inside the grid and strictly below both ends.
inline bool has_interior_minimum(const std::vector<double>& values) {
  if (values.size() < 3) return false;
  const auto idx = argmin_indices(values);
  if (idx.empty()) return false;
  const double m = values[idx.front()];
  auto above = [m](double v) { return std::isnan(v) || v > m; };
  return above(values.front()) && above(values.back());
}

struct MinimumCheck {
  double epsilon = 0.0;
  std::vector<std::size_t> reference_argmin;  // coarse error
  std::vector<std::size_t> metric_argmin;
  int cells_apart = -1;  // smallest index distance between the two sets
  bool agree = false;    // cells_apart <= 1
  bool reference_interior = false;
  bool metric_interior = false;
};

inline MinimumCheck compare_minima(double epsilon, const std::vector<double>& reference,
                                   const std::vector<double>& metric) {
  MinimumCheck c;
  c.epsilon = epsilon;
  c.reference_argmin = argmin_indices(reference);
  c.metric_argmin = argmin_indices(metric);
  c.reference_interior = has_interior_minimum(reference);
  c.metric_interior = has_interior_minimum(metric);
  for (auto a : c.reference_argmin)
    for (auto b : c.metric_argmin) {
      const int d = static_cast<int>(a > b ? a - b : b - a);
      if (c.cells_apart < 0 || d < c.cells_apart) c.cells_apart = d;
    }
  c.agree = c.cells_apart >= 0 && c.cells_apart <= 1;
  return c;
}

// Least-squares slope of log y against log x over positive finite pairs.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("slope needs matching arrays");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  const double den = n * sxx - sx * sx;
  if (n < 2 || den <= 0.0) return nan_value;
  return (n * sxy - sx * sy) / den;
}

// ---------------------------------------------------------------------------
// Per-cell pipelines

struct CellResult {
  double epsilon = 0.0;
  double window = 0.0;
  int quad_points = 1;
  RunStatus status = RunStatus::converged;
  double coarse_error = nan_value;
  int iterations = -1;
  double error = nan_value;  // final or fixed-iteration parareal error; oracle error
  int substeps = 0;
  std::string message;
};

inline double cell_coarse_error(const Cell& cell, const RunParameters& run,
                                const CoarseConfig& coarse) {
  FineConfig fine{run.dt_fine};
  return coarse_error_norm(cell.model, cell.eig, fine, coarse, cell.u0, run.t_end);
}

inline CellResult run_window_cell(ExperimentKind kind, const Cell& cell, const RunParameters& run,
                                  double window) {
  CellResult r;
  r.epsilon = cell.model.epsilon;
  r.window = window;
  const auto coarse = coarse_config(run, window, cell.eig);
  r.quad_points = coarse.averaging.n_quad;
  try {
    r.coarse_error = cell_coarse_error(cell, run, coarse);
  } catch (const NumericalBlowup& e) {
    r.status = RunStatus::blowup;
    r.message = e.what();
  }
  if (kind == ExperimentKind::coarse_error_vs_window) return r;

  const auto cfg = parareal_config(run, coarse);
  const bool fixed = kind == ExperimentKind::iterative_error_vs_window;
  const auto out = run_apint(cell.u0, cfg, cell.model, cell.eig,
                             fixed ? std::optional<int>(run.fixed_iterations) : std::nullopt);
  if (out.status == RunStatus::blowup) {
    r.status = RunStatus::blowup;
    r.message = out.message;
    return r;
  }
  r.iterations = out.iterations();
  r.error = out.errors.back();
  if (!fixed && r.status != RunStatus::blowup) r.status = out.status;
  return r;
}

// Averaged equation with substeps of length dt_fine over one horizon,
// against the fine solution; isolates the averaging error.
inline CellResult run_oracle_cell(const Cell& cell, const RunParameters& run, double window,
                                  double horizon) {
  CellResult r;
  r.epsilon = cell.model.epsilon;
  r.window = window;
  auto coarse = coarse_config(run, window, cell.eig);
  coarse.dt = horizon;
  coarse.substeps = static_cast<int>(step_count(horizon, run.dt_fine));
  r.quad_points = coarse.averaging.n_quad;
  r.substeps = coarse.substeps;
  try {
    const auto x = fine_propagate(cell.u0, horizon, cell.model, cell.eig, FineConfig{run.dt_fine});
    const auto y = coarse_propagate(cell.u0, horizon, cell.model, cell.eig, coarse);
    r.error = (x.coeffs - y.coeffs).norm();
  } catch (const NumericalBlowup& e) {
    r.status = RunStatus::blowup;
    r.message = e.what();
  }
  return r;
}

// ---------------------------------------------------------------------------
// Experiments

struct ExperimentResult {
  std::string name;
  std::vector<std::pair<std::string, CsvTable>> tables;  // file stem -> table
  std::vector<std::pair<std::string, PlotSpec>> plots;   // table stem -> plot
  std::vector<MinimumCheck> checks;
  std::optional<FitConstants> constants;
  std::vector<std::string> notes;

  const CsvTable& table(const std::string& stem) const {
    for (const auto& [s, t] : tables)
      if (s == stem) return t;
    throw std::out_of_range("no table '" + stem + "'");
  }
};

namespace detail {

inline std::vector<std::pair<std::string, std::string>> spec_params(const ExperimentSpec& spec) {
  using apint::detail::format_double;
  const auto& r = spec.run;
  return {{"dt_coarse", format_double(r.dt_coarse)},
          {"dt_fine", format_double(r.dt_fine)},
          {"t_end", format_double(r.t_end)},
          {"froude", format_double(r.froude)},
          {"nx", std::to_string(r.nx)},
          {"kernel", to_string(r.kernel)},
          {"quad_points", r.quad_points ? std::to_string(r.quad_points) : "auto"},
          {"tol", format_double(r.tol)},
          {"max_iters", std::to_string(r.max_iters)},
          {"ic_width", format_double(r.ic_width)},
          {"seed", std::to_string(spec.seed)}};
}

inline std::string status_cell(RunStatus s) { return to_string(s); }

inline void add_notes(std::vector<std::string>& notes, const std::vector<std::string>& more) {
  for (const auto& n : more)
    if (std::find(notes.begin(), notes.end(), n) == notes.end()) notes.push_back(n);
}

// Runs fn(cell, window) over the sweep; results indexed [eps][window].
template <class Fn>
std::vector<std::vector<CellResult>> sweep(const ExperimentSpec& spec, std::vector<std::string>& notes,
                                           Fn&& fn) {
  std::vector<Cell> cells;
  for (double e : spec.epsilons) {
    cells.push_back(make_cell(e, spec.run));
    add_notes(notes, cells.back().warnings);
    for (double w : spec.windows) coarse_config(spec.run, w, cells.back().eig);
  }
  const std::size_t nw = spec.windows.size();
  std::vector<CellResult> flat(cells.size() * nw);
  apint::detail::parallel_for(flat.size(), spec.run.workers, [&](std::size_t i) {
    flat[i] = fn(cells[i / nw], spec.windows[i % nw]);
  });
  std::vector<std::vector<CellResult>> out(cells.size());
  for (std::size_t i = 0; i < flat.size(); ++i) out[i / nw].push_back(std::move(flat[i]));
  return out;
}

inline std::vector<MinimumCheck> cross_check(const std::vector<std::vector<CellResult>>& grid,
                                             bool use_iterations) {
  std::vector<MinimumCheck> out;
  for (const auto& row : grid) {
    std::vector<double> ref, metric;
    for (const auto& c : row) {
      ref.push_back(c.coarse_error);
      if (c.status == RunStatus::blowup)
        metric.push_back(nan_value);
      else if (use_iterations)
        metric.push_back(c.status == RunStatus::converged ? c.iterations
                                                          : std::numeric_limits<double>::infinity());
      else
        metric.push_back(c.error);
    }
    out.push_back(compare_minima(row.front().epsilon, ref, metric));
  }
  return out;
}

inline std::string index_list(const std::vector<std::size_t>& idx,
                              const std::vector<double>& windows) {
  std::string s;
  for (auto i : idx) {
    if (!s.empty()) s += ';';
    s += apint::detail::format_double(windows[i]);
  }
  return s;
}

inline CsvTable checks_table(const std::string& experiment, const ExperimentSpec& spec,
                             const std::vector<MinimumCheck>& checks) {
  CsvTable t{experiment + "_crosscheck",
             {"epsilon", "coarse_argmin", "metric_argmin", "cells_apart", "agree",
              "coarse_interior", "metric_interior"},
             spec_params(spec),
             {}};
  for (const auto& c : checks)
    t.add_row({cell(c.epsilon), index_list(c.reference_argmin, spec.windows),
               index_list(c.metric_argmin, spec.windows), cell(c.cells_apart), cell(c.agree),
               cell(c.reference_interior), cell(c.metric_interior)});
  return t;
}

inline PlotSpec window_plot(const std::string& title, const std::string& y, const std::string& ylabel,
                            bool log_y) {
  PlotSpec p;
  p.title = title;
  p.x_column = "window";
  p.y_columns = {y};
  p.x_label = "averaging window T0";
  p.y_label = ylabel;
  p.log_y = log_y;
  return p;
}

}  // namespace detail

inline ExperimentResult run_window_sweep(const ExperimentSpec& spec) {
  const auto kind = spec.kind;
  if (kind == ExperimentKind::optimal_window_prediction || kind == ExperimentKind::averaging_oracle)
    throw std::invalid_argument("not a window sweep experiment");
  spec.validate();
  ExperimentResult res;
  res.name = to_string(kind);
  const auto grid = detail::sweep(spec, res.notes, [&](const Cell& c, double w) {
    return run_window_cell(kind, c, spec.run, w);
  });

  CsvTable t{res.name, {}, detail::spec_params(spec), {}};
  switch (kind) {
    case ExperimentKind::iterations_vs_window:
      t.columns = {"epsilon", "window", "quad_points", "iterations", "final_error", "coarse_error",
                   "status"};
      break;
    case ExperimentKind::iterative_error_vs_window:
      t.columns = {"epsilon", "window", "quad_points", "iterations", "iterative_error",
                   "coarse_error", "status"};
      break;
    default:
      t.columns = {"epsilon", "window", "quad_points", "coarse_error", "status"};
  }
  for (const auto& row : grid)
    for (const auto& c : row) {
      std::vector<std::string> cells{cell(c.epsilon), cell(c.window), cell(c.quad_points)};
      if (kind != ExperimentKind::coarse_error_vs_window) {
        cells.push_back(c.iterations >= 0 ? cell(c.iterations) : std::string());
        cells.push_back(cell(c.error));
      }
      cells.push_back(cell(c.coarse_error));
      cells.push_back(detail::status_cell(c.status));
      t.add_row(std::move(cells));
      if (!c.message.empty())
        res.notes.push_back("eps=" + cell(c.epsilon) + " T0=" + cell(c.window) + ": " + c.message);
    }
  res.tables.emplace_back(res.name, std::move(t));

  switch (kind) {
    case ExperimentKind::iterations_vs_window:
      res.plots.emplace_back(res.name, detail::window_plot("Parareal iterations to tolerance",
                                                           "iterations", "iterations", false));
      res.checks = detail::cross_check(grid, true);
      break;
    case ExperimentKind::iterative_error_vs_window:
      res.plots.emplace_back(
          res.name, detail::window_plot("Error after " + std::to_string(spec.run.fixed_iterations) +
                                            " iterations",
                                        "iterative_error", "relative error", true));
      res.checks = detail::cross_check(grid, false);
      break;
    default:
      res.plots.emplace_back(res.name, detail::window_plot("Coarse propagator error",
                                                           "coarse_error", "coarse error", true));
  }
  if (!res.checks.empty())
    res.tables.emplace_back(res.name + "_crosscheck",
                            detail::checks_table(res.name, spec, res.checks));
  return res;
}

inline ExperimentResult run_averaging_oracle(const ExperimentSpec& spec, double horizon) {
  spec.validate();
  step_count(horizon, spec.run.dt_fine);
  ExperimentResult res;
  res.name = to_string(ExperimentKind::averaging_oracle);
  const auto grid = detail::sweep(spec, res.notes, [&](const Cell& c, double w) {
    return run_oracle_cell(c, spec.run, w, horizon);
  });

  auto params = detail::spec_params(spec);
  params.emplace_back("horizon", apint::detail::format_double(horizon));
  CsvTable t{res.name,
             {"epsilon", "window", "quad_points", "substeps", "error", "slope", "status"},
             params,
             {}};
  CsvTable fit{res.name + "_slope", {"epsilon", "slope", "points"}, params, {}};
  for (const auto& row : grid) {
    std::vector<double> w, e;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const auto& c = row[i];
      double slope = nan_value;
      if (i > 0) {
        const auto& p = row[i - 1];
        if (p.window > 0.0 && c.error > 0.0 && p.error > 0.0)
          slope = std::log(c.error / p.error) / std::log(c.window / p.window);
      }
      t.add_row({cell(c.epsilon), cell(c.window), cell(c.quad_points), cell(c.substeps),
                 cell(c.error), cell(slope), detail::status_cell(c.status)});
      if (c.status != RunStatus::blowup && c.window > 0.0) {
        w.push_back(c.window);
        e.push_back(c.error);
      }
    }
    fit.add_row({cell(row.front().epsilon), cell(loglog_slope(w, e)),
                 cell(static_cast<int>(w.size()))});
  }
  res.tables.emplace_back(res.name, std::move(t));
  res.tables.emplace_back(res.name + "_slope", std::move(fit));
  res.plots.emplace_back(res.name,
                         detail::window_plot("Averaging error", "error", "||x - y||", true));
  return res;
}

// Measures the coarse-error optimum per epsilon, fits the window model
// constants (unless supplied) and compares predictions with the measurement.
inline ExperimentResult run_window_prediction(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult res;
  res.name = to_string(ExperimentKind::optimal_window_prediction);
  ExperimentSpec sweep_spec = spec;
  sweep_spec.kind = ExperimentKind::coarse_error_vs_window;
  auto sweep = run_window_sweep(sweep_spec);
  detail::add_notes(res.notes, sweep.notes);
  const auto& st = sweep.tables.front().second;

  std::vector<WindowMeasurement> data;
  std::vector<std::string> status;
  for (std::size_t i = 0; i < spec.epsilons.size(); ++i) {
    std::vector<double> errs;
    for (std::size_t j = 0; j < spec.windows.size(); ++j)
      errs.push_back(st.number(i * spec.windows.size() + j, "coarse_error"));
    const auto idx = argmin_indices(errs);
    if (idx.empty() || spec.windows[idx.back()] <= 0.0) {
      status.push_back("blowup");
      continue;
    }
    status.push_back("ok");
    data.push_back({spec.epsilons[i], spec.run.dt_coarse, spec.windows[idx.back()], errs[idx.back()]});
  }

  const Kernel kernel = spec.run.kernel == KernelKind::bump ? Kernel::bump() : Kernel::gaussian();
  const auto model = model_config(1.0, spec.run);
  const auto triads = enumerate_triads(model, model.dealias_cutoff());
  auto params = detail::spec_params(spec);
  if (spec.constants) {
    res.constants = *spec.constants;
    params.emplace_back("constants", "loaded");
  } else {
    const auto fit = fit_constants(data, triads, kernel, spec.run.workers);
    res.constants = fit.constants;
    params.emplace_back("constants", "fitted");
    params.emplace_back("location_residual", apint::detail::format_double(fit.location_residual));
    params.emplace_back("value_residual", apint::detail::format_double(fit.value_residual));
  }

  CsvTable t{res.name,
             {"epsilon", "dt_coarse", "measured_window", "measured_error", "eta_full", "eta_simple",
              "eta_scaling", "full_on_boundary", "status"},
             params,
             {}};
  std::size_t k = 0;
  for (std::size_t i = 0; i < spec.epsilons.size(); ++i) {
    const double eps = spec.epsilons[i];
    const auto p = predict_window(eps, spec.run.dt_coarse, *res.constants, triads, kernel);
    const bool ok = status[i] == "ok";
    t.add_row({cell(eps), cell(spec.run.dt_coarse), ok ? cell(data[k].eta_opt) : "",
               ok ? cell(data[k].min_error) : "", cell(p.eta_full), cell(p.eta_simple),
               cell(p.eta_scaling), cell(p.full_on_boundary), status[i]});
    if (ok) ++k;
  }
  res.tables.emplace_back(res.name, std::move(t));
  res.tables.emplace_back(res.name + "_sweep", sweep.tables.front().second);
  PlotSpec p;
  p.title = "Optimal averaging window";
  p.x_column = "epsilon";
  p.y_columns = {"measured_window", "eta_full", "eta_simple"};
  p.series_column.clear();
  p.x_label = "epsilon";
  p.y_label = "T0";
  res.plots.emplace_back(res.name, p);
  res.plots.emplace_back(res.name + "_sweep", sweep.plots.front().second);
  return res;
}

inline ExperimentResult run_experiment(const ExperimentSpec& spec, double oracle_horizon = 0.0) {
  switch (spec.kind) {
    case ExperimentKind::optimal_window_prediction: return run_window_prediction(spec);
    case ExperimentKind::averaging_oracle:
      return run_averaging_oracle(spec, oracle_horizon > 0.0 ? oracle_horizon : spec.run.dt_coarse);
    default: return run_window_sweep(spec);
  }
}

// Writes <stem>.csv for every table, <stem>.svg for every plot and
// constants.txt when constants were fitted or loaded. Returns the paths.
inline std::vector<std::string> write_outputs(const ExperimentResult& res,
                                              const std::string& output_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(output_dir);
  std::vector<std::string> written;
  for (const auto& [stem, table] : res.tables) {
    const auto path = (fs::path(output_dir) / (stem + ".csv")).string();
    write_csv(path, table);
    written.push_back(path);
  }
  for (const auto& [stem, spec] : res.plots) {
    const auto svg = (fs::path(output_dir) / (stem + ".svg")).string();
    emit_plot((fs::path(output_dir) / (stem + ".csv")).string(), spec, svg);
    written.push_back(svg);
  }
  if (res.constants) {
    const auto path = (fs::path(output_dir) / "constants.txt").string();
    save_constants(path, *res.constants);
    written.push_back(path);
  }
  return written;
}

}  // namespace apint::harness
