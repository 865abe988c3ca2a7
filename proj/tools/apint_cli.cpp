// apint: window sweep experiments, triad export and plotting.
//
//   apint coarse_error_vs_window --epsilon 0.01,0.1,1 --froude 0.03 --out-dir out
//   apint --config run.cfg iterations_vs_window --workers 4
//   apint plot --csv out/coarse_error_vs_window.csv --y coarse_error

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "apint/harness/experiments.hpp"

namespace {

using namespace apint;
using namespace apint::harness;

struct Options {
  std::vector<double> epsilons;
  std::vector<double> windows;
  RunParameters run;
  std::string kernel = "bump";
  std::string out_dir = "apint_out";
  std::uint64_t seed = 0;
  double horizon = 0.0;
  std::string constants_file;
  int k_max = 0;
};

struct PlotOptions {
  std::string csv;
  std::string svg;
  std::string x = "window";
  std::vector<std::string> y;
  std::string series = "epsilon";
  std::string title;
  bool linear_x = false;
  bool linear_y = false;
};

void report(const ExperimentResult& res, const std::vector<std::string>& written) {
  for (const auto& n : res.notes) std::cerr << "note: " << n << '\n';
  for (const auto& c : res.checks) {
    std::cout << res.name << " eps=" << apint::detail::format_double(c.epsilon)
              << " coarse/metric minimum " << (c.agree ? "agree" : "DISAGREE");
    if (c.cells_apart >= 0) std::cout << " (" << c.cells_apart << " cells apart)";
    std::cout << (c.metric_interior ? "" : ", metric minimum on the grid boundary") << '\n';
  }
  if (res.constants) {
    const auto& k = *res.constants;
    std::cout << "constants c1=" << apint::detail::format_double(k.c1)
              << " c2=" << apint::detail::format_double(k.c2)
              << " c3=" << apint::detail::format_double(k.c3)
              << " d1=" << apint::detail::format_double(k.d1) << '\n';
  }
  for (const auto& w : written) std::cout << "wrote " << w << '\n';
}

ExperimentSpec make_spec(ExperimentKind kind, const Options& o) {
  ExperimentSpec spec;
  spec.kind = kind;
  spec.run = o.run;
  spec.run.kernel = parse_kernel_kind(o.kernel);
  spec.epsilons = o.epsilons.empty() ? default_epsilons() : o.epsilons;
  if (!o.windows.empty())
    spec.windows = o.windows;
  else if (kind == ExperimentKind::averaging_oracle)
    spec.windows = default_oracle_windows();
  else
    spec.windows = default_windows(spec.run.dt_coarse);
  spec.seed = o.seed;
  spec.output_dir = o.out_dir;
  if (!o.constants_file.empty()) spec.constants = load_constants(o.constants_file);
  return spec;
}

int run_triads(const Options& o) {
  const double eps = o.epsilons.empty() ? 1.0 : o.epsilons.front();
  const auto model = model_config(eps, o.run);
  const int k_max = o.k_max > 0 ? o.k_max : model.dealias_cutoff();
  auto table = enumerate_triads(model, k_max);
  table = classify_shells(std::move(table), eps, default_shell_edges(table, eps));
  std::filesystem::create_directories(o.out_dir);
  const auto path = (std::filesystem::path(o.out_dir) / "triads.csv").string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_triad_csv(out, table);
  std::cout << table.triads.size() << " triads, k_max=" << k_max << '\n' << "wrote " << path << '\n';
  return 0;
}

int run_plot(const PlotOptions& p) {
  PlotSpec spec;
  spec.title = p.title;
  spec.x_column = p.x;
  spec.y_columns = p.y;
  spec.series_column = p.series;
  spec.x_label = p.x;
  spec.y_label = p.y.size() == 1 ? p.y.front() : std::string();
  spec.log_x = !p.linear_x;
  spec.log_y = !p.linear_y;
  std::string svg = p.svg;
  if (svg.empty()) svg = std::filesystem::path(p.csv).replace_extension(".svg").string();
  emit_plot(p.csv, spec, svg);
  std::cout << "wrote " << svg << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parareal with an averaged coarse solver: window sweep experiments"};
  app.set_config("--config", "", "key = value file mirroring the flags; flags win");
  app.require_subcommand(1);

  Options o;
  app.add_option("--epsilon", o.epsilons, "epsilon values (comma separated)")->delimiter(',');
  app.add_option("--froude", o.run.froude, "Froude parameter F")->capture_default_str();
  app.add_option("--nx", o.run.nx, "grid points")->capture_default_str();
  app.add_option("--dt-fine", o.run.dt_fine, "fine timestep")->capture_default_str();
  app.add_option("--dt-coarse", o.run.dt_coarse, "coarse timestep (slab length)")
      ->capture_default_str();
  app.add_option("--window", o.windows, "averaging windows T0 in fast time (comma separated)")
      ->delimiter(',');
  app.add_option("--kernel", o.kernel, "averaging kernel")
      ->check(CLI::IsMember({"bump", "gaussian"}))
      ->capture_default_str();
  app.add_option("--quad-points", o.run.quad_points, "quadrature nodes, 0 for automatic")
      ->capture_default_str();
  app.add_option("--tol", o.run.tol, "parareal tolerance")->capture_default_str();
  app.add_option("--max-iters", o.run.max_iters, "parareal iteration cap")->capture_default_str();
  app.add_option("--t-end", o.run.t_end, "final time")->capture_default_str();
  app.add_option("--out-dir", o.out_dir, "output directory")->capture_default_str();
  app.add_option("--workers", o.run.workers, "concurrent sweep cells")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", o.seed, "recorded in the output metadata")->capture_default_str();
  app.add_option("--ic-width", o.run.ic_width, "width of the Gaussian height field")
      ->capture_default_str();
  app.add_option("--fixed-iters", o.run.fixed_iterations,
                 "iterations for iterative_error_vs_window")
      ->capture_default_str();
  app.add_option("--horizon", o.horizon, "averaging_oracle horizon, 0 for one coarse step")
      ->capture_default_str();
  app.add_option("--constants", o.constants_file,
                 "load fitted constants instead of fitting (optimal_window_prediction)");
  app.add_option("--k-max", o.k_max, "triads: largest |k|, 0 for the dealiasing cutoff");

  const std::vector<std::pair<ExperimentKind, std::string>> experiments = {
      {ExperimentKind::iterations_vs_window, "parareal iterations to tolerance per window"},
      {ExperimentKind::coarse_error_vs_window, "free-running coarse error per window"},
      {ExperimentKind::iterative_error_vs_window, "parareal error after a fixed iteration count"},
      {ExperimentKind::optimal_window_prediction, "fit window model, compare predicted optima"},
      {ExperimentKind::averaging_oracle, "averaging error of the averaged equation vs window"},
  };
  std::vector<std::pair<CLI::App*, ExperimentKind>> subs;
  for (const auto& [kind, help] : experiments)
    subs.emplace_back(app.add_subcommand(to_string(kind), help)->fallthrough(), kind);

  auto* triads = app.add_subcommand("triads", "export the resonance triad table")->fallthrough();
  PlotOptions p;
  auto* plot = app.add_subcommand("plot", "render an SVG from a sweep CSV")->fallthrough();
  plot->add_option("--csv", p.csv, "input table")->required()->check(CLI::ExistingFile);
  plot->add_option("--svg", p.svg, "output file, default next to the CSV");
  plot->add_option("--x", p.x, "x column")->capture_default_str();
  plot->add_option("--y", p.y, "y column(s)")->required()->delimiter(',');
  plot->add_option("--series", p.series, "grouping column, empty for one series per y column")
      ->capture_default_str();
  plot->add_option("--title", p.title, "plot title");
  plot->add_flag("--linear-x", p.linear_x, "linear x axis");
  plot->add_flag("--linear-y", p.linear_y, "linear y axis");

  CLI11_PARSE(app, argc, argv);

  try {
    if (triads->parsed()) return run_triads(o);
    if (plot->parsed()) return run_plot(p);
    for (const auto& [sub, kind] : subs) {
      if (!sub->parsed()) continue;
      const auto spec = make_spec(kind, o);
      const auto res = run_experiment(spec, o.horizon);
      report(res, write_outputs(res, spec.output_dir));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
