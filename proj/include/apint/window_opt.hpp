#pragma once

// Optimal averaging window.
//
// Full model: minimize over the window eta
//
//   J(eta) = c1 dT^3 eps Lambda(eta) + (c2 + c3 eps) eps eta,
//
// the sum of the timestepping and averaging error bounds. Simple model:
// eta = sqrt(d1 dT / (c2 + c3 eps)). Heuristic: eta = dT / eps^s.
//
// eta is the numerical window T0 of the coarse solver; Lambda uses the
// mismatches lambda_n = |Omega| / eps.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "apint/averaging_kernel.hpp"
#include "apint/detail/number_format.hpp"
#include "apint/detail/parallel.hpp"
#include "apint/resonance.hpp"

namespace apint {

struct FitConstants {
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 0.0;
  double d1 = 1.0;

  void validate() const {
    for (double c : {c1, c2, c3, d1})
      if (!std::isfinite(c) || c < 0.0)
        throw std::invalid_argument("fit constants must be finite and nonnegative");
  }
};

struct WindowBracket {
  double lo;
  double hi;

  static WindowBracket for_timestep(double dt_coarse) {
    return {0.05 * dt_coarse, 100.0 * dt_coarse};
  }
};

struct FullOptimum {
  double eta = 0.0;
  double value = 0.0;
  bool on_boundary = false;
  // |J'(eta)| / ((c2 + c3 eps) eps) by central difference; meaningful only
  // for interior minima.
  double stationarity = 0.0;
};

struct WindowPrediction {
  double eta_full = 0.0;
  double eta_simple = 0.0;
  double eta_scaling = 0.0;
  bool full_on_boundary = false;
};

inline double objective(double eta, double epsilon, double dt_coarse, const FitConstants& consts,
                        std::span<const double> lambdas, const Kernel& kernel) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  const double stiff =
      consts.c1 == 0.0 ? 0.0 : lambda_functional(eta, dt_coarse, lambdas, kernel);
  return consts.c1 * std::pow(dt_coarse, 3) * epsilon * stiff +
         (consts.c2 + consts.c3 * epsilon) * epsilon * eta;
}

inline double objective(double eta, double epsilon, double dt_coarse, const FitConstants& consts,
                        const TriadTable& triads, const Kernel& kernel) {
  const auto lambdas = mismatch_spectrum(triads, epsilon);
  return objective(eta, epsilon, dt_coarse, consts, lambdas, kernel);
}

namespace detail {

inline std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> grid(points);
  const double ratio = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) grid[i] = lo * std::exp(ratio * i);
  grid.back() = hi;
  return grid;
}

// d Lambda / d eta by central difference with relative step 1e-4.
inline double lambda_derivative(double eta, double dt_coarse, std::span<const double> lambdas,
                                const Kernel& kernel) {
  const double h = 1e-4 * eta;
  return (lambda_functional(eta + h, dt_coarse, lambdas, kernel) -
          lambda_functional(eta - h, dt_coarse, lambdas, kernel)) /
         (2.0 * h);
}

}  // namespace detail

inline double stationarity_residual(double eta, double epsilon, double dt_coarse,
                                    const FitConstants& consts, std::span<const double> lambdas,
                                    const Kernel& kernel) {
  const double linear = (consts.c2 + consts.c3 * epsilon) * epsilon;
  const double slope = consts.c1 * std::pow(dt_coarse, 3) * epsilon *
                           detail::lambda_derivative(eta, dt_coarse, lambdas, kernel) +
                       linear;
  return linear > 0.0 ? std::abs(slope) / linear : std::abs(slope);
}

// Grid scan on a log grid, then golden section inside the cells around the
// best grid point. Ties on the grid go to the larger window.
inline FullOptimum optimize_full(double epsilon, double dt_coarse, const FitConstants& consts,
                                 std::span<const double> lambdas, const Kernel& kernel,
                                 WindowBracket bracket, int grid_points = 96) {
  consts.validate();
  if (!(bracket.lo > 0.0 && bracket.hi > bracket.lo))
    throw std::invalid_argument("invalid window bracket");
  if (grid_points < 3) throw std::invalid_argument("need at least three grid points");
  auto f = [&](double eta) {
    return objective(eta, epsilon, dt_coarse, consts, lambdas, kernel);
  };

  const auto grid = detail::log_grid(bracket.lo, bracket.hi, grid_points);
  std::size_t best = 0;
  double best_value = f(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double v = f(grid[i]);
    if (v <= best_value) {
      best = i;
      best_value = v;
    }
  }

  FullOptimum out;
  if (best == 0 || best + 1 == grid.size()) {
    out.eta = grid[best];
    out.value = best_value;
    out.on_boundary = true;
    return out;
  }

  constexpr double inv_phi = 0.6180339887498949;
  double a = grid[best - 1], b = grid[best + 1];
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > 1e-12 * b) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  out.eta = f1 <= f2 ? x1 : x2;
  out.value = std::min(f1, f2);
  if (best_value < out.value) {
    out.eta = grid[best];
    out.value = best_value;
  }
  out.stationarity = stationarity_residual(out.eta, epsilon, dt_coarse, consts, lambdas, kernel);
  return out;
}

inline FullOptimum optimize_full(double epsilon, double dt_coarse, const FitConstants& consts,
                                 std::span<const double> lambdas, const Kernel& kernel) {
  return optimize_full(epsilon, dt_coarse, consts, lambdas, kernel,
                       WindowBracket::for_timestep(dt_coarse));
}

inline FullOptimum optimize_full(double epsilon, double dt_coarse, const FitConstants& consts,
                                 const TriadTable& triads, const Kernel& kernel) {
  const auto lambdas = mismatch_spectrum(triads, epsilon);
  return optimize_full(epsilon, dt_coarse, consts, lambdas, kernel);
}

inline double optimize_simple(double epsilon, double dt_coarse, const FitConstants& consts) {
  consts.validate();
  const double denom = consts.c2 + consts.c3 * epsilon;
  if (!(denom > 0.0)) throw std::invalid_argument("c2 + c3 * epsilon must be positive");
  if (!(consts.d1 > 0.0)) throw std::invalid_argument("d1 must be positive");
  if (!(dt_coarse > 0.0)) throw std::invalid_argument("coarse timestep must be positive");
  return std::sqrt(consts.d1 * dt_coarse / denom);
}

inline double scaling_heuristic(double epsilon, double dt_coarse, double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("scaling exponent must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  return dt_coarse * std::pow(epsilon, -s);
}

inline WindowPrediction predict_window(double epsilon, double dt_coarse,
                                       const FitConstants& consts, const TriadTable& triads,
                                       const Kernel& kernel, double s = 0.2) {
  const auto full = optimize_full(epsilon, dt_coarse, consts, triads, kernel);
  return {full.eta, optimize_simple(epsilon, dt_coarse, consts),
          scaling_heuristic(epsilon, dt_coarse, s), full.on_boundary};
}

// ---------------------------------------------------------------------------
// Fitting

struct WindowMeasurement {
  double epsilon;
  double dt_coarse;
  double eta_opt;
  double min_error;
};

struct FitResult {
  FitConstants constants;
  double location_residual = 0.0;  // rms of log(eta_full / eta_measured)
  double value_residual = 0.0;     // rms of log(J(eta_measured) / measured error)
};

namespace detail {

// min ||A x - y||_2 subject to x >= 0 by enumerating active sets; meant for
// a handful of unknowns.
inline Eigen::VectorXd small_nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
  const int n = static_cast<int>(a.cols());
  Eigen::VectorXd best = Eigen::VectorXd::Zero(n);
  double best_cost = y.squaredNorm();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> cols;
    for (int j = 0; j < n; ++j)
      if (mask & (1u << j)) cols.push_back(j);
    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) sub.col(static_cast<Eigen::Index>(j)) = a.col(cols[j]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
    if (qr.rank() < static_cast<Eigen::Index>(cols.size())) continue;
    const Eigen::VectorXd z = qr.solve(y);
    if ((z.array() < 0.0).any()) continue;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (std::size_t j = 0; j < cols.size(); ++j) x(cols[j]) = z(static_cast<Eigen::Index>(j));
    const double cost = (a * x - y).squaredNorm();
    if (cost < best_cost) {
      best = x;
      best_cost = cost;
    }
  }
  return best;
}

// Objective of one measurement tabulated on a log grid of windows; the two
// parts are kept apart so constants can change without recomputing Lambda.
struct TabulatedObjective {
  std::vector<double> eta;
  std::vector<double> stiff;   // dT^3 eps Lambda(eta)
  double epsilon;

  std::size_t argmin(const FitConstants& c) const {
    std::size_t best = 0;
    double best_value = value(c, 0);
    for (std::size_t j = 1; j < eta.size(); ++j) {
      const double v = value(c, j);
      if (v <= best_value) {
        best = j;
        best_value = v;
      }
    }
    return best;
  }
  double value(const FitConstants& c, std::size_t j) const {
    return c.c1 * stiff[j] + (c.c2 + c.c3 * epsilon) * epsilon * eta[j];
  }
};

}  // namespace detail

// Fits the constants from measured optimal windows.
//
// The error values at the measured windows are linear in (c1, c2, c3), so a
// nonnegative least-squares solve of J_i(eta_i) = error_i gives a starting
// point that fixes the overall scale. A pattern search on the logarithms of
// the nonzero constants then minimizes the misfit between the predicted and
// measured minimizer locations, rescaling after each move so the values stay
// anchored. Finally d1 is chosen so the simple model matches the measured
// windows in the log least-squares sense.
inline FitResult fit_constants(std::span<const WindowMeasurement> data, const TriadTable& triads,
                               const Kernel& kernel, int workers = 1, int table_points = 321) {
  if (data.size() < 3) throw std::invalid_argument("need at least three measurements");
  std::vector<double> eps_values;
  for (const auto& m : data) {
    if (!(m.epsilon > 0.0 && m.dt_coarse > 0.0 && m.eta_opt > 0.0 && m.min_error > 0.0))
      throw std::invalid_argument("measurements must be positive");
    eps_values.push_back(m.epsilon);
  }
  std::sort(eps_values.begin(), eps_values.end());
  if (std::unique(eps_values.begin(), eps_values.end()) - eps_values.begin() < 2)
    throw std::invalid_argument("measurements must span at least two epsilon values");

  const std::size_t n = data.size();
  std::vector<std::vector<double>> spectra(n);
  std::vector<detail::TabulatedObjective> tables(n);
  std::vector<double> stiff_at_measured(n);
  detail::parallel_for(n, workers, [&](std::size_t i) {
    const auto& m = data[i];
    spectra[i] = mismatch_spectrum(triads, m.epsilon);
    const double factor = std::pow(m.dt_coarse, 3) * m.epsilon;
    const auto bracket = WindowBracket::for_timestep(m.dt_coarse);
    auto& t = tables[i];
    t.epsilon = m.epsilon;
    t.eta = detail::log_grid(bracket.lo, bracket.hi, table_points);
    t.stiff.resize(t.eta.size());
    for (std::size_t j = 0; j < t.eta.size(); ++j)
      t.stiff[j] = factor * lambda_functional(t.eta[j], m.dt_coarse, spectra[i], kernel);
    stiff_at_measured[i] = factor * lambda_functional(m.eta_opt, m.dt_coarse, spectra[i], kernel);
  });

  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), 3);
  Eigen::VectorXd y = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& m = data[i];
    const auto r = static_cast<Eigen::Index>(i);
    a(r, 0) = stiff_at_measured[i] / m.min_error;
    a(r, 1) = m.epsilon * m.eta_opt / m.min_error;
    a(r, 2) = m.epsilon * m.epsilon * m.eta_opt / m.min_error;
  }
  const Eigen::VectorXd nnls = detail::small_nnls(a, y);

  auto values_at_measured = [&](const FitConstants& c) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
      v[i] = c.c1 * stiff_at_measured[i] +
             (c.c2 + c.c3 * data[i].epsilon) * data[i].epsilon * data[i].eta_opt;
    return v;
  };
  auto value_misfit = [&](const FitConstants& c) {
    const auto v = values_at_measured(c);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = std::log(v[i] / data[i].min_error);
      sum += e * e;
    }
    return sum;
  };
  auto rescale = [&](FitConstants c) {
    const auto v = values_at_measured(c);
    double log_scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) log_scale += std::log(data[i].min_error / v[i]);
    const double s = std::exp(log_scale / n);
    c.c1 *= s;
    c.c2 *= s;
    c.c3 *= s;
    return c;
  };
  // Misfit in log window, with one table cell of slack for the tabulation.
  const double cell = std::log(tables[0].eta[1] / tables[0].eta[0]);
  auto location_misfit = [&](const FitConstants& c) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e =
          std::abs(std::log(tables[i].eta[tables[i].argmin(c)] / data[i].eta_opt));
      sum += std::pow(std::max(0.0, e - cell), 2);
    }
    return sum;
  };
  auto search = [&](FitConstants c) {
    double misfit = location_misfit(c);
    for (double step = 1.0; step > 1e-3 && misfit > 0.0; step *= 0.5) {
      bool improved = true;
      while (improved && misfit > 0.0) {
        improved = false;
        for (double FitConstants::*field : {&FitConstants::c1, &FitConstants::c2, &FitConstants::c3}) {
          if (c.*field == 0.0) continue;
          for (double dir : {1.0, -1.0}) {
            FitConstants trial = c;
            trial.*field *= std::exp(dir * step);
            trial = rescale(trial);
            const double m = location_misfit(trial);
            if (m < misfit) {
              c = trial;
              misfit = m;
              improved = true;
            }
          }
        }
      }
    }
    return std::pair{c, misfit};
  };

  // Second start: c2 = c3 with the two error terms balanced on average.
  double log_ratio = 0.0;
  int terms = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (stiff_at_measured[i] <= 0.0) continue;
    log_ratio += std::log((1.0 + data[i].epsilon) * data[i].epsilon * data[i].eta_opt /
                          stiff_at_measured[i]);
    ++terms;
  }
  std::vector<FitConstants> starts{
      rescale({terms ? std::exp(log_ratio / terms) : 1.0, 1.0, 1.0, 1.0})};
  if (nnls(0) > 0.0 && nnls(1) + nnls(2) > 0.0) starts.insert(starts.begin(), {nnls(0), nnls(1), nnls(2), 1.0});

  FitConstants best;
  double best_misfit = std::numeric_limits<double>::infinity(), best_value = best_misfit;
  for (const auto& s0 : starts) {
    const auto [c, m] = search(s0);
    const double v = value_misfit(c);
    if (m < best_misfit || (m == best_misfit && v < best_value)) {
      best = c;
      best_misfit = m;
      best_value = v;
    }
  }

  FitResult out;
  out.constants = best;
  double log_d1 = 0.0;
  for (const auto& m : data)
    log_d1 += 2.0 * std::log(m.eta_opt) -
              std::log(m.dt_coarse / (best.c2 + best.c3 * m.epsilon));
  out.constants.d1 = std::exp(log_d1 / n);

  out.value_residual = std::sqrt(value_misfit(out.constants) / n);

  std::vector<double> misfit(n);
  detail::parallel_for(n, workers, [&](std::size_t i) {
    const auto opt =
        optimize_full(data[i].epsilon, data[i].dt_coarse, out.constants, spectra[i], kernel);
    misfit[i] = std::log(opt.eta / data[i].eta_opt);
  });
  double loc = 0.0;
  for (double e : misfit) loc += e * e;
  out.location_residual = std::sqrt(loc / n);
  return out;
}

// ---------------------------------------------------------------------------
// Persistence: one "key = value" line per constant, '#' comments.

inline void save_constants(std::ostream& os, const FitConstants& c) {
  os << "# apint fit constants v1\n";
  os << "c1 = " << detail::format_double(c.c1) << "\n";
  os << "c2 = " << detail::format_double(c.c2) << "\n";
  os << "c3 = " << detail::format_double(c.c3) << "\n";
  os << "d1 = " << detail::format_double(c.d1) << "\n";
}

inline FitConstants load_constants(std::istream& is) {
  std::map<std::string, double> values;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("constants line " + std::to_string(lineno) + ": expected key = value");
    std::istringstream key_in(line.substr(0, eq)), value_in(line.substr(eq + 1));
    std::string key, rest;
    double value;
    key_in >> key;
    if (!(value_in >> value) || (value_in >> rest))
      throw std::runtime_error("constants line " + std::to_string(lineno) + ": bad number");
    if (key != "c1" && key != "c2" && key != "c3" && key != "d1")
      throw std::runtime_error("constants line " + std::to_string(lineno) + ": unknown key '" +
                               key + "'");
    values[key] = value;
  }
  for (const char* key : {"c1", "c2", "c3", "d1"})
    if (!values.count(key)) throw std::runtime_error(std::string("constants file lacks ") + key);
  FitConstants c{values["c1"], values["c2"], values["c3"], values["d1"]};
  c.validate();
  return c;
}

inline void save_constants(const std::string& path, const FitConstants& c) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  save_constants(os, c);
}

inline FitConstants load_constants(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  return load_constants(is);
}

}  // namespace apint
