#pragma once

// Parareal iteration
//
//   U_n^k = G(U_{n-1}^k) + F(U_{n-1}^{k-1}) - G(U_{n-1}^{k-1}),
//
// with the fine jumps F computed concurrently over slabs and the corrected
// sweep done serially. The correction is evaluated as F + (G_new - G_old) so
// that an unchanged input reproduces the fine value bit for bit; slabs n <= k
// therefore match the serial fine solution exactly.

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "apint/detail/parallel.hpp"
#include "apint/propagators.hpp"

namespace apint {

struct PararealConfig {
  int n_slabs = 10;
  double t_end = 1.0;
  double tol = 1e-7;
  int max_iters = 10;
  int workers = 1;
  CoarseConfig coarse;
  FineConfig fine;

  double slab_length() const { return t_end / n_slabs; }

  void validate() const {
    if (n_slabs < 2) throw std::invalid_argument("need at least two slabs");
    if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (std::abs(n_slabs * coarse.dt - t_end) > 1e-12 * t_end)
      throw std::invalid_argument("n_slabs * coarse dt must equal t_end");
    coarse.validate();
    fine.validate();
    step_count(coarse.dt, fine.dt);
  }
};

enum class RunStatus { converged, no_converge, blowup };

inline std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::converged: return "ok";
    case RunStatus::no_converge: return "no_converge";
    case RunStatus::blowup: return "blowup";
  }
  return "unknown";
}

struct PararealRun {
  std::vector<std::vector<SpectralState>> iterates;  // iterates[k][n] = U_n^k
  std::vector<double> errors;                        // max_n relative error of iterate k
  std::optional<int> converged_at;
  std::vector<SpectralState> reference;  // serial fine solution at slab boundaries
  std::vector<SpectralState> coarse_of_latest;  // G(U_{n-1}^k) for the last k, index n
  RunStatus status = RunStatus::no_converge;
  std::string message;

  int iterations() const { return static_cast<int>(iterates.size()) - 1; }
};

// Slab propagators for one APinT configuration. Each maps a state at T_{n-1}
// to T_n.
struct SlabPropagators {
  std::function<SpectralState(const SpectralState&)> fine;
  std::function<SpectralState(const SpectralState&)> coarse;
};

inline SlabPropagators make_apint_propagators(const ModelConfig& model,
                                              const EigenDecomposition& eig,
                                              const PararealConfig& cfg) {
  return {
      [&model, &eig, cfg](const SpectralState& s) {
        return fine_propagate(s, cfg.coarse.dt, model, eig, cfg.fine);
      },
      [&model, &eig, cfg](const SpectralState& s) {
        return coarse_propagate(s, cfg.coarse.dt, model, eig, cfg.coarse);
      },
  };
}

namespace detail {

inline double max_relative_error(const std::vector<SpectralState>& iterate,
                                 const std::vector<SpectralState>& reference) {
  double worst = 0.0;
  for (std::size_t n = 1; n < iterate.size(); ++n)
    worst = std::max(worst, relative_difference(iterate[n], reference[n]));
  return worst;
}

}  // namespace detail

template <class Fine>
std::vector<SpectralState> serial_fine_reference(const SpectralState& u0,
                                                 const PararealConfig& cfg, const Fine& fine) {
  std::vector<SpectralState> ref{u0};
  for (int n = 1; n <= cfg.n_slabs; ++n) {
    ref.push_back(fine(ref.back()));
    ref.back().time = n * cfg.slab_length();
  }
  return ref;
}

// U_n^0 = G(U_{n-1}^0), U_0^0 = u0. Also records G(U_{n-1}^0) for reuse.
template <class Coarse>
std::vector<SpectralState> initial_coarse_sweep(const SpectralState& u0,
                                                const PararealConfig& cfg, const Coarse& coarse,
                                                std::vector<SpectralState>* coarse_values = nullptr) {
  std::vector<SpectralState> states{u0};
  std::vector<SpectralState> g{u0};
  for (int n = 1; n <= cfg.n_slabs; ++n) {
    g.push_back(coarse(states.back()));
    g.back().time = n * cfg.slab_length();
    states.push_back(g.back());
  }
  if (coarse_values) *coarse_values = std::move(g);
  return states;
}

// Appends iterate k = run.iterations() + 1 and its error against run.reference.
template <class Fine, class Coarse>
void parareal_iterate(PararealRun& run, const PararealConfig& cfg, const Fine& fine,
                      const Coarse& coarse) {
  if (run.iterates.empty()) throw std::logic_error("parareal_iterate needs an initial sweep");
  const auto& prev = run.iterates.back();
  const int n_slabs = cfg.n_slabs;

  std::vector<SpectralState> jumps(n_slabs + 1);
  detail::parallel_for(static_cast<std::size_t>(n_slabs), cfg.workers, [&](std::size_t i) {
    const int n = static_cast<int>(i) + 1;
    try {
      jumps[n] = fine(prev[n - 1]);
    } catch (const NumericalBlowup& e) {
      throw NumericalBlowup("fine solve on slab " + std::to_string(n) + ": " + e.what(),
                            e.time());
    }
  });

  std::vector<SpectralState> next{prev[0]};
  std::vector<SpectralState> g{prev[0]};
  for (int n = 1; n <= n_slabs; ++n) {
    g.push_back(coarse(next.back()));
    SpectralState u{jumps[n].coeffs + (g.back().coeffs - run.coarse_of_latest[n].coeffs),
                    n * cfg.slab_length()};
    next.push_back(std::move(u));
  }
  run.coarse_of_latest = std::move(g);
  run.errors.push_back(detail::max_relative_error(next, run.reference));
  run.iterates.push_back(std::move(next));
}

// Full driver. `fixed_iterations`, when set, runs exactly that many
// iterations regardless of the tolerance.
template <class Fine, class Coarse>
PararealRun run_apint(const SpectralState& u0, const PararealConfig& cfg, const Fine& fine,
                      const Coarse& coarse, std::optional<int> fixed_iterations = std::nullopt) {
  cfg.validate();
  PararealRun run;
  run.reference = serial_fine_reference(u0, cfg, fine);
  const int limit = fixed_iterations.value_or(cfg.max_iters);
  try {
    run.iterates.push_back(initial_coarse_sweep(u0, cfg, coarse, &run.coarse_of_latest));
    run.errors.push_back(detail::max_relative_error(run.iterates.back(), run.reference));
    auto check = [&] {
      if (!run.converged_at && run.errors.back() <= cfg.tol)
        run.converged_at = run.iterations();
      return run.converged_at.has_value() && !fixed_iterations;
    };
    if (!check()) {
      for (int k = 1; k <= limit; ++k) {
        parareal_iterate(run, cfg, fine, coarse);
        if (check()) break;
      }
    }
    run.status = run.converged_at ? RunStatus::converged : RunStatus::no_converge;
  } catch (const NumericalBlowup& e) {
    run.status = RunStatus::blowup;
    run.message = e.what();
  }
  return run;
}

inline PararealRun run_apint(const SpectralState& u0, const PararealConfig& cfg,
                             const ModelConfig& model, const EigenDecomposition& eig,
                             std::optional<int> fixed_iterations = std::nullopt) {
  const auto props = make_apint_propagators(model, eig, cfg);
  return run_apint(u0, cfg, props.fine, props.coarse, fixed_iterations);
}

// (iteration, error) pairs of the run record.
inline std::vector<std::pair<int, double>> error_vs_iteration(const PararealRun& run) {
  if (run.errors.empty()) throw std::invalid_argument("run has no iterates");
  std::vector<std::pair<int, double>> out;
  for (std::size_t k = 0; k < run.errors.size(); ++k)
    out.emplace_back(static_cast<int>(k), run.errors[k]);
  return out;
}

// errors[k] / errors[k-1] for k >= 1; entries with a zero predecessor are skipped.
inline std::vector<double> contraction_factors(const PararealRun& run) {
  std::vector<double> out;
  for (std::size_t k = 1; k < run.errors.size(); ++k)
    if (run.errors[k - 1] > 0.0) out.push_back(run.errors[k] / run.errors[k - 1]);
  return out;
}

}  // namespace apint
