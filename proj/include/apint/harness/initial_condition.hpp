#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "apint/spectral_rswe.hpp"

namespace apint::harness {

enum class InitialKind { gaussian_height };

struct InitialCondition {
  SpectralState state;
  std::vector<std::string> warnings;
};

// Stationary flow with h(x) = exp(-((x - L/2) / width)^2). The Nyquist
// coefficient is dropped so the state is exactly conjugate symmetric.
inline InitialCondition make_initial_condition(const ModelConfig& cfg,
                                               InitialKind kind = InitialKind::gaussian_height,
                                               double width = 0.5) {
  cfg.validate();
  if (kind != InitialKind::gaussian_height) throw std::invalid_argument("unknown initial kind");
  if (!(width > 0.0)) throw std::invalid_argument("gaussian width must be positive");

  const auto x = grid_points(cfg);
  std::vector<double> h(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = (x[j] - 0.5 * cfg.domain_length) / width;
    h[j] = std::exp(-d * d);
  }
  InitialCondition ic{SpectralState::zeros(cfg.n_modes), {}};
  auto spectral = to_spectral(h);
  const int n = cfg.n_modes;
  spectral[n / 2] = 0.0;
  spectral[0] = Complex(spectral[0].real(), 0.0);
  for (int j = 1; j < n / 2; ++j) spectral[n - j] = std::conj(spectral[j]);
  set_component(ic.state, 2, spectral);

  const double tail = std::abs(spectral[cfg.dealias_cutoff()]);
  if (tail > 1e-8)
    ic.warnings.push_back("gaussian width " + std::to_string(width) +
                          " is under-resolved: spectral tail " + std::to_string(tail) +
                          " at the dealiasing cutoff");
  return ic;
}

}  // namespace apint::harness
