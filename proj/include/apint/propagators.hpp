#pragma once

// Fine and coarse evolution operators.
//
// Fine: Strang splitting of u_t = -(1/eps) L u - N(u, u): exact half-step
// linear flow, explicit midpoint step of u_t = -N(u, u), exact half-step
// linear flow.
//
// Coarse: map to averaged variables ubar = e^{t L/eps} u, integrate
//   ubar_t = -Nbar(ubar; t)
// with explicit midpoint, and map back with e^{-t L/eps}. The window T0 is
// in fast-time units; window_opt identifies eta with T0.

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "apint/averaging_kernel.hpp"
#include "apint/spectral_rswe.hpp"

namespace apint {

class NumericalBlowup : public std::runtime_error {
 public:
  NumericalBlowup(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

struct FineConfig {
  double dt = 2e-4;

  void validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("fine timestep must be positive");
  }
};

struct CoarseConfig {
  double dt = 0.1;  // slab length dT
  int substeps = 1;
  AveragingConfig averaging;
  Kernel kernel = Kernel::bump();

  void validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("coarse timestep must be positive");
    if (substeps < 1) throw std::invalid_argument("coarse substeps must be >= 1");
    averaging.validate();
  }
};

// Number of steps of length `step` in `duration`, requiring an integer ratio
// to 1e-12 relative.
inline long step_count(double duration, double step) {
  if (duration < 0.0) throw std::invalid_argument("negative duration");
  const double ratio = duration / step;
  const long count = std::lround(ratio);
  if (std::abs(count * step - duration) > 1e-12 * std::max(duration, step))
    throw std::invalid_argument("duration is not a multiple of the timestep");
  return count;
}

namespace detail {

class BlowupGuard {
 public:
  explicit BlowupGuard(const SpectralState& initial)
      : limit_(1e6 * std::max(initial.norm(), 1e-300)) {}

  void check(const SpectralState& s) const {
    for (Eigen::Index j = 0; j < s.coeffs.size(); ++j) {
      const Complex c = s.coeffs.data()[j];
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()) || std::abs(c) > limit_) {
        std::ostringstream msg;
        msg << "numerical blow-up at t = " << s.time;
        throw NumericalBlowup(msg.str(), s.time);
      }
    }
  }

 private:
  double limit_;
};

}  // namespace detail

// Advisory CFL-type number max|omega| dt / eps; the linear part is exact, so
// values above 2 only warrant a warning.
inline double fine_stiffness_number(const ModelConfig& cfg, const EigenDecomposition& eig,
                                    double dt) {
  return eig.max_frequency() * dt / cfg.epsilon;
}

// Same estimate for the coarse solver: the fastest mismatch 3 max|omega| / eps
// damped by the kernel transform over the window.
inline double coarse_stiffness_number(const ModelConfig& cfg, const EigenDecomposition& eig,
                                      const CoarseConfig& coarse) {
  const double mismatch = 3.0 * eig.max_frequency();
  const double h = coarse.dt / coarse.substeps;
  if (coarse.averaging.is_pointwise()) return mismatch * h / cfg.epsilon;
  const double damping =
      std::abs(coarse.kernel.fourier_integral(mismatch * coarse.averaging.window));
  return mismatch * h / cfg.epsilon * std::sqrt(damping);
}

template <class Nonlinear = RswNonlinear>
SpectralState fine_step(const SpectralState& state, const ModelConfig& cfg,
                        const EigenDecomposition& eig, double dt,
                        const Nonlinear& nonlinear = {}) {
  if (dt == 0.0) return state;
  const double half = -0.5 * dt / cfg.epsilon;
  SpectralState u = apply_linear_exponential(state, half, eig);
  const SpectralState k1 = nonlinear(u, cfg);
  SpectralState mid{u.coeffs - (0.5 * dt) * k1.coeffs, u.time};
  const SpectralState k2 = nonlinear(mid, cfg);
  u.coeffs -= dt * k2.coeffs;
  u = apply_linear_exponential(u, half, eig);
  u.time = state.time + dt;
  return u;
}

template <class Nonlinear = RswNonlinear>
SpectralState fine_propagate(const SpectralState& state, double duration, const ModelConfig& cfg,
                             const EigenDecomposition& eig, const FineConfig& fine,
                             const Nonlinear& nonlinear = {}) {
  fine.validate();
  const long steps = step_count(duration, fine.dt);
  const detail::BlowupGuard guard(state);
  SpectralState u = state;
  for (long i = 0; i < steps; ++i) {
    u = fine_step(u, cfg, eig, fine.dt, nonlinear);
    guard.check(u);
  }
  u.time = state.time + duration;
  return u;
}

template <class Nonlinear = RswNonlinear>
SpectralState coarse_propagate(const SpectralState& state, double duration,
                               const ModelConfig& cfg, const EigenDecomposition& eig,
                               const CoarseConfig& coarse, const Nonlinear& nonlinear = {}) {
  coarse.validate();
  if (!(duration > 0.0)) throw std::invalid_argument("coarse duration must be positive");
  const double t0 = state.time;
  const double h = duration / coarse.substeps;
  const detail::BlowupGuard guard(state);

  SpectralState ubar = apply_linear_exponential(state, t0 / cfg.epsilon, eig);
  for (int i = 0; i < coarse.substeps; ++i) {
    const double t = t0 + i * h;
    const SpectralState k1 =
        averaged_nonlinear(ubar, t, cfg, eig, coarse.averaging, coarse.kernel, nonlinear);
    const SpectralState mid{ubar.coeffs - (0.5 * h) * k1.coeffs, t + 0.5 * h};
    const SpectralState k2 = averaged_nonlinear(mid, t + 0.5 * h, cfg, eig, coarse.averaging,
                                                coarse.kernel, nonlinear);
    ubar.coeffs -= h * k2.coeffs;
    ubar.time = t + h;
    guard.check(ubar);
  }
  const double t1 = t0 + duration;
  SpectralState u = apply_linear_exponential(ubar, -t1 / cfg.epsilon, eig);
  u.time = t1;
  guard.check(u);
  return u;
}

// Max over slab boundaries of ||x(T_n) - y(T_n)|| between a fine reference
// and a free-running coarse trajectory.
template <class Fine, class Coarse>
double coarse_error_norm(const Fine& fine_slab, const Coarse& coarse_slab,
                         const SpectralState& initial, int n_slabs) {
  SpectralState x = initial, y = initial;
  double worst = 0.0;
  for (int n = 0; n < n_slabs; ++n) {
    x = fine_slab(x);
    y = coarse_slab(y);
    worst = std::max(worst, (x.coeffs - y.coeffs).norm());
  }
  return worst;
}

inline double coarse_error_norm(const ModelConfig& cfg, const EigenDecomposition& eig,
                                const FineConfig& fine, const CoarseConfig& coarse,
                                const SpectralState& initial, double horizon) {
  const long n_slabs = step_count(horizon, coarse.dt);
  return coarse_error_norm(
      [&](const SpectralState& s) { return fine_propagate(s, coarse.dt, cfg, eig, fine); },
      [&](const SpectralState& s) { return coarse_propagate(s, coarse.dt, cfg, eig, coarse); },
      initial, static_cast<int>(n_slabs));
}

}  // namespace apint
