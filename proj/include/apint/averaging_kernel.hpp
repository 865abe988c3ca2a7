#pragma once

// Fast-wave averaging of the conjugated nonlinear operator.
//
// For a window T0 and M quadrature cells,
//
//   Nbar(u; t) = (1/M) sum_m rho(s_m / T0) e^{(t/eps + s_m) L} N(e^{-(t/eps + s_m) L} u),
//
// with midpoint nodes s_m = (m + 1/2) T0 / M. T0 is measured in fast time,
// so the window covers eps * T0 of slow time. At t = 0 this is the plain
// kernel average; the coarse propagator passes its absolute time t.
//
// Lambda(eta) = max_n lambda_n^2 |int_0^1 rho(s) exp(i lambda_n eta dT s) ds|
// measures how much stiffness survives the averaging.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "apint/resonance.hpp"
#include "apint/spectral_rswe.hpp"

namespace apint {

enum class KernelKind { bump, gaussian };

inline std::string to_string(KernelKind kind) {
  return kind == KernelKind::bump ? "bump" : "gaussian";
}

inline KernelKind parse_kernel_kind(const std::string& name) {
  if (name == "bump") return KernelKind::bump;
  if (name == "gaussian") return KernelKind::gaussian;
  throw std::invalid_argument("unknown kernel kind '" + name + "'");
}

// Unit-mass averaging weight on [0, 1], zero at both endpoints.
//   bump:     rho(s) ~ exp(-1 / (s (1 - s)))
//   gaussian: rho(s) ~ exp(-(s - 1/2)^2 / (2 w^2)) - exp(-1 / (8 w^2))
class Kernel {
 public:
  static Kernel bump() { return Kernel(KernelKind::bump, 0.0); }
  static Kernel gaussian(double width = 0.125) { return Kernel(KernelKind::gaussian, width); }
  static Kernel of_kind(KernelKind kind) {
    return kind == KernelKind::bump ? bump() : gaussian();
  }

  KernelKind kind() const { return kind_; }
  double width() const { return width_; }

  // Unchecked evaluation; callers guarantee 0 <= s <= 1.
  double operator()(double s) const { return raw(s) / mass_; }

  // int_0^1 rho(s) exp(i x s) ds by midpoint quadrature fine enough to
  // resolve the oscillation. The phase factor is advanced by rotation and
  // re-seeded every 64 nodes. The gaussian is only C0 at the ends, so the
  // leading Euler-Maclaurin endpoint term is added back.
  std::complex<double> fourier_integral(double x) const {
    const int n = 256 + 4 * static_cast<int>(std::ceil(std::abs(x)));
    const double h = 1.0 / n;
    const std::complex<double> step = std::polar(1.0, x * h);
    std::complex<double> sum = 0.0, phase;
    for (int m = 0; m < n; ++m) {
      if (m % 64 == 0) phase = std::polar(1.0, x * (m + 0.5) * h);
      sum += (*this)((m + 0.5) * h) * phase;
      phase *= step;
    }
    std::complex<double> out = sum * h;
    if (kind_ == KernelKind::gaussian) {
      const auto d1 = [&](double s) { return endpoint_derivative(s, x, 1); };
      const auto d3 = [&](double s) { return endpoint_derivative(s, x, 3); };
      out += h * h / 24.0 * (d1(1.0) - d1(0.0)) - 7.0 * h * h * h * h / 5760.0 * (d3(1.0) - d3(0.0));
    }
    return out;
  }

  // Beyond this |x| the transform magnitude stays under 1e-13, the rounding
  // floor of the quadrature. Infinite when the tail decays only
  // algebraically.
  double negligible_beyond() const {
    return kind_ == KernelKind::bump ? 800.0 : std::numeric_limits<double>::infinity();
  }

 private:
  Kernel(KernelKind kind, double width) : kind_(kind), width_(width) {
    if (kind == KernelKind::gaussian && !(width > 0.0))
      throw std::invalid_argument("gaussian kernel width must be positive");
    mass_ = raw_mass();
  }

  // First or third derivative of rho(s) exp(i x s) at an endpoint of the
  // gaussian, where rho itself vanishes.
  std::complex<double> endpoint_derivative(double s, double x, int order) const {
    const double w2 = width_ * width_, d = s - 0.5;
    const double g = std::exp(-d * d / (2.0 * w2)) / mass_;
    const double r1 = -d / w2 * g;
    const double r2 = (d * d / (w2 * w2) - 1.0 / w2) * g;
    const double r3 = (-d * d * d / (w2 * w2 * w2) + 3.0 * d / (w2 * w2)) * g;
    const std::complex<double> ix(0.0, x), e = std::polar(1.0, x * s);
    if (order == 1) return r1 * e;
    return (r3 + 3.0 * ix * r2 + 3.0 * ix * ix * r1) * e;
  }

  double raw(double s) const {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    if (kind_ == KernelKind::bump) return std::exp(-1.0 / (s * (1.0 - s)));
    const double d = s - 0.5;
    return std::exp(-d * d / (2.0 * width_ * width_)) - std::exp(-1.0 / (8.0 * width_ * width_));
  }

  double raw_mass() const {
    if (kind_ == KernelKind::gaussian) {
      const double w = width_;
      return w * std::sqrt(two_pi) * std::erf(1.0 / (2.0 * std::sqrt(2.0) * w)) -
             std::exp(-1.0 / (8.0 * w * w));
    }
    // Midpoint is spectrally accurate for a flat-ended C-infinity integrand.
    constexpr int n = 1 << 14;
    double sum = 0.0;
    for (int m = 0; m < n; ++m) sum += raw((m + 0.5) / n);
    return sum / n;
  }

  KernelKind kind_;
  double width_;
  double mass_ = 1.0;
};

inline double kernel_eval(const Kernel& kernel, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::domain_error("kernel argument outside [0, 1]");
  return kernel(s);
}

struct AveragingConfig {
  double window = 1.0;  // T0, fast-time units
  int n_quad = 64;      // M

  // Degenerate average: one node at s = 0 with weight 1, i.e. no averaging.
  static AveragingConfig pointwise() { return {0.0, 1}; }
  bool is_pointwise() const { return window == 0.0 && n_quad == 1; }

  void validate() const {
    if (is_pointwise()) return;
    if (!(window > 0.0)) throw std::invalid_argument("averaging window must be positive");
    if (n_quad < 4) throw std::invalid_argument("need at least 4 quadrature nodes");
  }
};

// Quadrature count that keeps the fastest conjugation phase unaliased: the
// nodes must resolve phases up to 3 max|omega| T0 with a margin of 64
// radians, where the kernel transform is negligible.
inline int recommended_quadrature_points(double window, double max_frequency, int minimum = 16) {
  const double phase = 3.0 * max_frequency * window;
  const int needed = static_cast<int>(std::ceil((phase + 64.0) / two_pi));
  int n = 4;
  while (n < std::max(needed, minimum)) n *= 2;
  return n;
}

struct QuadratureNode {
  double offset;
  double weight;
};

inline std::vector<QuadratureNode> averaging_nodes(const AveragingConfig& avg,
                                                   const Kernel& kernel) {
  avg.validate();
  if (avg.is_pointwise()) return {{0.0, 1.0}};
  // Weights are rescaled to sum to one so constants average exactly.
  std::vector<QuadratureNode> nodes(avg.n_quad);
  double total = 0.0;
  for (int m = 0; m < avg.n_quad; ++m) {
    const double frac = (m + 0.5) / avg.n_quad;
    nodes[m] = {frac * avg.window, kernel(frac)};
    total += nodes[m].weight;
  }
  for (auto& node : nodes) node.weight /= total;
  return nodes;
}

struct RswNonlinear {
  SpectralState operator()(const SpectralState& s, const ModelConfig& cfg) const {
    return eval_nonlinear(s, cfg);
  }
};

// Kernel-weighted average of the conjugated nonlinear operator at time t.
// The sum is accumulated in the eigenbasis in node order, so results are
// bit-reproducible.
template <class Nonlinear = RswNonlinear>
SpectralState averaged_nonlinear(const SpectralState& state, double t, const ModelConfig& cfg,
                                 const EigenDecomposition& eig, const AveragingConfig& avg,
                                 const Kernel& kernel, const Nonlinear& nonlinear = {}) {
  const int n = state.n_modes();
  const int half = n / 2;
  if (eig.n_modes() != n) throw std::invalid_argument("decomposition/state size mismatch");
  const auto nodes = averaging_nodes(avg, kernel);

  std::vector<Vec3> sigma(half + 1), acc(half + 1, Vec3::Zero());
  for (int j = 0; j <= half; ++j) sigma[j] = eig.at_index(j).inverse * state.coeffs.col(j);

  SpectralState shifted{Coeffs(3, n), t};
  for (const auto& node : nodes) {
    const double theta = t / cfg.epsilon + node.offset;
    for (int j = 0; j <= half; ++j) {
      const auto& mode = eig.at_index(j);
      const Complex rot = std::polar(1.0, -mode.omegas[2] * theta);
      const Vec3 rotated(sigma[j](0) * std::conj(rot), sigma[j](1), sigma[j](2) * rot);
      shifted.coeffs.col(j) = mode.right * rotated;
    }
    for (int j = 1; j < half; ++j) shifted.coeffs.col(n - j) = shifted.coeffs.col(j).conjugate();

    const SpectralState product = nonlinear(shifted, cfg);
    for (int j = 0; j <= half; ++j) {
      const auto& mode = eig.at_index(j);
      const Complex rot = std::polar(1.0, mode.omegas[2] * theta);
      const Vec3 back = mode.inverse * product.coeffs.col(j);
      acc[j] += node.weight * Vec3(back(0) * std::conj(rot), back(1), back(2) * rot);
    }
  }

  SpectralState out{Coeffs(3, n), state.time};
  for (int j = 0; j <= half; ++j) out.coeffs.col(j) = eig.at_index(j).right * acc[j];
  for (int j = 1; j < half; ++j) out.coeffs.col(n - j) = out.coeffs.col(j).conjugate();
  return out;
}

// Lambda(eta) over the mismatch spectrum lambda_n (already divided by eps).
// Terms whose phase lies past the kernel's negligible tail contribute zero.
inline double lambda_functional(double eta, double dt_coarse, std::span<const double> lambdas,
                                const Kernel& kernel) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (!(dt_coarse > 0.0)) throw std::invalid_argument("coarse timestep must be positive");
  if (lambdas.empty()) throw std::invalid_argument("empty mismatch spectrum");
  const double cutoff = kernel.negligible_beyond();
  double best = 0.0;
  for (double lambda : lambdas) {
    const double x = lambda * eta * dt_coarse;
    if (lambda == 0.0 || std::abs(x) > cutoff) continue;
    best = std::max(best, lambda * lambda * std::abs(kernel.fourier_integral(x)));
  }
  return best;
}

inline double lambda_functional(double eta, double dt_coarse, const TriadTable& triads,
                                double epsilon, const Kernel& kernel) {
  if (triads.empty()) throw std::invalid_argument("empty triad table");
  const auto lambdas = mismatch_spectrum(triads, epsilon);
  return lambda_functional(eta, dt_coarse, lambdas, kernel);
}

}  // namespace apint
