// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "apint/harness/experiments.hpp"

using namespace apint;
using namespace apint::harness;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "!") + what;
  }
};

std::string fmt(double v) { return apint::detail::format_double(v); }

double r2_of(const std::vector<double>& xs, const std::vector<double>& ys, double* slope) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  *slope = sxy / sxx;
  return sxy * sxy / (sxx * syy);
}

SpectralState gaussian(const ModelConfig& c) { return make_initial_condition(c).state; }

Outcome exactness() {
  Outcome o;
  for (double eps : {1.0, 0.01}) {
    ModelConfig c;
    c.epsilon = eps;
    const auto eig = eigendecompose(c);
    PararealConfig p;
    p.n_slabs = 8;
    p.coarse.dt = 0.125;
    p.coarse.averaging = {0.125, recommended_quadrature_points(0.125, eig.max_frequency())};
    p.tol = 1e-300;
    const auto run = run_apint(gaussian(c), p, c, eig, 8);
    double worst = 0.0;
    for (int k = 0; k <= run.iterations(); ++k)
      for (int n = 0; n <= k; ++n)
        worst = std::max(worst, relative_difference(run.iterates[k][n], run.reference[n]));
    o.require(run.iterations() == 8 && worst <= 1e-10, "eps=" + fmt(eps) + " worst=" + fmt(worst));
  }
  return o;
}

Outcome stiff_convergence() {
  Outcome o;
  RunParameters run;
  run.froude = 0.03;
  const auto cell = make_cell(0.01, run);
  const auto r = run_window_cell(ExperimentKind::iterations_vs_window, cell, run, 1.0);
  o.require(r.status == RunStatus::converged && r.iterations <= 8,
            "status=" + to_string(r.status) + " iterations=" + std::to_string(r.iterations));
  return o;
}

ExperimentSpec window_sweep(ExperimentKind kind, double eps, double dt, std::vector<double> windows) {
  ExperimentSpec s;
  s.kind = kind;
  s.epsilons = {eps};
  s.windows = std::move(windows);
  s.run.dt_coarse = dt;
  s.run.froude = 0.03;
  return s;
}

Outcome optimal_window_exists() {
  Outcome o;
  const auto res = run_experiment(
      window_sweep(ExperimentKind::iterations_vs_window, 1.0, 0.1, default_windows(0.1)));
  const auto& t = res.table("iterations_vs_window");
  std::string it, ce;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    it += (r ? "," : "") + t.text(r, "iterations");
    ce += (r ? "," : "") + t.text(r, "coarse_error");
  }
  const auto& c = res.checks.front();
  o.require(c.metric_interior, "iterations interior [" + it + "]");
  o.require(c.reference_interior, "coarse error interior [" + ce + "]");
  o.require(c.agree, "minimizers " + std::to_string(c.cells_apart) + " cells apart");
  return o;
}

Outcome asymptotic_regime() {
  Outcome o;
  const auto res = run_experiment(
      window_sweep(ExperimentKind::coarse_error_vs_window, 0.01, 0.1, default_windows(0.1)));
  const auto& t = res.table("coarse_error_vs_window");
  bool ok = true;
  std::string ce;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double e = t.number(r, "coarse_error");
    ok = ok && std::isfinite(e) && (r == 0 || e <= t.number(r - 1, "coarse_error"));
    ce += (r ? "," : "") + t.text(r, "coarse_error");
  }
  o.require(ok, "non-increasing [" + ce + "]");
  return o;
}

Outcome averaging_scaling() {
  Outcome o;
  ExperimentSpec s;
  s.kind = ExperimentKind::averaging_oracle;
  s.epsilons = {1.0};
  s.windows = default_oracle_windows();
  const auto res = run_experiment(s);
  const double slope = res.table("averaging_oracle_slope").number(0, "slope");
  o.require(slope <= 1.2, "slope=" + fmt(slope) + " <= 1.2");
  o.require(slope >= 0.6, "slope >= 0.6");
  return o;
}

Outcome local_error_ratio() {
  Outcome o;
  ModelConfig c;
  const auto eig = eigendecompose(c);
  const auto u = gaussian(c);
  auto diff = [&](double dt) {
    CoarseConfig one, two;
    one.averaging = two.averaging = {0.1, 32};
    two.substeps = 2;
    return (coarse_propagate(u, dt, c, eig, one).coeffs - coarse_propagate(u, dt, c, eig, two).coeffs)
        .norm();
  };
  const double ratio = diff(0.1) / diff(0.05);
  o.require(ratio >= 6.0 && ratio <= 10.0, "ratio=" + fmt(ratio));
  return o;
}

Outcome splitting_order() {
  Outcome o;
  ModelConfig c;
  const auto eig = eigendecompose(c);
  const auto u = gaussian(c);
  auto orders = [](const std::vector<double>& e) {
    return std::vector<double>{std::log2(e[0] / e[1]), std::log2(e[1] / e[2])};
  };
  const auto ref = fine_propagate(u, 0.5, c, eig, FineConfig{1.25e-4});
  std::vector<double> fe;
  for (double dt : {4e-3, 2e-3, 1e-3})
    fe.push_back((fine_propagate(u, 0.5, c, eig, FineConfig{dt}).coeffs - ref.coeffs).norm());
  CoarseConfig cc;
  cc.averaging = {0.1, 32};
  auto coarse = [&](int n) {
    cc.substeps = n;
    return coarse_propagate(u, 0.5, c, eig, cc);
  };
  const auto cref = coarse(1024);
  std::vector<double> ce;
  for (int n : {16, 32, 64}) ce.push_back((coarse(n).coeffs - cref.coeffs).norm());
  for (const auto& [name, errs] : {std::pair{"fine", fe}, std::pair{"coarse", ce}})
    for (double p : orders(errs)) o.require(p >= 1.8 && p <= 2.2, std::string(name) + " order=" + fmt(p));
  return o;
}

Outcome lambda_decay() {
  Outcome o;
  ModelConfig c;
  const auto table = enumerate_triads(c, c.dealias_cutoff());
  const double dt = 0.1;
  for (double eps : {1.0, 0.1, 0.01}) {
    const auto lambdas = mismatch_spectrum(table, eps);
    const double eta0 = 1.0 / (dt * lambdas.back());
    for (const auto& k : {Kernel::bump(), Kernel::gaussian()})
      for (double e : {eta0, 2 * eta0, 5 * eta0}) {
        const double a = lambda_functional(e, dt, lambdas, k);
        const double b = lambda_functional(10 * e, dt, lambdas, k);
        if (!(b < a)) o.require(false, "eps=" + fmt(eps) + " " + to_string(k.kind()) + " eta0=" + fmt(e));
      }
  }
  if (o.pass) o.require(true, "Lambda(10 eta0) < Lambda(eta0)");
  const Kernel g = Kernel::gaussian();
  std::vector<double> xs, ys;
  for (int i = 0; i <= 40; ++i) {
    const double x = 2.0 + 4.0 * i / 40;
    xs.push_back(x * x);
    ys.push_back(std::log(std::abs(g.fourier_integral(x))));
  }
  double slope = 0.0;
  const double r2 = r2_of(xs, ys, &slope);
  o.require(r2 >= 0.99 && slope < 0.0, "gaussian R2=" + fmt(r2));
  return o;
}

Outcome resonance() {
  Outcome o;
  for (double F : {1.0, 0.03}) {
    ModelConfig c;
    c.froude = F;
    const int kmax = c.dealias_cutoff();
    const auto table = enumerate_triads(c, kmax);
    bool zero_ok = true;
    for (const auto& t : table.triads)
      if (t.alpha == 0 && t.alpha1 == 0 && t.alpha2 == 0) zero_ok = zero_ok && t.direct();
    o.require(zero_ok, "F=" + fmt(F) + " zero-branch triads direct");

    const auto s1 = mismatch_spectrum(table, 1.0), s2 = mismatch_spectrum(table, 0.5);
    bool doubled = s1.size() == s2.size();
    for (std::size_t i = 0; doubled && i < s1.size(); ++i) doubled = s2[i] == 2.0 * s1[i];
    o.require(doubled, "spectrum doubles");

    auto w = [F](int k, int a) { return a == 0 ? 0.0 : a * std::sqrt(1.0 + k * k / F); };
    std::size_t i = 0;
    bool same = true;
    for (int k = -kmax; k <= kmax; ++k)
      for (int k1 = -kmax; k1 <= kmax; ++k1) {
        const int k2 = k - k1;
        if (k2 < -kmax || k2 > kmax) continue;
        for (int a : {-1, 0, 1})
          for (int a1 : {-1, 0, 1})
            for (int a2 : {-1, 0, 1}) {
              const Triad expect{k, k1, k2, a, a1, a2, w(k1, a1) + w(k2, a2) - w(k, a), -1};
              same = same && i < table.triads.size() && table.triads[i] == expect;
              ++i;
            }
      }
    o.require(same && i == table.triads.size(), "brute force bitwise (" + std::to_string(i) + ")");
  }
  return o;
}

Outcome window_model() {
  Outcome o;
  ModelConfig c;
  c.froude = 0.03;
  const auto triads = enumerate_triads(c, c.dealias_cutoff());
  const Kernel k = Kernel::bump();

  const FitConstants truth{2.0, 0.5, 3.0, 1.0};
  std::vector<WindowMeasurement> synthetic;
  for (double eps : {0.01, 0.1, 1.0})
    for (double dt : {0.05, 0.1}) {
      const auto opt = optimize_full(eps, dt, truth, triads, k);
      synthetic.push_back({eps, dt, opt.eta, opt.value});
    }
  const auto inv = fit_constants(synthetic, triads, k).constants;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
  const double worst = std::max({rel(inv.c1, truth.c1), rel(inv.c2, truth.c2), rel(inv.c3, truth.c3)});
  o.require(worst <= 0.05, "inverse crime rel=" + fmt(worst));

  ExperimentSpec s = window_sweep(ExperimentKind::optimal_window_prediction, 1.0, 0.05,
                                  {0.05, 0.1, 0.2, 0.4, 0.8, 1.6});
  s.epsilons = default_epsilons();
  const auto res = run_experiment(s);
  const auto& t = res.table("optimal_window_prediction");
  std::vector<double> full, simple, measured;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    full.push_back(t.number(r, "eta_full"));
    simple.push_back(t.number(r, "eta_simple"));
    measured.push_back(t.number(r, "measured_window"));
  }
  std::string detail = "eta_full=";
  for (std::size_t r = 0; r < full.size(); ++r) detail += (r ? "," : "") + fmt(full[r]);
  detail += " measured=";
  for (std::size_t r = 0; r < measured.size(); ++r) detail += (r ? "," : "") + fmt(measured[r]);
  o.require(full.size() == 3 && full[0] > full[1] && full[1] > full[2], detail);
  const double ratio = simple.back() / full.back();
  o.require(ratio >= 0.5 && ratio <= 2.0, "simple/full at eps=1 " + fmt(ratio));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"parareal exactness", exactness},
      {"stiff-case convergence", stiff_convergence},
      {"optimal window exists", optimal_window_exists},
      {"asymptotic regime", asymptotic_regime},
      {"averaging error scaling", averaging_scaling},
      {"coarse local error ratio", local_error_ratio},
      {"splitting order", splitting_order},
      {"Lambda decay and gaussian tail", lambda_decay},
      {"resonance correctness", resonance},
      {"window model fit", window_model},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
