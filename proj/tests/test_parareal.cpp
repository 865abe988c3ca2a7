#include <catch_amalgamated.hpp>

#include <cmath>

#include "apint/harness/initial_condition.hpp"
#include "apint/parareal.hpp"

using namespace apint;

namespace {

PararealConfig base_config(int n_slabs, double window, const EigenDecomposition& eig) {
  PararealConfig p;
  p.n_slabs = n_slabs;
  p.t_end = 1.0;
  p.coarse.dt = 1.0 / n_slabs;
  p.coarse.averaging.window = window;
  p.coarse.averaging.n_quad = recommended_quadrature_points(window, eig.max_frequency());
  p.fine.dt = 2e-4;
  return p;
}

}  // namespace

TEST_CASE("config validation") {
  ModelConfig c;
  const auto eig = eigendecompose(c);
  auto p = base_config(10, 0.1, eig);
  CHECK_NOTHROW(p.validate());
  p.n_slabs = 8;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = base_config(10, 0.1, eig);
  p.tol = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = base_config(10, 0.1, eig);
  p.max_iters = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = base_config(10, 0.1, eig);
  p.fine.dt = 3e-4;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  CHECK(to_string(RunStatus::converged) == "ok");
  CHECK(to_string(RunStatus::blowup) == "blowup");
  CHECK(to_string(RunStatus::no_converge) == "no_converge");
}

TEST_CASE("initial coarse sweep") {
  ModelConfig c;
  const auto eig = eigendecompose(c);
  const auto u0 = harness::make_initial_condition(c).state;

  auto p = base_config(2, 0.1, eig);
  const auto same = initial_coarse_sweep(u0, p, [](const SpectralState& s) { return s; });
  REQUIRE(same.size() == 3);
  for (const auto& s : same) CHECK((s.coeffs - u0.coeffs).norm() == 0.0);

  p = base_config(10, 0.1, eig);
  const auto props = make_apint_propagators(c, eig, p);
  const auto sweep = initial_coarse_sweep(u0, p, props.coarse);
  REQUIRE(sweep.size() == 11);
  CHECK((sweep[0].coeffs - u0.coeffs).norm() == 0.0);
  for (const auto& s : sweep) {
    CHECK(all_finite(s));
    CHECK(s.norm() <= 10.0 * u0.norm());
  }
  CHECK(sweep.back().time == 1.0);
}

TEST_CASE("finite-step exactness") {
  for (double eps : {1.0, 0.01}) {
    ModelConfig c;
    c.epsilon = eps;
    const auto eig = eigendecompose(c);
    const auto u0 = harness::make_initial_condition(c).state;
    auto p = base_config(8, 0.125, eig);
    p.tol = 1e-300;
    const auto run = run_apint(u0, p, c, eig, 8);
    REQUIRE(run.iterations() == 8);
    for (int k = 0; k <= 8; ++k) {
      CHECK((run.iterates[k][0].coeffs - u0.coeffs).norm() == 0.0);
      for (int n = 0; n <= k; ++n)
        CHECK(relative_difference(run.iterates[k][n], run.reference[n]) <= 1e-10);
    }
    CHECK(run.errors.back() <= 1e-10);
  }
}

TEST_CASE("coarse equal to fine converges in one iteration") {
  ModelConfig c;
  const auto eig = eigendecompose(c);
  const auto u0 = harness::make_initial_condition(c).state;
  auto p = base_config(5, 0.1, eig);
  p.fine.dt = 1e-3;
  auto fine = [&](const SpectralState& s) { return fine_propagate(s, 0.2, c, eig, p.fine); };
  const auto run = run_apint(u0, p, fine, fine);
  REQUIRE(run.converged_at.has_value());
  CHECK(*run.converged_at <= 1);
  CHECK(run.errors[0] <= 1e-10);
  const auto pairs = error_vs_iteration(run);
  CHECK(pairs.front().first == 0);
  CHECK(pairs.back().second <= p.tol);
}

TEST_CASE("loose tolerance stops at once") {
  ModelConfig c;
  const auto eig = eigendecompose(c);
  const auto u0 = harness::make_initial_condition(c).state;
  auto p = base_config(10, 0.1, eig);
  p.tol = 1e3;
  const auto run = run_apint(u0, p, c, eig);
  REQUIRE(run.converged_at.has_value());
  CHECK(*run.converged_at <= 1);
  CHECK(run.status == RunStatus::converged);
}

TEST_CASE("status reporting") {
  ModelConfig c;
  const auto eig = eigendecompose(c);
  const auto u0 = harness::make_initial_condition(c).state;
  auto p = base_config(10, 0.1, eig);
  p.max_iters = 1;
  p.tol = 1e-14;
  const auto stalled = run_apint(u0, p, c, eig);
  CHECK(stalled.status == RunStatus::no_converge);
  CHECK_FALSE(stalled.converged_at.has_value());
  CHECK(stalled.iterations() == 1);

  auto fine = [&](const SpectralState& s) { return fine_propagate(s, 0.1, c, eig, p.fine); };
  auto bad = [](const SpectralState& s) -> SpectralState {
    if (s.time > 0.45) throw NumericalBlowup("numerical blow-up at t = 0.5", 0.5);
    return s;
  };
  const auto blown = run_apint(u0, p, fine, bad);
  CHECK(blown.status == RunStatus::blowup);
  CHECK_FALSE(blown.message.empty());

  auto bad_fine = [&](const SpectralState& s) -> SpectralState {
    if (s.time > 0.25) throw NumericalBlowup("numerical blow-up", s.time);
    return fine(s);
  };
  p.max_iters = 3;
  PararealRun run;
  run.reference = serial_fine_reference(u0, p, fine);
  run.iterates.push_back(initial_coarse_sweep(u0, p, fine, &run.coarse_of_latest));
  run.errors.push_back(0.0);
  try {
    parareal_iterate(run, p, bad_fine, fine);
    FAIL("expected blow-up");
  } catch (const NumericalBlowup& e) {
    CHECK(std::string(e.what()).find("slab") != std::string::npos);
  }
  PararealRun empty;
  CHECK_THROWS_AS(parareal_iterate(empty, p, fine, fine), std::logic_error);
}

TEST_CASE("results do not depend on the worker count") {
  ModelConfig c;
  const auto eig = eigendecompose(c);
  const auto u0 = harness::make_initial_condition(c).state;
  auto p = base_config(10, 0.1, eig);
  p.max_iters = 3;
  const auto serial = run_apint(u0, p, c, eig, 3);
  p.workers = 3;
  const auto threaded = run_apint(u0, p, c, eig, 3);
  REQUIRE(serial.errors.size() == threaded.errors.size());
  for (std::size_t k = 0; k < serial.errors.size(); ++k) CHECK(serial.errors[k] == threaded.errors[k]);
  CHECK((serial.iterates.back().back().coeffs - threaded.iterates.back().back().coeffs).norm() == 0.0);
}

TEST_CASE("stiff case converges geometrically") {
  ModelConfig c;
  c.epsilon = 0.01;
  c.froude = 0.03;
  const auto eig = eigendecompose(c);
  const auto u0 = harness::make_initial_condition(c).state;
  const auto p = base_config(10, 1.0, eig);
  const auto run = run_apint(u0, p, c, eig);
  REQUIRE(run.converged_at.has_value());
  CHECK(*run.converged_at <= 6);
  CHECK(run.errors[*run.converged_at] <= 1e-7);
  const auto ratios = contraction_factors(run);
  for (std::size_t k = 1; k < ratios.size(); ++k) CHECK(ratios[k] < 1.0);
  for (std::size_t k = 2; k < run.errors.size(); ++k) CHECK(run.errors[k] < run.errors[k - 1]);
}
