#include "doctest.h"

#include "pcs/advection.hpp"
#include "pcs/error.hpp"
#include "pcs/prefactor.hpp"
#include "pcs/schemes.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace {

double max_abs_diff(const pcs::grid_function& a, const pcs::grid_function& b) {
  double m = 0.0;
  for (int j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

double max_err_vs(const pcs::grid_function& u, const pcs::advection_problem& prob, double t) {
  return max_abs_diff(u, pcs::exact_solution(prob, t));
}

} // namespace

TEST_CASE("constant state is a fixed point of both integrators") {
  auto prob = pcs::make_problem(pcs::linear_pulse_case(), 200, 6);
  prob.u0 = [](double) { return 0.7; };
  auto u = pcs::grid_function::sample(prob.grid, prob.u0);
  auto p = pcs::prefactor(pcs::builtin_scheme("C6"));
  auto mc = pcs::maccormack_step(u, prob, p);
  auto rk = pcs::tvd_rk2_step(u, prob, pcs::builtin_scheme("C6"));
  for (int j = 0; j < u.size(); ++j) {
    CHECK(std::abs(mc[j] - 0.7) <= 1e-14);
    CHECK(std::abs(rk[j] - 0.7) <= 1e-14);
  }
}

TEST_CASE("one step stays within the discretization error budget") {
  auto prob = pcs::make_problem(pcs::linear_pulse_case(), 800, 8, 1e-3);
  auto u = pcs::grid_function::sample(prob.grid, prob.u0);
  auto p = pcs::prefactor(pcs::builtin_scheme("C8"));
  auto next = pcs::maccormack_step(u, prob, p);
  CHECK(max_err_vs(next, prob, prob.dt) <= 1e-9);
  auto rk = pcs::tvd_rk2_step(u, prob, pcs::builtin_scheme("C8"));
  CHECK(max_err_vs(rk, prob, prob.dt) <= 1e-9);
  // The two integrators differ only at O(dt^2) within one step.
  CHECK(max_abs_diff(next, rk) <= 1e-9);
}

TEST_CASE("sweep alternation changes the state only at second order") {
  auto prob = pcs::make_problem(pcs::linear_pulse_case(), 400, 6, 2e-3);
  auto u = pcs::grid_function::sample(prob.grid, prob.u0);
  auto p = pcs::prefactor(pcs::builtin_scheme("C6"));
  auto fwd = pcs::maccormack_step(u, prob, p, false);
  auto bwd = pcs::maccormack_step(u, prob, p, true);
  const double d1 = max_abs_diff(fwd, bwd);
  prob.dt /= 2.0;
  auto fwd2 = pcs::maccormack_step(u, prob, p, false);
  auto bwd2 = pcs::maccormack_step(u, prob, p, true);
  const double d2 = max_abs_diff(fwd2, bwd2);
  CHECK(d1 > 0.0);
  CHECK(d1 / d2 > 3.0);
  CHECK(d1 / d2 < 5.0);
}

TEST_CASE("halving dt quarters the two-stage integrator's temporal error") {
  // Temporal-error-dominated configuration: coarse dt, fine grid.
  auto c = pcs::linear_pulse_case(2.0);
  auto prob = pcs::make_problem(c, 800, 6, 0.25);
  auto rk = pcs::integrator::tvd_rk2(pcs::builtin_scheme("C6"));
  const double e1 = max_err_vs(pcs::run(prob, rk).state, prob, prob.t_final);
  prob.dt = 0.125;
  const double e2 = max_err_vs(pcs::run(prob, rk).state, prob, prob.t_final);
  const double ratio = e1 / e2;
  CHECK(ratio > 3.4);
  CHECK(ratio < 4.6);
}

TEST_CASE("sweep dissipation makes the paired error scale linearly in dt") {
  // The uncancelled O(z^2) imaginary part of each sweep symbol damps every
  // mode by dt^2 (c |K^F| / h)^2 / 2 per step, so over a fixed horizon the
  // temporal error of the pairing is linear in dt, not quadratic. This is the
  // floor the default step policy is built around.
  auto c = pcs::linear_pulse_case(2.0);
  auto prob = pcs::make_problem(c, 400, 6, 0.2);
  auto p = pcs::prefactor(pcs::builtin_scheme("C6"));
  auto mc = pcs::integrator::maccormack(p);
  const double e1 = max_err_vs(pcs::run(prob, mc).state, prob, prob.t_final);
  prob.dt = 0.1;
  const double e2 = max_err_vs(pcs::run(prob, mc).state, prob, prob.t_final);
  const double ratio = e1 / e2;
  CHECK(ratio > 1.7);
  CHECK(ratio < 3.0);
}

TEST_CASE("fine-grid sine advection keeps its amplitude") {
  // Central schemes are non-dissipative and the two-stage integrator's
  // amplification is 1 + O(dt^4) per step, so the interior wave amplitude
  // survives 100 steps to ~1e-10. (Interior window: the one-sided closures
  // carry O(h^8) estimates whose influence decays within ~30 nodes.)
  pcs::case_config c;
  c.name = "sine";
  c.kind = pcs::flavor::linear;
  c.speed = 1.0;
  c.left = 0.0;
  c.right = 32.0 * std::acos(-1.0);
  c.u0 = [](double x) { return std::sin(x); };
  c.t_final = 0.01;
  auto prob = pcs::make_problem(c, 1024, 8, 1e-4);
  auto rk = pcs::integrator::tvd_rk2(pcs::builtin_scheme("C8"));
  auto res = pcs::run(prob, rk);
  CHECK(res.report.steps == 100);
  auto ex = pcs::exact_solution(prob, prob.t_final);
  double sum_num = 0.0, sum_ex = 0.0, ptwise = 0.0;
  for (int j = 32; j < res.state.size() - 32; ++j) {
    sum_num += res.state[j] * res.state[j];
    sum_ex += ex[j] * ex[j];
    ptwise = std::max(ptwise, std::abs(res.state[j] - ex[j]));
  }
  CHECK(std::abs(std::sqrt(sum_num / sum_ex) - 1.0) <= 1e-10);
  CHECK(ptwise <= 1e-9);
}

TEST_CASE("linear solutions are affine equivariant") {
  auto c = pcs::linear_pulse_case(5.0);
  auto prob = pcs::make_problem(c, 300, 6);
  auto p = pcs::prefactor(pcs::builtin_scheme("C6"));
  auto mc = pcs::integrator::maccormack(p);
  auto base = pcs::run(prob, mc).state;

  auto scaled = prob;
  scaled.u0 = [&c](double x) { return 2.0 * c.u0(x) + 3.0; };
  auto shifted = pcs::run(scaled, mc).state;
  for (int j = 0; j < base.size(); ++j)
    CHECK(std::abs(2.0 * base[j] + 3.0 - shifted[j]) <= 1e-11);
}

TEST_CASE("convergence toward the exact linear solution") {
  auto c = pcs::linear_pulse_case(5.0);
  auto p = pcs::prefactor(pcs::builtin_scheme("C6"));
  auto mc = pcs::integrator::maccormack(p);
  double prev = 0.0;
  for (int n : {200, 400}) {
    auto prob = pcs::make_problem(c, n, 6);
    const double err = max_err_vs(pcs::run(prob, mc).state, prob, c.t_final);
    if (prev > 0.0) CHECK(prev / err > 16.0); // at least 4th order observed
    prev = err;
  }
}

TEST_CASE("report fields are consistent") {
  auto c = pcs::linear_pulse_case(5.0);
  auto prob = pcs::make_problem(c, 256, 6);
  auto rk = pcs::integrator::tvd_rk2(pcs::builtin_scheme("C6"));
  auto res = pcs::run(prob, rk);
  CHECK(res.report.integrator_label == rk.label());
  CHECK(res.report.steps > 0);
  CHECK(res.report.dt == prob.dt);
  CHECK(res.report.t_end == doctest::Approx(c.t_final).epsilon(1e-12));
  CHECK(std::abs(res.report.steps * prob.dt - c.t_final) <= 1e-9 * c.t_final);
  CHECK(res.report.cfl == doctest::Approx(prob.dt / prob.grid.h).epsilon(1e-12));
  CHECK(res.report.seconds_total >= 0.0);
  CHECK(res.report.seconds_derivative <= res.report.seconds_total + 1e-9);
  CHECK(res.report.warnings.empty());
}

TEST_CASE("dt overrides that do not divide t_final are flagged and shortened") {
  auto c = pcs::linear_pulse_case(1.0);
  auto prob = pcs::make_problem(c, 256, 6, 0.3);
  auto rk = pcs::integrator::tvd_rk2(pcs::builtin_scheme("C6"));
  auto res = pcs::run(prob, rk);
  CHECK(res.report.t_end == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE_FALSE(res.report.warnings.empty());
}

TEST_CASE("snapshots fire at step boundaries covering the requested times") {
  auto c = pcs::linear_pulse_case(2.0);
  auto prob = pcs::make_problem(c, 256, 4);
  auto p = pcs::prefactor(pcs::builtin_scheme("C4"));
  auto mc = pcs::integrator::maccormack(p);
  std::vector<double> times;
  auto res = pcs::run(prob, mc, {0.0, 1.0, 2.0},
                      [&](double t, const pcs::grid_function& u) {
                        times.push_back(t);
                        CHECK(u.size() == prob.grid.n);
                      });
  REQUIRE(times.size() == 3);
  CHECK(times[0] == 0.0);
  CHECK(times[1] >= 1.0 - 1e-12);
  CHECK(times[1] < 1.0 + prob.dt);
  CHECK(times[2] == doctest::Approx(2.0).epsilon(1e-12));
  (void)res;
}

TEST_CASE("divergence is reported with the failing step") {
  // CFL ~1.7 is far past the pairing's ceiling; the unstable modes need a few
  // hundred steps to overflow, which is what the finiteness guard watches for.
  auto c = pcs::linear_pulse_case(2000.0);
  auto prob = pcs::make_problem(c, 200, 6);
  prob.dt = 4.0;
  auto p = pcs::prefactor(pcs::builtin_scheme("C6"));
  try {
    (void)pcs::run(prob, pcs::integrator::maccormack(p));
    FAIL("expected divergence");
  } catch (const pcs::divergence_error& e) {
    CHECK(e.step() > 0);
    CHECK(e.code() == pcs::errc::divergence);
  }
}

TEST_CASE("exact linear solution translates the profile") {
  auto c = pcs::linear_pulse_case(7.0);
  auto prob = pcs::make_problem(c, 256, 6);
  auto ex = pcs::exact_solution(prob, 7.0);
  for (int j = 0; j < ex.size(); ++j)
    CHECK(ex[j] == doctest::Approx(c.u0(prob.grid.node(j) - 7.0)).epsilon(1e-15));
}

TEST_CASE("burgers exact solution satisfies the implicit relation to 1e-13") {
  auto c = pcs::burgers_wave_case();
  auto prob = pcs::make_problem(c, 160, 6);
  const double ts = pcs::shock_time(prob);
  const double t = 0.5 * ts;
  auto ex = pcs::exact_solution(prob, t);
  for (int j = 0; j < ex.size(); ++j) {
    const double r = ex[j] - c.u0(prob.grid.node(j) - ex[j] * t);
    CHECK(std::abs(r) <= 1e-13);
  }
}

TEST_CASE("shock time matches the steepest compression of the initial data") {
  auto burgers = pcs::make_problem(pcs::burgers_wave_case(), 160, 6);
  const double ts = pcs::shock_time(burgers);
  CHECK(ts > 3.4);
  CHECK(ts < 3.7);
  CHECK(burgers.t_final < ts);

  auto linear = pcs::make_problem(pcs::linear_pulse_case(), 256, 6);
  CHECK(std::isinf(pcs::shock_time(linear)));

  // Expansion-only data never shocks.
  auto mono = burgers;
  mono.u0 = [](double x) { return std::tanh(4.0 * x); };
  CHECK(std::isinf(pcs::shock_time(mono)));
}

TEST_CASE("post-shock exact evaluation is rejected") {
  auto prob = pcs::make_problem(pcs::burgers_wave_case(), 160, 6);
  const double ts = pcs::shock_time(prob);
  try {
    (void)pcs::exact_solution(prob, 1.1 * ts);
    FAIL("expected post-shock rejection");
  } catch (const pcs::error& e) {
    CHECK(e.code() == pcs::errc::post_shock);
  }
}

TEST_CASE("burgers marching tracks the pre-shock exact solution") {
  auto c = pcs::burgers_wave_case(); // t_f = 1.5, safely pre-shock
  auto prob = pcs::make_problem(c, 160, 6);
  auto p = pcs::prefactor(pcs::builtin_scheme("C6"));
  auto res = pcs::run(prob, pcs::integrator::maccormack(p));
  CHECK(max_err_vs(res.state, prob, c.t_final) <= 1e-6);
}

TEST_CASE("default dt policy: CFL-capped, order-scaled, divides t_final") {
  auto c = pcs::linear_pulse_case();
  const double h = 470.0 / 399.0;
  for (int order : {4, 6, 8, 10, 12}) {
    const double dt = pcs::default_dt(c, h, order, c.t_final);
    CHECK(dt > 0.0);
    CHECK(dt <= 0.58 * h); // never past the order-4 von Neumann ceiling
    const double steps = c.t_final / dt;
    CHECK(std::abs(steps - std::round(steps)) <= 1e-9 * steps);
  }
  // Refinement tightens dt faster than h for high orders.
  const double d6a = pcs::default_dt(c, h, 6, c.t_final);
  const double d6b = pcs::default_dt(c, h / 2.0, 6, c.t_final);
  CHECK(d6a / d6b > 8.0); // ~h^4 scaling once below the CFL cap
  CHECK_THROWS_AS((void)pcs::default_dt(c, -1.0, 6, c.t_final), pcs::error);
  CHECK_THROWS_AS((void)pcs::default_dt(c, h, 6, 0.0), pcs::error);
}

TEST_CASE("make_problem wires the boundary closure to the scheme order") {
  auto prob6 = pcs::make_problem(pcs::linear_pulse_case(), 256, 6);
  CHECK(prob6.bc.kind == pcs::boundary_closure::mode::one_sided);
  CHECK(prob6.bc.fd_order == 6);
  auto prob14 = pcs::make_problem(pcs::linear_pulse_case(), 256, 14);
  CHECK(prob14.bc.fd_order == 10); // capped to keep the closure well conditioned
}
