#include "pcs/lab.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "pcs/error.hpp"
#include "pcs/prefactor.hpp"

namespace pcs {

namespace {

integrator integrator_for_label(const std::string& scheme_label) {
  if (scheme_label.size() > 1 && scheme_label[0] == 'P') {
    const std::string base = scheme_label.substr(1);
    if (!is_builtin(base))
      throw error(errc::invalid_argument, "unknown scheme label: " + scheme_label);
    return integrator::maccormack(prefactor(builtin_scheme(base)));
  }
  if (!is_builtin(scheme_label))
    throw error(errc::invalid_argument, "unknown scheme label: " + scheme_label);
  return integrator::tvd_rk2(builtin_scheme(scheme_label));
}

struct grid_outcome {
  convergence_row row;
  std::vector<std::string> failures;
};

grid_outcome study_one_grid(const case_config& c, const integrator& ti, int n,
                            std::optional<double> dt_override) {
  grid_outcome out;
  out.row.n = n;
  out.row.p_step = std::numeric_limits<double>::quiet_NaN();
  try {
    const advection_problem prob = make_problem(c, n, ti.order(), dt_override);
    out.row.h = prob.grid.h;
    const run_result res = run(prob, ti);
    const grid_function ref = exact_solution(prob, prob.t_final);
    out.row.norms = compute_norms(res.state, ref);
  } catch (const divergence_error& e) {
    out.row.diverged = true;
    out.failures.push_back("n=" + std::to_string(n) + ": diverged at step " +
                           std::to_string(e.step()));
  } catch (const error& e) {
    out.row.diverged = true;
    out.failures.push_back("n=" + std::to_string(n) + ": " + e.what());
  }
  return out;
}

double median5(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + static_cast<long>(v.size() / 2), v.end());
  return v[v.size() / 2];
}

} // namespace

error_norms compute_norms(const grid_function& u_num, const grid_function& u_exact) {
  if (!(u_num.grid == u_exact.grid))
    throw error(errc::invalid_argument, "compute_norms: grids differ");
  const int n = u_num.size();
  if (n == 0) throw error(errc::invalid_argument, "compute_norms: empty grid function");
  error_norms norms;
  double sum1 = 0.0, sum2 = 0.0;
  for (int j = 0; j < n; ++j) {
    const double e = std::abs(u_num[j] - u_exact[j]);
    sum1 += e;
    sum2 += e * e;
    norms.linf = std::max(norms.linf, e);
  }
  norms.l1 = sum1 / n;
  norms.l2 = std::sqrt(sum2 / n);
  return norms;
}

double estimate_order(double e1, double e2, double h1, double h2) {
  if (!(e1 > 0.0) || !(e2 > 0.0))
    throw error(errc::invalid_argument, "estimate_order: errors must be positive");
  if (!(h1 > 0.0) || !(h2 > 0.0) || h1 == h2)
    throw error(errc::invalid_argument, "estimate_order: need two distinct positive spacings");
  return std::log(e1 / e2) / std::log(h1 / h2);
}

convergence_study_result convergence_study(const case_config& c, const std::string& scheme_label,
                                           std::span<const int> grids,
                                           std::optional<double> dt_override, bool concurrent) {
  if (grids.empty()) throw error(errc::invalid_argument, "convergence_study: no grids given");
  convergence_study_result result;
  result.case_name = c.name;
  result.scheme_label = scheme_label;
  result.p_endpoint = std::numeric_limits<double>::quiet_NaN();
  const integrator ti = integrator_for_label(scheme_label);

  if (c.kind == flavor::burgers) {
    advection_problem probe;
    probe.kind = flavor::burgers;
    probe.grid = grid1d(c.left, c.right, grids[0]);
    probe.u0 = c.u0;
    const double ts = shock_time(probe);
    if (c.t_final > 0.95 * ts) {
      result.failures.push_back("t_final exceeds 95% of the shock formation time; "
                                "analytic comparison is unreliable");
      return result;
    }
  }

  std::vector<grid_outcome> outcomes(grids.size());
  if (concurrent && grids.size() > 1) {
    std::vector<std::future<grid_outcome>> futures;
    futures.reserve(grids.size());
    for (int n : grids)
      futures.push_back(std::async(std::launch::async, study_one_grid, std::cref(c),
                                   std::cref(ti), n, dt_override));
    for (std::size_t i = 0; i < futures.size(); ++i) outcomes[i] = futures[i].get();
  } else {
    for (std::size_t i = 0; i < grids.size(); ++i)
      outcomes[i] = study_one_grid(c, ti, grids[i], dt_override);
  }

  for (auto& o : outcomes) {
    result.rows.push_back(std::move(o.row));
    for (auto& f : o.failures) result.failures.push_back(std::move(f));
  }
  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    const auto& prev = result.rows[i - 1];
    auto& cur = result.rows[i];
    if (!prev.diverged && !cur.diverged && prev.norms.l2 > 0.0 && cur.norms.l2 > 0.0 &&
        prev.h != cur.h)
      cur.p_step = estimate_order(prev.norms.l2, cur.norms.l2, prev.h, cur.h);
  }
  const auto& first = result.rows.front();
  const auto& last = result.rows.back();
  if (result.rows.size() > 1 && !first.diverged && !last.diverged && first.norms.l2 > 0.0 &&
      last.norms.l2 > 0.0 && first.h != last.h)
    result.p_endpoint = estimate_order(first.norms.l2, last.norms.l2, first.h, last.h);
  else if (result.rows.size() > 1)
    result.failures.push_back("endpoint order not computable from the rows above");
  return result;
}

bench_report benchmark_pair(const prefactored_scheme& pc, const classical_scheme& c, int n,
                            long steps) {
  if (n < 64) throw error(errc::invalid_argument, "benchmark_pair: need n >= 64");
  if (steps < 1) throw error(errc::invalid_argument, "benchmark_pair: need steps >= 1");

  const case_config lc = linear_pulse_case();
  advection_problem prob;
  prob.kind = flavor::linear;
  prob.speed = lc.speed;
  prob.grid = grid1d(lc.left, lc.right, n);
  prob.u0 = lc.u0;
  prob.dt = 0.2 * prob.grid.h; // CFL 0.2: stable for both integrators
  prob.t_final = static_cast<double>(steps) * prob.dt;
  prob.bc = boundary_closure::one_sided(std::min(std::min(pc.order, c.order), 10));

  const integrator mi = integrator::maccormack(pc);
  const integrator ci = integrator::tvd_rk2(c);

  run(prob, mi); // warm-up: touches memory, fills the factor cache
  run(prob, ci);

  std::vector<double> t_pc, t_c, k_pc, k_c;
  for (int rep = 0; rep < 5; ++rep) {
    const run_report a = run(prob, mi).report;
    const run_report b = run(prob, ci).report;
    t_pc.push_back(a.seconds_total * 1e3);
    k_pc.push_back(a.seconds_derivative * 1e3);
    t_c.push_back(b.seconds_total * 1e3);
    k_c.push_back(b.seconds_derivative * 1e3);
  }

  bench_report rep;
  rep.pair = pc.label + ":" + c.label;
  rep.n = n;
  rep.steps = steps;
  rep.t_pc_ms = median5(t_pc);
  rep.t_c_ms = median5(t_c);
  rep.t_pc_kernel_ms = median5(k_pc);
  rep.t_c_kernel_ms = median5(k_c);
  if (rep.t_pc_ms < 50.0 || rep.t_c_ms < 50.0)
    throw error(errc::benchmark_invalid,
                "benchmark_pair: timed run under 50 ms; raise n or steps");
  rep.decrease_pct = (rep.t_c_ms - rep.t_pc_ms) / rep.t_c_ms * 100.0;
  return rep;
}

} // namespace pcs
