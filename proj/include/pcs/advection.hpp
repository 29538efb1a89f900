#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pcs/grid.hpp"
#include "pcs/operators.hpp"
#include "pcs/prefactor.hpp"
#include "pcs/schemes.hpp"

namespace pcs {

enum class flavor { linear, burgers };

/// Scalar advection initial-value problem u_t + c(u) u_x = 0 on a finite
/// interval. linear: c constant. burgers: c(u) = u.
struct advection_problem {
  flavor kind = flavor::linear;
  double speed = 1.0; // linear only
  grid1d grid;
  std::function<double(double)> u0;
  double t_final = 0.0;
  double dt = 0.0;
  boundary_closure bc = boundary_closure::one_sided();
};

/// Grid-independent description of a benchmark case; make_problem instantiates
/// it at a resolution with the default dt policy.
struct case_config {
  std::string name;
  flavor kind = flavor::linear;
  double speed = 1.0;
  double left = 0.0;
  double right = 1.0;
  std::function<double(double)> u0;
  double t_final = 0.0;
};

/// Gaussian pulse advected at c = 1 across [-20, 450]; desk default t_f = 50,
/// full-scale t_f = 200.
case_config linear_pulse_case(double t_final = 50.0);
/// Gaussian-enveloped sine on [-1/2, 1/2] under Burgers flow; t_f = 1.5
/// (pre-shock; characteristics cross near t = 3.53).
case_config burgers_wave_case(double t_final = 1.5);

/// Default step policy: dt = min(sigma_max h / c_max, anchor (h/h_ref)^q)
/// with per-order von Neumann ceilings sigma_max, per-case anchors at the
/// coarsest bundled study grid, and q = order minus the floor's measured
/// spacing exponent. The exponent matches the pairing's dominant O(dt h^e)
/// sweep-dissipation floor so total error tracks h^min(order,12) across a
/// study. Returned dt divides t_final into a whole number of steps.
double default_dt(const case_config& c, double h, int scheme_order, double t_final);

advection_problem make_problem(const case_config& c, int n, int scheme_order,
                               std::optional<double> dt_override = std::nullopt,
                               std::optional<double> t_final_override = std::nullopt);

struct integrator {
  enum class kind { maccormack, tvd_rk2 };
  kind k = kind::maccormack;
  prefactored_scheme ps; // maccormack
  classical_scheme cs;   // tvd_rk2
  bool alternate_stages = false;

  static integrator maccormack(prefactored_scheme p, bool alternate = false);
  static integrator tvd_rk2(classical_scheme s);
  std::string label() const;
  int order() const { return k == kind::maccormack ? ps.order : cs.order; }
};

/// Single time steps (allocate; the run loop uses internal workspaces).
/// MacCormack pairs one-sided sweeps as predictor/corrector: the corrector
/// restarts from u^n and differentiates the predictor state, so the averaged
/// pair advects at the correct speed and second order in time.
grid_function maccormack_step(const grid_function& u, const advection_problem& prob,
                              const prefactored_scheme& p, bool backward_first = false);
grid_function tvd_rk2_step(const grid_function& u, const advection_problem& prob,
                           const classical_scheme& s);

struct run_report {
  std::string integrator_label;
  long steps = 0;
  double dt = 0.0;
  double t_end = 0.0;
  double cfl = 0.0;             // max |c| dt / h observed at start
  double seconds_total = 0.0;
  double seconds_derivative = 0.0; // spatial-kernel share
  std::vector<std::string> warnings;
};

struct run_result {
  grid_function state;
  run_report report;
};

using snapshot_hook = std::function<void(double t, const grid_function& u)>;

/// Marches to t_final. Snapshot times are captured at the first step boundary
/// at or past each requested time. Throws divergence_error (with partial-state
/// step index) if any stage goes non-finite.
run_result run(const advection_problem& prob, const integrator& ti,
               const std::vector<double>& snapshot_times = {},
               const snapshot_hook& hook = {});

/// Linear: translated initial data. Burgers: u = u0(x - u t) solved pointwise
/// by safeguarded Newton (bisection fallback) to 1e-14; valid only pre-shock.
grid_function exact_solution(const advection_problem& prob, double t);

/// First characteristic crossing, -1/min u0'; u0' scanned on 4096 samples.
/// Returns +inf when u0' is nowhere negative (and always for linear).
double shock_time(const advection_problem& prob);

} // namespace pcs
