#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcs/advection.hpp"
#include "pcs/grid.hpp"

namespace pcs {

/// Scaled norms over all grid nodes: l1 = sum|e|/n, l2 = sqrt(sum e^2 / n),
/// linf = max|e|; linf >= l2 >= l1 always holds for these scalings.
struct error_norms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};
error_norms compute_norms(const grid_function& u_num, const grid_function& u_exact);

/// Observed order p = ln(e1/e2) / ln(h1/h2). Throws for non-positive errors
/// or equal spacings.
double estimate_order(double e1, double e2, double h1, double h2);

struct convergence_row {
  int n = 0;
  double h = 0.0;
  error_norms norms;
  double p_step = 0.0; // l2 order vs previous grid; NaN on the first row
  bool diverged = false;
};

struct convergence_study_result {
  std::string case_name;
  std::string scheme_label;
  std::vector<convergence_row> rows;
  double p_endpoint = 0.0; // l2 order between coarsest and finest grid
  std::vector<std::string> failures;
};

/// Runs the case on each grid (concurrently), compares against the analytic
/// solution, reports norms and observed orders. Scheme labels starting with
/// "PC" run MacCormack on the prefactored operators; "C" labels run TVD-RK2 on
/// the classical scheme. h convention: h = width/(n-1).
convergence_study_result convergence_study(const case_config& c, const std::string& scheme_label,
                                           std::span<const int> grids,
                                           std::optional<double> dt_override = std::nullopt,
                                           bool concurrent = true);

struct bench_report {
  std::string pair; // e.g. "PC6:C6"
  int n = 0;
  long steps = 0;
  double t_pc_ms = 0.0;       // median-of-5 full step loop
  double t_c_ms = 0.0;
  double t_pc_kernel_ms = 0.0; // derivative-kernel share
  double t_c_kernel_ms = 0.0;
  double decrease_pct = 0.0;   // (t_c - t_pc)/t_c * 100
};

/// Times MacCormack+PC against TVD-RK2+C on the identical linear problem and
/// step count, median of 5 timed repetitions after a warm-up. Sequential by
/// design. Throws error(benchmark_invalid) when a timed run is shorter than
/// 50 ms (timer floor): raise n or steps.
bench_report benchmark_pair(const prefactored_scheme& pc, const classical_scheme& c,
                            int n, long steps);

} // namespace pcs
