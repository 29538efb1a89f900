#include "pcs/operators.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <variant>

#include "pcs/error.hpp"
#include "pcs/linalg.hpp"

namespace pcs {

namespace {

// Biased finite-difference weights (already divided by h) for the boundary
// band: row o holds the weights over the first q+1 nodes evaluating u' at
// node o. The right band mirrors by antisymmetry.
struct closure_plan {
  int m = 0;      // band width
  int q = 0;      // stencil order (q+1 nodes)
  bool analytic = false;
  std::vector<std::vector<double>> w; // m rows, q+1 weights each, scaled 1/h
};

closure_plan build_closure_plan(const boundary_closure& bc, int m, int scheme_order, double h) {
  closure_plan plan;
  plan.m = m;
  if (bc.kind == boundary_closure::mode::analytic) {
    if (!bc.derivative)
      throw error(errc::invalid_argument, "boundary closure: analytic mode without callback");
    plan.analytic = true;
    return plan;
  }
  plan.q = bc.fd_order > 0 ? bc.fd_order : scheme_order;
  std::vector<double> nodes(static_cast<std::size_t>(plan.q) + 1);
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = static_cast<double>(i);
  plan.w.reserve(static_cast<std::size_t>(m));
  for (int o = 0; o < m; ++o) {
    auto wo = linalg::fd_weights(static_cast<double>(o), nodes, 1);
    for (double& v : wo) v /= h;
    plan.w.push_back(std::move(wo));
  }
  return plan;
}

// Derivative estimates for the left band (nodes 0..m-1) and right band
// (nodes n-m..n-1) of u.
void closure_left(const closure_plan& plan, const boundary_closure& bc, const grid_function& u,
                  double* out) {
  const int n = u.size();
  if (plan.analytic) {
    for (int o = 0; o < plan.m; ++o) out[o] = bc.derivative(u.grid.node(o));
    return;
  }
  if (plan.q + 1 > n) throw error(errc::invalid_argument, "closure stencil wider than grid");
  for (int o = 0; o < plan.m; ++o) {
    const auto& w = plan.w[static_cast<std::size_t>(o)];
    double s = 0.0;
    for (int i = 0; i <= plan.q; ++i) s += w[static_cast<std::size_t>(i)] * u[i];
    out[o] = s;
  }
}

void closure_right(const closure_plan& plan, const boundary_closure& bc, const grid_function& u,
                   double* out) {
  const int n = u.size();
  if (plan.analytic) {
    for (int o = 0; o < plan.m; ++o) out[o] = bc.derivative(u.grid.node(n - plan.m + o));
    return;
  }
  if (plan.q + 1 > n) throw error(errc::invalid_argument, "closure stencil wider than grid");
  // Mirror image: evaluating at node n-1-o with nodes n-1-q..n-1 uses the
  // left-band weights reversed and negated.
  for (int o = 0; o < plan.m; ++o) {
    const int dist = plan.m - 1 - o; // distance from right end
    const auto& w = plan.w[static_cast<std::size_t>(dist)];
    double s = 0.0;
    for (int i = 0; i <= plan.q; ++i) s -= w[static_cast<std::size_t>(i)] * u[n - 1 - i];
    out[o] = s;
  }
}

struct classical_factors {
  int m = 0;
  std::variant<std::monostate, linalg::thomas_factors, linalg::banded_lu> solver;
};

struct factor_key {
  int n;
  std::vector<double> alpha;
  std::vector<double> a; // part of the operator identity: m = max(nc, ne) pins rows
  bool operator<(const factor_key& o) const {
    if (n != o.n) return n < o.n;
    if (alpha != o.alpha) return alpha < o.alpha;
    return a < o.a;
  }
};

std::mutex g_cache_mutex;
std::map<factor_key, std::shared_ptr<const classical_factors>> g_cache;
std::atomic<std::size_t> g_factor_count{0};

std::shared_ptr<const classical_factors> classical_factors_for(const classical_scheme& s, int n) {
  factor_key key{n, s.alpha, s.a};
  std::lock_guard lock(g_cache_mutex);
  if (auto it = g_cache.find(key); it != g_cache.end()) return it->second;

  const int nc = s.nc();
  const int m = std::max(s.nc(), s.ne());
  if (n < 2 * m + 2) throw error(errc::invalid_argument, "classical operator: grid too small for stencil");
  auto fac = std::make_shared<classical_factors>();
  fac->m = m;
  const std::size_t un = static_cast<std::size_t>(n);
  if (nc == 1) {
    std::vector<double> lo(un - 1, 0.0), di(un, 1.0), up(un - 1, 0.0);
    for (int j = m; j < n - m; ++j) {
      lo[static_cast<std::size_t>(j - 1)] = s.alpha[0];
      up[static_cast<std::size_t>(j)] = s.alpha[0];
    }
    fac->solver.emplace<linalg::thomas_factors>(lo, di, up);
  } else {
    linalg::banded_matrix mat(un, nc, nc);
    for (int j = 0; j < n; ++j) mat.at(static_cast<std::size_t>(j), static_cast<std::size_t>(j)) = 1.0;
    for (int j = m; j < n - m; ++j)
      for (int k = 1; k <= nc; ++k) {
        mat.at(static_cast<std::size_t>(j), static_cast<std::size_t>(j + k)) =
            s.alpha[static_cast<std::size_t>(k - 1)];
        mat.at(static_cast<std::size_t>(j), static_cast<std::size_t>(j - k)) =
            s.alpha[static_cast<std::size_t>(k - 1)];
      }
    fac->solver.emplace<linalg::banded_lu>(mat);
  }
  g_factor_count.fetch_add(1, std::memory_order_relaxed);
  g_cache.emplace(std::move(key), fac);
  return fac;
}

// Output buffers double as scratch while the input is still being read.
void check_same_grid(const grid_function& u, grid_function& out) {
  if (&out == &u || out.values.data() == u.values.data())
    throw error(errc::invalid_argument, "derivative output must not alias the input");
  if (!(out.grid == u.grid)) out = grid_function(u.grid);
}

void classical_apply(const classical_scheme& s, const grid_function& u, const boundary_closure& bc,
                     const closure_plan& plan, const classical_factors& fac, grid_function& out) {
  const int n = u.size();
  const int m = fac.m;
  const double inv_h = 1.0 / u.grid.h;
  check_same_grid(u, out);
  double* rhs = out.values.data();
  closure_left(plan, bc, u, rhs);
  closure_right(plan, bc, u, rhs + (n - m));
  const int ne = s.ne();
  for (int j = m; j < n - m; ++j) {
    double sum = 0.0;
    for (int k = 1; k <= ne; ++k)
      sum += s.a[static_cast<std::size_t>(k - 1)] * (u[j + k] - u[j - k]);
    rhs[j] = sum * inv_h;
  }
  std::span<double> x(out.values);
  if (std::holds_alternative<linalg::thomas_factors>(fac.solver))
    std::get<linalg::thomas_factors>(fac.solver).solve_in_place(x);
  else
    std::get<linalg::banded_lu>(fac.solver).solve_in_place(x);
}

void sweep_forward(const prefactored_scheme& p, const grid_function& u, const boundary_closure& bc,
                   const closure_plan& plan, grid_function& out) {
  const int n = u.size();
  const int nc = p.nc(), ne = p.ne();
  const int m = plan.m;
  const double inv_h = 1.0 / u.grid.h;
  const double inv_c = 1.0 / p.center();
  check_same_grid(u, out);
  double* d = out.values.data();
  closure_right(plan, bc, u, d + (n - m)); // sweep-start band pinned to closure data
  const double* b = p.b.data();
  const double* beta = p.beta.data();
  const double* uv = u.values.data();
  for (int j = n - m - 1; j >= 0; --j) {
    double rhs = 0.0;
    const double uj = uv[j];
    for (int k = 1; k <= ne; ++k) rhs += b[k - 1] * (uv[j + k] - uj);
    rhs *= inv_h;
    for (int k = 1; k <= nc; ++k) rhs -= beta[k - 1] * d[j + k];
    d[j] = rhs * inv_c;
  }
}

void sweep_backward(const prefactored_scheme& p, const grid_function& u, const boundary_closure& bc,
                    const closure_plan& plan, grid_function& out) {
  const int n = u.size();
  const int nc = p.nc(), ne = p.ne();
  const int m = plan.m;
  const double inv_h = 1.0 / u.grid.h;
  const double inv_c = 1.0 / p.center();
  check_same_grid(u, out);
  double* d = out.values.data();
  closure_left(plan, bc, u, d);
  const double* b = p.b.data();
  const double* beta = p.beta.data();
  const double* uv = u.values.data();
  for (int j = m; j < n; ++j) {
    double rhs = 0.0;
    const double uj = uv[j];
    for (int k = 1; k <= ne; ++k) rhs += b[k - 1] * (uj - uv[j - k]);
    rhs *= inv_h;
    for (int k = 1; k <= nc; ++k) rhs -= beta[k - 1] * d[j - k];
    d[j] = rhs * inv_c;
  }
}

int sweep_band(const prefactored_scheme& p) { return std::max(p.nc(), p.ne()); }

} // namespace

grid_function classical_derivative(const classical_scheme& s, const grid_function& u,
                                   const boundary_closure& bc) {
  grid_function out(u.grid);
  classical_derivative_into(s, u, bc, out);
  return out;
}

void classical_derivative_into(const classical_scheme& s, const grid_function& u,
                               const boundary_closure& bc, grid_function& out) {
  auto fac = classical_factors_for(s, u.size());
  const auto plan = build_closure_plan(bc, fac->m, s.order, u.grid.h);
  classical_apply(s, u, bc, plan, *fac, out);
}

grid_function forward_derivative(const prefactored_scheme& p, const grid_function& u,
                                 const boundary_closure& bc) {
  grid_function out(u.grid);
  forward_derivative_into(p, u, bc, out);
  return out;
}

void forward_derivative_into(const prefactored_scheme& p, const grid_function& u,
                             const boundary_closure& bc, grid_function& out) {
  const auto plan = build_closure_plan(bc, sweep_band(p), p.order, u.grid.h);
  if (u.size() < 2 * plan.m + 2) throw error(errc::invalid_argument, "sweep: grid too small for stencil");
  sweep_forward(p, u, bc, plan, out);
}

grid_function backward_derivative(const prefactored_scheme& p, const grid_function& u,
                                  const boundary_closure& bc) {
  grid_function out(u.grid);
  backward_derivative_into(p, u, bc, out);
  return out;
}

void backward_derivative_into(const prefactored_scheme& p, const grid_function& u,
                              const boundary_closure& bc, grid_function& out) {
  const auto plan = build_closure_plan(bc, sweep_band(p), p.order, u.grid.h);
  if (u.size() < 2 * plan.m + 2) throw error(errc::invalid_argument, "sweep: grid too small for stencil");
  sweep_backward(p, u, bc, plan, out);
}

grid_function averaged_derivative(const prefactored_scheme& p, const grid_function& u,
                                  const boundary_closure& bc) {
  const auto plan = build_closure_plan(bc, sweep_band(p), p.order, u.grid.h);
  if (u.size() < 2 * plan.m + 2) throw error(errc::invalid_argument, "sweep: grid too small for stencil");
  grid_function f(u.grid), b(u.grid);
  sweep_forward(p, u, bc, plan, f);
  sweep_backward(p, u, bc, plan, b);
  for (int j = 0; j < u.size(); ++j) f[j] = 0.5 * (f[j] + b[j]);
  return f;
}

std::size_t classical_factorization_count() { return g_factor_count.load(); }

void clear_classical_factor_cache() {
  std::lock_guard lock(g_cache_mutex);
  g_cache.clear();
  g_factor_count.store(0);
}

} // namespace pcs
