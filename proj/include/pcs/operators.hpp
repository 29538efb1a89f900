#pragma once

#include <cstddef>
#include <functional>

#include "pcs/grid.hpp"
#include "pcs/prefactor.hpp"
#include "pcs/schemes.hpp"

namespace pcs {

/// How derivative values are supplied at the nodes a stencil cannot reach.
/// analytic: inject a known derivative callback. one_sided: biased
/// finite-difference estimates from interior data; order 0 means "match the
/// scheme's formal order".
struct boundary_closure {
  enum class mode { analytic, one_sided };

  mode kind = mode::one_sided;
  std::function<double(double)> derivative; // analytic mode: x -> u'(x)
  int fd_order = 0;                         // one_sided mode

  static boundary_closure analytic(std::function<double(double)> d) {
    boundary_closure c;
    c.kind = mode::analytic;
    c.derivative = std::move(d);
    return c;
  }
  static boundary_closure one_sided(int order = 0) {
    boundary_closure c;
    c.kind = mode::one_sided;
    c.fd_order = order;
    return c;
  }
};

/// Classical compact derivative: assemble the banded implicit system, solve
/// with cached factors. Boundary bands (max(nc, ne) nodes each side) are
/// pinned to closure data. Factors are computed once per (scheme, n) and
/// shared across threads.
grid_function classical_derivative(const classical_scheme& s, const grid_function& u,
                                   const boundary_closure& bc);
void classical_derivative_into(const classical_scheme& s, const grid_function& u,
                               const boundary_closure& bc, grid_function& out);

/// Sweep derivatives. forward runs right to left (each u'F_j needs nodes to
/// its right), backward left to right; averaged is their mean and matches the
/// classical operator in the interior.
grid_function forward_derivative(const prefactored_scheme& p, const grid_function& u,
                                 const boundary_closure& bc);
grid_function backward_derivative(const prefactored_scheme& p, const grid_function& u,
                                  const boundary_closure& bc);
grid_function averaged_derivative(const prefactored_scheme& p, const grid_function& u,
                                  const boundary_closure& bc);
void forward_derivative_into(const prefactored_scheme& p, const grid_function& u,
                             const boundary_closure& bc, grid_function& out);
void backward_derivative_into(const prefactored_scheme& p, const grid_function& u,
                              const boundary_closure& bc, grid_function& out);

/// Observability for the factor cache: total factorizations performed since
/// start or last clear. Lets tests pin the compute-once guarantee.
std::size_t classical_factorization_count();
void clear_classical_factor_cache();

} // namespace pcs
