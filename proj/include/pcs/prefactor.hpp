#pragma once

#include <complex>
#include <string>
#include <vector>

#include "pcs/schemes.hpp"

namespace pcs {

/// One-sided sweep operator pair equivalent (on average) to a classical
/// centered compact scheme. The forward operator reads
///   (1 - sum beta) u'F_j + sum_k beta[k] u'F_{j+k} = (1/h) sum_k b[k] (u_{j+k} - u_j),
/// the backward operator is its mirror image.
struct prefactored_scheme {
  std::string label;          // "PC" + order for catalog-derived pairs
  std::string source_label;   // classical scheme it factors
  int order = 0;
  std::vector<double> beta;   // beta_1..beta_nc
  std::vector<double> b;      // b_1..b_ne
  std::vector<std::string> warnings;

  int nc() const { return static_cast<int>(beta.size()); }
  int ne() const { return static_cast<int>(b.size()); }
  double center() const; // beta~_0 = 1 - sum beta
};

struct implicit_factorization {
  std::vector<double> beta;
  std::vector<std::complex<double>> roots; // of P^F(z) = center + sum beta_k z^k, all |z| > 1
  std::vector<std::string> warnings;
};

/// Splits the normalized implicit symbol: finds real beta with
/// autocorrelation of (beta~_0, beta_1..beta_nc) equal to (gamma_0, gamma_1..)
/// and sum beta~ = 1, taking the minimum-phase branch (roots outside the unit
/// circle, so both sweep recurrences contract). Throws factorization_error when
/// a root lands on or inside the unit circle; attaches warnings for roots within
/// 1e-10 of it and for loss of diagonal dominance (beta~_0 <= sum |beta_k|).
implicit_factorization factor_implicit(const std::vector<double>& gamma);

/// Given beta, recovers the explicit sweep weights b so the averaged pair
/// reproduces the normalized explicit weights eta. Linear solve; exact at
/// roundoff for every catalog order.
std::vector<double> solve_explicit(const std::vector<double>& beta,
                                   const std::vector<double>& eta,
                                   double center);

prefactored_scheme prefactor(const classical_scheme& s);

struct factorization_report {
  int n = 0;                       // ring size used
  double transpose_implicit = 0.0; // max |B^F_{ij} - B^B_{ji}|, exact zero expected
  double transpose_explicit = 0.0; // max |C^F_{ij} + C^B_{ji}|, exact zero expected
  double operator_residual = 0.0;  // ‖½[(B^F)⁻¹C^F + (B^B)⁻¹C^B] − A⁻¹C‖_inf
};

/// Dense periodic-ring oracle: builds the full operator matrices and measures
/// how far the averaged sweep pair is from the classical operator.
factorization_report verify_factorization(const classical_scheme& s,
                                          const prefactored_scheme& p, int n);

} // namespace pcs
