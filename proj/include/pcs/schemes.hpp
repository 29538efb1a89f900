#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace pcs {

/// Centered compact first-derivative scheme
///   sum_k alpha[k] (u'_{j+k} + u'_{j-k}) + u'_j = (1/h) sum_k a[k] (u_{j+k} - u_{j-k}).
/// alpha holds the one-sided implicit weights alpha_1..alpha_nc, a the
/// explicit weights a_1..a_ne. Maximal-order schemes have order = 2(nc + ne).
struct classical_scheme {
  std::string label;
  int order = 0;
  std::vector<double> alpha;
  std::vector<double> a;

  int nc() const { return static_cast<int>(alpha.size()); }
  int ne() const { return static_cast<int>(a.size()); }
};

/// Same operator scaled so the implicit center weight structure reads
/// gamma_0 u'_j + sum gamma_k (u'_{j+k} + u'_{j-k}) = (1/h) sum eta_k (...),
/// with gamma_0 = 1 - 2 sum gamma_k. This is the form the prefactorizer consumes.
struct normalized_scheme {
  std::string label;
  int order = 0;
  std::vector<double> gamma;
  std::vector<double> eta;

  double center() const;
  int nc() const { return static_cast<int>(gamma.size()); }
  int ne() const { return static_cast<int>(eta.size()); }
};

/// Built-in catalog, orders 4..16 ("C4".."C16"), weights as exact rational doubles.
const classical_scheme& builtin_scheme(std::string_view label);
std::vector<std::string> builtin_labels();
bool is_builtin(std::string_view label);

struct moment_solve_report {
  classical_scheme scheme;
  double condition = 0.0; // 1-norm condition estimate of the moment matrix
};

/// Derives the maximal-order scheme for the given stencil split by solving the
/// Taylor moment conditions. Throws for nc < 1, ne < 1, or nc + ne > 8
/// (condition growth past order 16 makes plain double unreliable).
moment_solve_report derive_classical_report(int nc, int ne);
classical_scheme derive_classical(int nc, int ne);

normalized_scheme normalize(const classical_scheme& s);

/// One scheme per line: `label, order, nc, ne, alpha_1.., a_1..`,
/// floats with enough digits to round-trip exactly.
std::string format_scheme_line(const classical_scheme& s);
classical_scheme parse_scheme_line(std::string_view line);

} // namespace pcs
