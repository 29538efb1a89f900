#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace pcs::linalg {

/// Small dense row-major matrix. Used for moment systems and the dense
/// operator-matrix oracle; not meant for large n.
class dense_matrix {
public:
  dense_matrix() = default;
  dense_matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static dense_matrix identity(std::size_t n);

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  dense_matrix transposed() const;
  double inf_norm() const;       // max row sum
  double one_norm() const;       // max column sum

  friend dense_matrix operator*(const dense_matrix& a, const dense_matrix& b);
  friend dense_matrix operator-(const dense_matrix& a, const dense_matrix& b);
  friend dense_matrix operator+(const dense_matrix& a, const dense_matrix& b);
  dense_matrix& operator*=(double s);

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

/// LU factors with partial pivoting (PA = LU, unit lower).
class dense_lu {
public:
  explicit dense_lu(dense_matrix a); // throws error(singular_system) on exact breakdown

  std::vector<double> solve(std::span<const double> rhs) const;
  dense_matrix solve(const dense_matrix& rhs) const;

  /// 1-norm condition estimate ‖A‖₁·‖A⁻¹‖₁ via Hager-style inverse norm probing.
  double condition_one_norm() const;

private:
  dense_matrix lu_;
  std::vector<std::size_t> perm_;
  double a_one_norm_ = 0.0;
};

/// Banded matrix with kl sub- and ku superdiagonals, stored diagonal-major.
/// Entry (i, j) exists when -kl <= j - i <= ku.
class banded_matrix {
public:
  banded_matrix(std::size_t n, int kl, int ku);

  double& at(std::size_t i, std::size_t j);
  double get(std::size_t i, std::size_t j) const;

  std::size_t size() const { return n_; }
  int lower_bw() const { return kl_; }
  int upper_bw() const { return ku_; }

private:
  friend class banded_lu;
  std::size_t n_;
  int kl_, ku_;
  std::vector<double> store_; // (kl + ku + 1) rows of length n; diag offset d at row d + kl
};

/// Banded LU. Factors without pivoting first (keeps the band tight, the fast
/// path for diagonally dominant compact-scheme matrices) and transparently
/// refactors with partial pivoting when a pivot falls under threshold.
class banded_lu {
public:
  explicit banded_lu(const banded_matrix& a, double pivot_tol = 1e-13);

  void solve_in_place(std::span<double> x) const;
  std::vector<double> solve(std::span<const double> rhs) const;
  bool pivoted() const { return pivoted_; }

private:
  bool factor_no_pivot(const banded_matrix& a, double tol);
  void factor_pivot(const banded_matrix& a);

  std::size_t n_;
  int kl_, ku_;
  bool pivoted_ = false;
  std::vector<double> store_;     // factored band; pivoting widens ku to kl + ku
  std::vector<double> mult_;      // row multipliers (pivoted path)
  std::vector<int> perm_;         // pivot row at each step (pivoted path)
};

/// Precomputed Thomas-algorithm factors for a tridiagonal system with fixed
/// coefficients; solve is two sweeps over n with no division.
class thomas_factors {
public:
  thomas_factors(std::span<const double> lower, std::span<const double> diag,
                 std::span<const double> upper);

  void solve_in_place(std::span<double> x) const;

private:
  std::vector<double> cp_;      // scaled superdiagonal
  std::vector<double> inv_piv_; // reciprocal pivots
  std::vector<double> lower_;
};

/// Finite-difference weights for the m-th derivative at x0 from arbitrary
/// nodes (Fornberg's recurrence). weights.size() == nodes.size().
std::vector<double> fd_weights(double x0, std::span<const double> nodes, int deriv);

/// All complex roots of c0 + c1 x + ... + cd x^d (cd != 0), via
/// Durand-Kerner iteration with deterministic starting points, plus a Newton
/// polish per root. Intended for the small polynomials of the factorizer.
std::vector<std::complex<double>> poly_roots(std::span<const double> coeffs);

} // namespace pcs::linalg
