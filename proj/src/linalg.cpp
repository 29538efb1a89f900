#include "pcs/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pcs/error.hpp"

namespace pcs::linalg {

dense_matrix dense_matrix::identity(std::size_t n) {
  dense_matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

dense_matrix dense_matrix::transposed() const {
  dense_matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double dense_matrix::inf_norm() const {
  double best = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
    best = std::max(best, s);
  }
  return best;
}

double dense_matrix::one_norm() const {
  double best = 0.0;
  for (std::size_t j = 0; j < cols_; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
    best = std::max(best, s);
  }
  return best;
}

dense_matrix operator*(const dense_matrix& a, const dense_matrix& b) {
  if (a.cols() != b.rows()) throw error(errc::invalid_argument, "dense multiply: size mismatch");
  dense_matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

dense_matrix operator-(const dense_matrix& a, const dense_matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw error(errc::invalid_argument, "dense subtract: size mismatch");
  dense_matrix c = a;
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) c(i, j) -= b(i, j);
  return c;
}

dense_matrix operator+(const dense_matrix& a, const dense_matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw error(errc::invalid_argument, "dense add: size mismatch");
  dense_matrix c = a;
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

dense_matrix& dense_matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

dense_lu::dense_lu(dense_matrix a) : lu_(std::move(a)) {
  if (lu_.rows() != lu_.cols()) throw error(errc::invalid_argument, "lu: matrix not square");
  const std::size_t n = lu_.rows();
  a_one_norm_ = lu_.one_norm();
  perm_.resize(n);
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(lu_(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) throw error(errc::singular_system, "lu: exact zero pivot");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
      std::swap(perm_[k], perm_[piv]);
    }
    const double inv = 1.0 / lu_(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = lu_(i, k) * inv;
      lu_(i, k) = m;
      if (m == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= m * lu_(k, j);
    }
  }
}

std::vector<double> dense_lu::solve(std::span<const double> rhs) const {
  const std::size_t n = lu_.rows();
  if (rhs.size() != n) throw error(errc::invalid_argument, "lu solve: rhs size mismatch");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[perm_[i]];
  for (std::size_t i = 1; i < n; ++i) {
    double s = x[i];
    for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
    x[i] = s / lu_(i, i);
  }
  return x;
}

dense_matrix dense_lu::solve(const dense_matrix& rhs) const {
  const std::size_t n = lu_.rows();
  if (rhs.rows() != n) throw error(errc::invalid_argument, "lu solve: rhs rows mismatch");
  dense_matrix x(n, rhs.cols());
  std::vector<double> col(n);
  for (std::size_t j = 0; j < rhs.cols(); ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = rhs(i, j);
    auto sol = solve(col);
    for (std::size_t i = 0; i < n; ++i) x(i, j) = sol[i];
  }
  return x;
}

namespace {

// One Hager sweep needs A^{-T} x; reuse the same factors by solving the
// transposed triangular systems.
std::vector<double> solve_transposed(const dense_matrix& lu, const std::vector<std::size_t>& perm,
                                     std::span<const double> rhs) {
  const std::size_t n = lu.rows();
  std::vector<double> y(rhs.begin(), rhs.end());
  // U^T y = rhs (forward)
  for (std::size_t i = 0; i < n; ++i) {
    double s = y[i];
    for (std::size_t j = 0; j < i; ++j) s -= lu(j, i) * y[j];
    y[i] = s / lu(i, i);
  }
  // L^T z = y (backward)
  for (std::size_t i = n; i-- > 0;) {
    double s = y[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= lu(j, i) * y[j];
    y[i] = s;
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[perm[i]] = y[i];
  return x;
}

} // namespace

double dense_lu::condition_one_norm() const {
  const std::size_t n = lu_.rows();
  // Hager's estimator for ‖A^{-1}‖₁.
  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  double est = 0.0;
  for (int iter = 0; iter < 8; ++iter) {
    auto y = solve(x);
    double y1 = 0.0;
    for (double v : y) y1 += std::abs(v);
    std::vector<double> xi(n);
    for (std::size_t i = 0; i < n; ++i) xi[i] = (y[i] >= 0.0 ? 1.0 : -1.0);
    auto z = solve_transposed(lu_, perm_, xi);
    std::size_t jbest = 0;
    double zbest = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(z[j]) > zbest) {
        zbest = std::abs(z[j]);
        jbest = j;
      }
    est = std::max(est, y1);
    if (zbest <= std::inner_product(z.begin(), z.end(), x.begin(), 0.0)) break;
    std::fill(x.begin(), x.end(), 0.0);
    x[jbest] = 1.0;
  }
  return est * a_one_norm_;
}

banded_matrix::banded_matrix(std::size_t n, int kl, int ku) : n_(n), kl_(kl), ku_(ku) {
  if (kl < 0 || ku < 0) throw error(errc::invalid_argument, "banded: negative bandwidth");
  store_.assign(static_cast<std::size_t>(kl + ku + 1) * n, 0.0);
}

double& banded_matrix::at(std::size_t i, std::size_t j) {
  const int d = static_cast<int>(j) - static_cast<int>(i);
  if (d < -kl_ || d > ku_) throw error(errc::invalid_argument, "banded: entry outside band");
  return store_[static_cast<std::size_t>(d + kl_) * n_ + i];
}

double banded_matrix::get(std::size_t i, std::size_t j) const {
  const int d = static_cast<int>(j) - static_cast<int>(i);
  if (d < -kl_ || d > ku_) return 0.0;
  return store_[static_cast<std::size_t>(d + kl_) * n_ + i];
}

banded_lu::banded_lu(const banded_matrix& a, double pivot_tol) : n_(a.n_), kl_(a.kl_), ku_(a.ku_) {
  if (!factor_no_pivot(a, pivot_tol)) {
    pivoted_ = true;
    factor_pivot(a);
  }
}

// Unpivoted band LU in the same diagonal-major layout; row i of L stored in
// the subdiagonals, U in diagonal and above.
bool banded_lu::factor_no_pivot(const banded_matrix& a, double tol) {
  store_ = a.store_;
  const auto idx = [this](std::size_t i, std::size_t j) {
    return static_cast<std::size_t>(static_cast<int>(j) - static_cast<int>(i) + kl_) * n_ + i;
  };
  for (std::size_t k = 0; k < n_; ++k) {
    const double piv = store_[idx(k, k)];
    if (std::abs(piv) < tol) return false;
    const std::size_t imax = std::min(n_ - 1, k + static_cast<std::size_t>(kl_));
    const std::size_t jmax = std::min(n_ - 1, k + static_cast<std::size_t>(ku_));
    for (std::size_t i = k + 1; i <= imax && i < n_; ++i) {
      const double m = store_[idx(i, k)] / piv;
      store_[idx(i, k)] = m;
      if (m == 0.0) continue;
      for (std::size_t j = k + 1; j <= jmax; ++j) store_[idx(i, j)] -= m * store_[idx(k, j)];
    }
  }
  return true;
}

// Partial pivoting needs kl extra superdiagonals for fill-in (LAPACK gbtrf
// layout, multipliers kept separately).
void banded_lu::factor_pivot(const banded_matrix& a) {
  const int kuw = ku_ + kl_;
  std::vector<double> w(static_cast<std::size_t>(kl_ + kuw + 1) * n_, 0.0);
  const auto idx = [&](std::size_t i, std::size_t j) {
    return static_cast<std::size_t>(static_cast<int>(j) - static_cast<int>(i) + kl_) * n_ + i;
  };
  for (std::size_t i = 0; i < n_; ++i) {
    const int lo = std::max(0, static_cast<int>(i) - kl_);
    const int hi = std::min(static_cast<int>(n_) - 1, static_cast<int>(i) + ku_);
    for (int j = lo; j <= hi; ++j) w[idx(i, static_cast<std::size_t>(j))] = a.get(i, static_cast<std::size_t>(j));
  }
  perm_.assign(n_, 0);
  mult_.assign(static_cast<std::size_t>(kl_) * n_, 0.0);
  for (std::size_t k = 0; k < n_; ++k) {
    const std::size_t imax = std::min(n_ - 1, k + static_cast<std::size_t>(kl_));
    std::size_t piv = k;
    double best = std::abs(w[idx(k, k)]);
    for (std::size_t i = k + 1; i <= imax && i < n_; ++i) {
      const double v = std::abs(w[idx(i, k)]);
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) throw error(errc::singular_system, "banded lu: exact zero pivot");
    perm_[k] = static_cast<int>(piv);
    const std::size_t jmax = std::min(n_ - 1, k + static_cast<std::size_t>(kuw));
    if (piv != k)
      for (std::size_t j = k; j <= jmax; ++j) std::swap(w[idx(k, j)], w[idx(piv, j)]);
    const double inv = 1.0 / w[idx(k, k)];
    for (std::size_t i = k + 1; i <= imax && i < n_; ++i) {
      const double m = w[idx(i, k)] * inv;
      mult_[static_cast<std::size_t>(i - k - 1) * n_ + k] = m;
      if (m == 0.0) continue;
      for (std::size_t j = k + 1; j <= jmax; ++j) w[idx(i, j)] -= m * w[idx(k, j)];
    }
  }
  store_ = std::move(w);
}

void banded_lu::solve_in_place(std::span<double> x) const {
  if (x.size() != n_) throw error(errc::invalid_argument, "banded solve: size mismatch");
  if (!pivoted_) {
    const auto idx = [this](std::size_t i, std::size_t j) {
      return static_cast<std::size_t>(static_cast<int>(j) - static_cast<int>(i) + kl_) * n_ + i;
    };
    for (std::size_t i = 1; i < n_; ++i) {
      const std::size_t j0 = i >= static_cast<std::size_t>(kl_) ? i - static_cast<std::size_t>(kl_) : 0;
      double s = x[i];
      for (std::size_t j = j0; j < i; ++j) s -= store_[idx(i, j)] * x[j];
      x[i] = s;
    }
    for (std::size_t i = n_; i-- > 0;) {
      const std::size_t j1 = std::min(n_ - 1, i + static_cast<std::size_t>(ku_));
      double s = x[i];
      for (std::size_t j = i + 1; j <= j1; ++j) s -= store_[idx(i, j)] * x[j];
      x[i] = s / store_[idx(i, i)];
    }
    return;
  }
  const int kuw = ku_ + kl_;
  const auto idx = [this](std::size_t i, std::size_t j) {
    return static_cast<std::size_t>(static_cast<int>(j) - static_cast<int>(i) + kl_) * n_ + i;
  };
  for (std::size_t k = 0; k < n_; ++k) {
    const auto piv = static_cast<std::size_t>(perm_[k]);
    if (piv != k) std::swap(x[k], x[piv]);
    const std::size_t imax = std::min(n_ - 1, k + static_cast<std::size_t>(kl_));
    for (std::size_t i = k + 1; i <= imax && i < n_; ++i)
      x[i] -= mult_[(i - k - 1) * n_ + k] * x[k];
  }
  for (std::size_t i = n_; i-- > 0;) {
    const std::size_t j1 = std::min(n_ - 1, i + static_cast<std::size_t>(kuw));
    double s = x[i];
    for (std::size_t j = i + 1; j <= j1; ++j) s -= store_[idx(i, j)] * x[j];
    x[i] = s / store_[idx(i, i)];
  }
}

std::vector<double> banded_lu::solve(std::span<const double> rhs) const {
  std::vector<double> x(rhs.begin(), rhs.end());
  solve_in_place(x);
  return x;
}

thomas_factors::thomas_factors(std::span<const double> lower, std::span<const double> diag,
                               std::span<const double> upper) {
  const std::size_t n = diag.size();
  if (lower.size() != n - 1 || upper.size() != n - 1)
    throw error(errc::invalid_argument, "thomas: band sizes must be n-1");
  cp_.resize(n - 1);
  inv_piv_.resize(n);
  lower_.assign(lower.begin(), lower.end());
  double piv = diag[0];
  if (piv == 0.0) throw error(errc::singular_system, "thomas: zero pivot");
  inv_piv_[0] = 1.0 / piv;
  for (std::size_t i = 1; i < n; ++i) {
    cp_[i - 1] = upper[i - 1] * inv_piv_[i - 1];
    piv = diag[i] - lower[i - 1] * cp_[i - 1];
    if (piv == 0.0) throw error(errc::singular_system, "thomas: zero pivot");
    inv_piv_[i] = 1.0 / piv;
  }
}

void thomas_factors::solve_in_place(std::span<double> x) const {
  const std::size_t n = inv_piv_.size();
  if (x.size() != n) throw error(errc::invalid_argument, "thomas solve: size mismatch");
  x[0] *= inv_piv_[0];
  for (std::size_t i = 1; i < n; ++i) x[i] = (x[i] - lower_[i - 1] * x[i - 1]) * inv_piv_[i];
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp_[i] * x[i + 1];
}

std::vector<double> fd_weights(double x0, std::span<const double> nodes, int deriv) {
  const int nn = static_cast<int>(nodes.size());
  if (nn == 0 || deriv < 0 || deriv >= nn)
    throw error(errc::invalid_argument, "fd_weights: need more nodes than derivative order");
  // Fornberg 1988, one evaluation point, orders 0..deriv.
  std::vector<double> c(static_cast<std::size_t>(nn) * static_cast<std::size_t>(deriv + 1), 0.0);
  const auto at = [&](int i, int m) -> double& {
    return c[static_cast<std::size_t>(i) * static_cast<std::size_t>(deriv + 1) + static_cast<std::size_t>(m)];
  };
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  at(0, 0) = 1.0;
  for (int i = 1; i < nn; ++i) {
    const int mn = std::min(i, deriv);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[static_cast<std::size_t>(i)] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[static_cast<std::size_t>(i)] - nodes[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int m = mn; m >= 1; --m) at(i, m) = c1 * (m * at(i - 1, m - 1) - c5 * at(i - 1, m)) / c2;
        at(i, 0) = -c1 * c5 * at(i - 1, 0) / c2;
      }
      for (int m = mn; m >= 1; --m) at(j, m) = (c4 * at(j, m) - m * at(j, m - 1)) / c3;
      at(j, 0) = c4 * at(j, 0) / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<std::size_t>(nn));
  for (int i = 0; i < nn; ++i) w[static_cast<std::size_t>(i)] = at(i, deriv);
  return w;
}

std::vector<std::complex<double>> poly_roots(std::span<const double> coeffs) {
  int d = static_cast<int>(coeffs.size()) - 1;
  while (d > 0 && coeffs[static_cast<std::size_t>(d)] == 0.0) --d;
  if (d < 1) throw error(errc::invalid_argument, "poly_roots: degree must be >= 1");
  using cd = std::complex<double>;
  std::vector<cd> c(coeffs.begin(), coeffs.begin() + d + 1);
  const cd lead = c.back();
  for (auto& v : c) v /= lead;
  const auto eval = [&](cd x, cd& p, cd& dp) {
    p = c[static_cast<std::size_t>(d)];
    dp = 0.0;
    for (int k = d - 1; k >= 0; --k) {
      dp = dp * x + p;
      p = p * x + c[static_cast<std::size_t>(k)];
    }
  };
  // Deterministic non-real starting points on a circle sized by coefficient scale.
  double radius = 0.0;
  for (int k = 0; k < d; ++k) radius = std::max(radius, std::abs(c[static_cast<std::size_t>(k)]));
  radius = 1.0 + radius;
  std::vector<cd> z(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const double ang = (2.0 * 3.14159265358979323846 * i) / d + 0.35;
    z[static_cast<std::size_t>(i)] = radius * cd(std::cos(ang), std::sin(ang));
  }
  for (int iter = 0; iter < 200; ++iter) {
    double moved = 0.0;
    for (int i = 0; i < d; ++i) {
      cd p, dp;
      eval(z[static_cast<std::size_t>(i)], p, dp);
      cd denom = 1.0;
      for (int j = 0; j < d; ++j)
        if (j != i) denom *= (z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)]);
      const cd step = p / denom;
      z[static_cast<std::size_t>(i)] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved < 1e-15 * radius) break;
  }
  for (auto& zi : z) { // Newton polish
    for (int it = 0; it < 4; ++it) {
      cd p, dp;
      eval(zi, p, dp);
      if (std::abs(dp) == 0.0) break;
      const cd step = p / dp;
      zi -= step;
      if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(zi))) break;
    }
  }
  return z;
}

} // namespace pcs::linalg
