#include "pcs/prefactor.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "pcs/error.hpp"
#include "pcs/linalg.hpp"

namespace pcs {

double prefactored_scheme::center() const {
  double s = 0.0;
  for (double v : beta) s += v;
  return 1.0 - s;
}

namespace {

using cd = std::complex<double>;

// Autocorrelation of (bt0, beta_1..beta_nc) at lag m.
double autocorr(double bt0, const std::vector<double>& beta, int m) {
  const int nc = static_cast<int>(beta.size());
  const auto at = [&](int i) { return i == 0 ? bt0 : beta[static_cast<std::size_t>(i - 1)]; };
  double s = 0.0;
  for (int j = 0; j + m <= nc; ++j) s += at(j) * at(j + m);
  return s;
}

// Newton iterations on { lag-m autocorrelation = gamma_m (m = 1..nc),
// sum = 1 } in the unknowns (bt0, beta). Lag 0 then holds automatically
// because the symbol already matches at z = 1.
void polish(double& bt0, std::vector<double>& beta, const std::vector<double>& gamma) {
  const int nc = static_cast<int>(beta.size());
  const int n = nc + 1;
  std::vector<double> x(static_cast<std::size_t>(n));
  x[0] = bt0;
  for (int i = 0; i < nc; ++i) x[static_cast<std::size_t>(i + 1)] = beta[static_cast<std::size_t>(i)];
  for (int iter = 0; iter < 40; ++iter) {
    std::vector<double> f(static_cast<std::size_t>(n), 0.0);
    const auto at = [&](int i) { return x[static_cast<std::size_t>(i)]; };
    for (int m = 1; m <= nc; ++m) {
      double s = 0.0;
      for (int j = 0; j + m <= nc; ++j) s += at(j) * at(j + m);
      f[static_cast<std::size_t>(m - 1)] = s - gamma[static_cast<std::size_t>(m - 1)];
    }
    double sum = 0.0;
    for (int j = 0; j <= nc; ++j) sum += at(j);
    f[static_cast<std::size_t>(nc)] = sum - 1.0;
    double fn = 0.0;
    for (double v : f) fn = std::max(fn, std::abs(v));
    if (fn < 1e-15) break;
    linalg::dense_matrix jac(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (int m = 1; m <= nc; ++m)
      for (int i = 0; i <= nc; ++i) {
        double d = 0.0;
        if (i + m <= nc) d += at(i + m);
        if (i - m >= 0) d += at(i - m);
        jac(static_cast<std::size_t>(m - 1), static_cast<std::size_t>(i)) = d;
      }
    for (int i = 0; i <= nc; ++i) jac(static_cast<std::size_t>(nc), static_cast<std::size_t>(i)) = 1.0;
    std::vector<double> step;
    try {
      step = linalg::dense_lu(jac).solve(f);
    } catch (const error&) {
      break; // singular Jacobian: keep the unpolished values
    }
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] -= step[static_cast<std::size_t>(i)];
  }
  bt0 = x[0];
  for (int i = 0; i < nc; ++i) beta[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i + 1)];
}

} // namespace

implicit_factorization factor_implicit(const std::vector<double>& gamma) {
  const int nc = static_cast<int>(gamma.size());
  if (nc < 1) throw error(errc::invalid_argument, "factor_implicit: need at least one implicit weight");
  double g0 = 1.0;
  for (double g : gamma) g0 -= 2.0 * g;

  // The symbol G(z) = g0 + sum gamma_k (z^k + z^-k) is symmetric under
  // z -> 1/z, so substituting w = z + 1/z via the recurrence
  // V_0 = 2, V_1 = w, V_{k+1} = w V_k - V_{k-1} halves the degree.
  std::vector<std::vector<double>> v;
  v.push_back({2.0});
  v.push_back({0.0, 1.0});
  for (int k = 2; k <= nc; ++k) {
    std::vector<double> next(static_cast<std::size_t>(k + 1), 0.0);
    for (std::size_t i = 0; i < v[static_cast<std::size_t>(k - 1)].size(); ++i)
      next[i + 1] += v[static_cast<std::size_t>(k - 1)][i];
    for (std::size_t i = 0; i < v[static_cast<std::size_t>(k - 2)].size(); ++i)
      next[i] -= v[static_cast<std::size_t>(k - 2)][i];
    v.push_back(std::move(next));
  }
  std::vector<double> q(static_cast<std::size_t>(nc + 1), 0.0);
  q[0] = g0;
  for (int k = 1; k <= nc; ++k)
    for (std::size_t i = 0; i < v[static_cast<std::size_t>(k)].size(); ++i)
      q[i] += gamma[static_cast<std::size_t>(k - 1)] * v[static_cast<std::size_t>(k)][i];

  const auto wroots = linalg::poly_roots(q);

  // Each w-root carries a reciprocal pair z, 1/z; the minimum-phase branch
  // keeps |z| > 1 so both sweep recurrences contract toward the interior.
  std::vector<cd> zs, all_candidates;
  for (const cd& w : wroots) {
    const cd disc = std::sqrt(w * w - 4.0);
    cd z1 = (w + disc) / 2.0;
    cd z2 = (w - disc) / 2.0;
    if (std::abs(z1) < std::abs(z2)) std::swap(z1, z2);
    // z1*z2 = 1; rebuild the small one from the big one for accuracy
    z2 = 1.0 / z1;
    all_candidates.push_back(z1);
    all_candidates.push_back(z2);
    zs.push_back(z1);
  }

  implicit_factorization out;
  out.roots = zs;
  std::vector<std::string>& warnings = out.warnings;
  for (const cd& z : zs) {
    const double excess = std::abs(z) - 1.0;
    if (excess <= 1e-12) {
      std::ostringstream msg;
      msg << "factor_implicit: implicit symbol root at |z| = " << std::abs(z)
          << " is not strictly outside the unit circle; sweep recurrences would not contract";
      throw factorization_error(msg.str(), all_candidates);
    }
    if (excess < 1e-10) {
      std::ostringstream msg;
      msg << "root |z| - 1 = " << excess << " is within 1e-10 of the unit circle";
      warnings.push_back(msg.str());
    }
  }

  // P(z) = K prod (z - z_i) with K fixed by P(1) = 1.
  std::vector<cd> coeff = {1.0};
  for (const cd& z : zs) {
    std::vector<cd> next(coeff.size() + 1, 0.0);
    for (std::size_t i = 0; i < coeff.size(); ++i) {
      next[i + 1] += coeff[i];
      next[i] -= coeff[i] * z;
    }
    coeff = std::move(next);
  }
  cd k = 1.0;
  for (const cd& z : zs) k /= (1.0 - z);
  for (auto& c : coeff) c *= k;

  double imag_max = 0.0;
  for (const cd& c : coeff) imag_max = std::max(imag_max, std::abs(c.imag()));
  if (imag_max > 1e-10)
    throw factorization_error("factor_implicit: factor coefficients are not real", all_candidates);

  double bt0 = coeff[0].real();
  std::vector<double> beta(static_cast<std::size_t>(nc));
  for (int i = 1; i <= nc; ++i) beta[static_cast<std::size_t>(i - 1)] = coeff[static_cast<std::size_t>(i)].real();

  polish(bt0, beta, gamma);

  // Hard check: the polished factor must reproduce the implicit weights.
  double resid = std::abs(autocorr(bt0, beta, 0) - g0);
  for (int m = 1; m <= nc; ++m)
    resid = std::max(resid, std::abs(autocorr(bt0, beta, m) - gamma[static_cast<std::size_t>(m - 1)]));
  if (resid > 1e-12)
    throw factorization_error("factor_implicit: autocorrelation residual " + std::to_string(resid),
                              all_candidates);

  double abs_sum = 0.0;
  for (double b : beta) abs_sum += std::abs(b);
  if (bt0 <= abs_sum) {
    std::ostringstream msg;
    msg << "center weight " << bt0 << " is not dominant over sum |beta| = " << abs_sum
        << "; sweeps remain contractive (all roots outside the unit circle) but the simple "
           "geometric decay bound does not apply";
    warnings.push_back(msg.str());
  }

  out.beta = std::move(beta);
  return out;
}

std::vector<double> solve_explicit(const std::vector<double>& beta, const std::vector<double>& eta,
                                   double center) {
  const int nc = static_cast<int>(beta.size());
  const int ne = static_cast<int>(eta.size());
  if (ne < 1) throw error(errc::invalid_argument, "solve_explicit: need at least one explicit weight");
  // Matching the averaged sweep symbols to the normalized explicit symbol
  // E(z) = sum eta_k (z^k - z^-k): both sides are odd under z -> 1/z, so the
  // negative powers z^-m (m = 1..ne) determine everything. Collecting the
  // z^-m coefficient of (1/2)[Q^F(z) P^B(z) + Q^B(z) P^F(z)] gives, per m:
  //   (1/2)[ -S_b beta_m - bt0 b_m + sum_k (b_k beta_{k+m} - beta_k b_{k+m}) ] = -eta_m
  // with S_b = sum b_k and beta_m = 0 past nc: linear in b.
  const auto bval = [&](int i) -> double {
    if (i == 0) return center;
    return (i >= 1 && i <= nc) ? beta[static_cast<std::size_t>(i - 1)] : 0.0;
  };
  linalg::dense_matrix a(static_cast<std::size_t>(ne), static_cast<std::size_t>(ne));
  std::vector<double> rhs(static_cast<std::size_t>(ne));
  for (int m = 1; m <= ne; ++m) {
    const std::size_t r = static_cast<std::size_t>(m - 1);
    rhs[r] = -eta[r];
    for (int k = 1; k <= ne; ++k) a(r, static_cast<std::size_t>(k - 1)) += -0.5 * bval(m);
    a(r, r) += -0.5 * center;
    for (int k = 1; k <= ne; ++k) {
      if (k + m <= nc) a(r, static_cast<std::size_t>(k - 1)) += 0.5 * bval(k + m);
      if (k + m <= ne) a(r, static_cast<std::size_t>(k + m - 1)) += -0.5 * bval(k);
    }
  }
  return linalg::dense_lu(a).solve(rhs);
}

prefactored_scheme prefactor(const classical_scheme& s) {
  const normalized_scheme ns = normalize(s);
  implicit_factorization fac = factor_implicit(ns.gamma);
  prefactored_scheme p;
  p.source_label = s.label;
  p.label = (!s.label.empty() && s.label[0] == 'C') ? "P" + s.label : "PC-" + s.label;
  p.order = s.order;
  p.beta = std::move(fac.beta);
  p.warnings = std::move(fac.warnings);
  p.b = solve_explicit(p.beta, ns.eta, p.center());
  return p;
}

factorization_report verify_factorization(const classical_scheme& s, const prefactored_scheme& p,
                                          int n) {
  const int m = std::max({s.nc(), s.ne(), p.nc(), p.ne()});
  if (n < 4 * m) throw error(errc::invalid_argument, "verify_factorization: ring too small");
  const std::size_t un = static_cast<std::size_t>(n);
  using mat = linalg::dense_matrix;
  mat a_imp(un, un), a_exp(un, un), bf(un, un), cf(un, un), bb(un, un), cb(un, un);
  const auto wrap = [n](int i) { return static_cast<std::size_t>(((i % n) + n) % n); };

  double sb = 0.0;
  for (double v : p.b) sb += v;
  const double bt0 = p.center();
  for (int i = 0; i < n; ++i) {
    const std::size_t ui = static_cast<std::size_t>(i);
    a_imp(ui, ui) = 1.0;
    for (int k = 1; k <= s.nc(); ++k) {
      a_imp(ui, wrap(i + k)) = s.alpha[static_cast<std::size_t>(k - 1)];
      a_imp(ui, wrap(i - k)) = s.alpha[static_cast<std::size_t>(k - 1)];
    }
    for (int k = 1; k <= s.ne(); ++k) {
      a_exp(ui, wrap(i + k)) = s.a[static_cast<std::size_t>(k - 1)];
      a_exp(ui, wrap(i - k)) = -s.a[static_cast<std::size_t>(k - 1)];
    }
    bf(ui, ui) = bt0;
    bb(ui, ui) = bt0;
    for (int k = 1; k <= p.nc(); ++k) {
      bf(ui, wrap(i + k)) = p.beta[static_cast<std::size_t>(k - 1)];
      bb(ui, wrap(i - k)) = p.beta[static_cast<std::size_t>(k - 1)];
    }
    cf(ui, ui) = -sb;
    cb(ui, ui) = sb;
    for (int k = 1; k <= p.ne(); ++k) {
      cf(ui, wrap(i + k)) = p.b[static_cast<std::size_t>(k - 1)];
      cb(ui, wrap(i - k)) = -p.b[static_cast<std::size_t>(k - 1)];
    }
  }

  factorization_report rep;
  rep.n = n;
  for (std::size_t i = 0; i < un; ++i)
    for (std::size_t j = 0; j < un; ++j) {
      rep.transpose_implicit = std::max(rep.transpose_implicit, std::abs(bf(i, j) - bb(j, i)));
      rep.transpose_explicit = std::max(rep.transpose_explicit, std::abs(cf(i, j) + cb(j, i)));
    }

  mat df = linalg::dense_lu(bf).solve(cf);
  mat db = linalg::dense_lu(bb).solve(cb);
  mat dc = linalg::dense_lu(a_imp).solve(a_exp);
  mat avg = df + db;
  avg *= 0.5;
  rep.operator_residual = (avg - dc).inf_norm();
  return rep;
}

} // namespace pcs
