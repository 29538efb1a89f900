#include "pcs/spectral.hpp"

#include <cmath>

#include "pcs/error.hpp"

namespace pcs {

namespace {

constexpr double pi = 3.14159265358979323846;

void rational_parts(const classical_scheme& s, double z, double& num, double& den, double& dnum,
                    double& dden) {
  num = 0.0;
  den = 1.0;
  dnum = 0.0;
  dden = 0.0;
  for (std::size_t k = 0; k < s.a.size(); ++k) {
    const double n = static_cast<double>(k + 1);
    num += 2.0 * s.a[k] * std::sin(n * z);
    dnum += 2.0 * s.a[k] * n * std::cos(n * z);
  }
  for (std::size_t k = 0; k < s.alpha.size(); ++k) {
    const double n = static_cast<double>(k + 1);
    den += 2.0 * s.alpha[k] * std::cos(n * z);
    dden += -2.0 * s.alpha[k] * n * std::sin(n * z);
  }
}

} // namespace

double numerical_wavenumber(const classical_scheme& s, double z) {
  double num, den, dnum, dden;
  rational_parts(s, z, num, den, dnum, dden);
  return num / den;
}

double phase_velocity(const classical_scheme& s, double z) {
  if (z == 0.0) return 1.0;
  return numerical_wavenumber(s, z) / z;
}

double group_velocity(const classical_scheme& s, double z) {
  double num, den, dnum, dden;
  rational_parts(s, z, num, den, dnum, dden);
  return (dnum * den - num * dden) / (den * den);
}

sweep_symbols prefactored_symbols(const prefactored_scheme& p, double z) {
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> zc = std::exp(i * z);
  std::complex<double> q(0.0, 0.0);
  std::complex<double> pl(p.center(), 0.0);
  std::complex<double> zp(1.0, 0.0);
  double bsum = 0.0;
  for (std::size_t k = 0; k < std::max(p.b.size(), p.beta.size()); ++k) {
    zp *= zc;
    if (k < p.b.size()) {
      q += p.b[k] * zp;
      bsum += p.b[k];
    }
    if (k < p.beta.size()) pl += p.beta[k] * zp;
  }
  q -= bsum; // explicit side differences u_{j+k} - u_j
  sweep_symbols sym;
  sym.forward = q / (i * pl);
  sym.backward = std::conj(sym.forward);
  return sym;
}

spectral_curve sample_curve(const classical_scheme& s, curve_kind kind, int samples) {
  if (samples < 2) throw error(errc::invalid_argument, "sample_curve: need at least 2 samples");
  spectral_curve curve;
  curve.kind = kind;
  curve.label = s.label;
  curve.z.reserve(static_cast<std::size_t>(samples));
  curve.value.reserve(static_cast<std::size_t>(samples));
  for (int i = 1; i <= samples; ++i) {
    const double z = pi * static_cast<double>(i) / static_cast<double>(samples);
    double v = 0.0;
    switch (kind) {
      case curve_kind::wavenumber: v = numerical_wavenumber(s, z); break;
      case curve_kind::phase: v = phase_velocity(s, z); break;
      case curve_kind::group: v = group_velocity(s, z); break;
    }
    curve.z.push_back(z);
    curve.value.push_back(v);
  }
  return curve;
}

namespace {

// K^F and dK^F/dz at w = e^{iz} from the sweep polynomials; the backward
// symbol is the conjugate, so the averaged operator contributes Re K^F.
void forward_symbol_parts(const prefactored_scheme& p, double z, std::complex<double>& kf,
                          std::complex<double>& dkf) {
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> w = std::exp(i * z);
  std::complex<double> q(0.0, 0.0), pl(p.center(), 0.0), dq(0.0, 0.0), dpl(0.0, 0.0);
  std::complex<double> zp(1.0, 0.0);
  double bsum = 0.0;
  for (std::size_t k = 0; k < std::max(p.b.size(), p.beta.size()); ++k) {
    const std::complex<double> prev = zp;
    zp *= w;
    const double deg = static_cast<double>(k + 1);
    if (k < p.b.size()) {
      q += p.b[k] * zp;
      dq += p.b[k] * deg * prev;
      bsum += p.b[k];
    }
    if (k < p.beta.size()) {
      pl += p.beta[k] * zp;
      dpl += p.beta[k] * deg * prev;
    }
  }
  q -= bsum;
  kf = q / (i * pl);
  // d/dz f(e^{iz}) = i w f'(w)
  dkf = (i * w) * (dq * pl - q * dpl) / (i * pl * pl);
}

} // namespace

spectral_curve sample_curve(const prefactored_scheme& p, curve_kind kind, int samples) {
  if (samples < 2) throw error(errc::invalid_argument, "sample_curve: need at least 2 samples");
  spectral_curve curve;
  curve.kind = kind;
  curve.label = p.label;
  curve.z.reserve(static_cast<std::size_t>(samples));
  curve.value.reserve(static_cast<std::size_t>(samples));
  for (int i = 1; i <= samples; ++i) {
    const double z = pi * static_cast<double>(i) / static_cast<double>(samples);
    std::complex<double> kf, dkf;
    forward_symbol_parts(p, z, kf, dkf);
    double v = 0.0;
    switch (kind) {
      case curve_kind::wavenumber: v = kf.real(); break;
      case curve_kind::phase: v = kf.real() / z; break;
      case curve_kind::group: v = dkf.real(); break;
    }
    curve.z.push_back(z);
    curve.value.push_back(v);
  }
  return curve;
}

} // namespace pcs
