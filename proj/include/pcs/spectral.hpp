#pragma once

#include <complex>
#include <string>
#include <vector>

#include "pcs/prefactor.hpp"
#include "pcs/schemes.hpp"

namespace pcs {

/// Numerical wavenumber of the classical operator at scaled wavenumber
/// z = k h in [0, pi]:
///   K(z) = sum 2 a_n sin(n z) / (1 + sum 2 alpha_n cos(n z)).
double numerical_wavenumber(const classical_scheme& s, double z);

/// K(z)/z, with the z -> 0 limit (consistency gives exactly 1).
double phase_velocity(const classical_scheme& s, double z);

/// dK/dz, differentiated analytically term by term.
double group_velocity(const classical_scheme& s, double z);

/// Symbols of the sweep operators at z: K^F = Q^F(e^{iz}) / (i P^F(e^{iz}))
/// and the backward mirror. Their imaginary parts are equal and opposite and
/// their mean is the (real) classical wavenumber.
struct sweep_symbols {
  std::complex<double> forward;
  std::complex<double> backward;
};
sweep_symbols prefactored_symbols(const prefactored_scheme& p, double z);

enum class curve_kind { wavenumber, phase, group };

/// Uniform samples of one spectral curve over z in (0, pi].
struct spectral_curve {
  curve_kind kind = curve_kind::wavenumber;
  std::string label;
  std::vector<double> z;
  std::vector<double> value;
};
spectral_curve sample_curve(const classical_scheme& s, curve_kind kind, int samples);
/// Averaged sweep-pair curves computed from the sweep symbols (an independent
/// path from the classical rational form; the two agree to roundoff).
spectral_curve sample_curve(const prefactored_scheme& p, curve_kind kind, int samples);

} // namespace pcs
