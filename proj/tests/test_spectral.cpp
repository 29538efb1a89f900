#include "doctest.h"

#include "pcs/error.hpp"
#include "pcs/prefactor.hpp"
#include "pcs/schemes.hpp"
#include "pcs/spectral.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("wavenumber limits: exact at z -> 0, zero at z = pi") {
  for (const auto& label : pcs::builtin_labels()) {
    const auto& s = pcs::builtin_scheme(label);
    CAPTURE(label);
    // Centered schemes cannot represent the odd-even mode.
    CHECK(std::abs(pcs::numerical_wavenumber(s, pi)) <= 1e-14);
    CHECK(pcs::phase_velocity(s, 0.0) == 1.0);
    CHECK(std::abs(pcs::phase_velocity(s, 1e-4) - 1.0) <= 1e-8);
    CHECK(std::abs(pcs::group_velocity(s, 1e-4) - 1.0) <= 1e-7);
  }
}

TEST_CASE("higher order tracks the exact wavenumber further") {
  const double z = 2.0;
  double prev = 1e300;
  for (const auto& label : pcs::builtin_labels()) {
    double gap = std::abs(pcs::numerical_wavenumber(pcs::builtin_scheme(label), z) - z);
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("low-z expansion error scales with the scheme order") {
  // K(z) = z + O(z^(order+1)) near zero: halving z shrinks the gap 2^(order+1).
  for (const char* label : {"C4", "C6", "C8"}) {
    const auto& s = pcs::builtin_scheme(label);
    const double g1 = std::abs(pcs::numerical_wavenumber(s, 0.5) - 0.5);
    const double g2 = std::abs(pcs::numerical_wavenumber(s, 0.25) - 0.25);
    const double rate = std::log2(g1 / g2);
    CAPTURE(label);
    CHECK(std::abs(rate - (s.order + 1)) < 0.25);
  }
}

TEST_CASE("sweep symbols are conjugate and average to the classical wavenumber") {
  for (const auto& label : pcs::builtin_labels()) {
    const auto& s = pcs::builtin_scheme(label);
    auto p = pcs::prefactor(s);
    for (int i = 1; i <= 256; ++i) {
      const double z = pi * i / 256.0;
      auto sym = pcs::prefactored_symbols(p, z);
      CAPTURE(label);
      CAPTURE(z);
      CHECK(std::abs(sym.forward.imag() + sym.backward.imag()) <= 1e-13);
      CHECK(std::abs(sym.forward.real() - sym.backward.real()) <= 1e-13);
      const double avg = 0.5 * (sym.forward.real() + sym.backward.real());
      CHECK(std::abs(avg - pcs::numerical_wavenumber(s, z)) <= 1e-12);
    }
  }
}

TEST_CASE("forward sweep is dissipative across the spectrum") {
  // Minimum-phase factor: Im K^F > 0 on (0, pi), so the forward operator
  // damps and the backward one anti-damps; the average cancels.
  auto p = pcs::prefactor(pcs::builtin_scheme("C6"));
  for (int i = 1; i <= 64; ++i) {
    const double z = pi * i / 65.0;
    CHECK(pcs::prefactored_symbols(p, z).forward.imag() > 0.0);
  }
  // The small-z dissipation grows quadratically.
  const double d1 = pcs::prefactored_symbols(p, 0.02).forward.imag();
  const double d2 = pcs::prefactored_symbols(p, 0.01).forward.imag();
  CHECK(std::abs(d1 / d2 - 4.0) <= 0.01);
}

TEST_CASE("curve sampling covers (0, pi] and matches pointwise evaluation") {
  const auto& s = pcs::builtin_scheme("C8");
  auto c = pcs::sample_curve(s, pcs::curve_kind::wavenumber, 64);
  REQUIRE(c.z.size() == 64);
  REQUIRE(c.value.size() == 64);
  CHECK(c.label == "C8");
  CHECK(c.kind == pcs::curve_kind::wavenumber);
  CHECK(c.z.front() == doctest::Approx(pi / 64.0));
  CHECK(c.z.back() == doctest::Approx(pi));
  for (std::size_t i = 0; i < c.z.size(); ++i)
    CHECK(c.value[i] == pcs::numerical_wavenumber(s, c.z[i]));

  auto g = pcs::sample_curve(s, pcs::curve_kind::group, 64);
  for (std::size_t i = 0; i < g.z.size(); ++i)
    CHECK(g.value[i] == pcs::group_velocity(s, g.z[i]));

  CHECK_THROWS_AS((void)pcs::sample_curve(s, pcs::curve_kind::phase, 1), pcs::error);
}

TEST_CASE("averaged sweep curves agree with the classical curves") {
  for (const char* label : {"C4", "C6", "C10", "C16"}) {
    const auto& s = pcs::builtin_scheme(label);
    auto p = pcs::prefactor(s);
    for (auto kind :
         {pcs::curve_kind::wavenumber, pcs::curve_kind::phase, pcs::curve_kind::group}) {
      auto cc = pcs::sample_curve(s, kind, 48);
      auto pc = pcs::sample_curve(p, kind, 48);
      REQUIRE(pc.z.size() == cc.z.size());
      CHECK(pc.label == p.label);
      for (std::size_t i = 0; i < cc.z.size(); ++i) {
        CAPTURE(label);
        CAPTURE(cc.z[i]);
        CHECK(pc.z[i] == cc.z[i]);
        CHECK(std::abs(pc.value[i] - cc.value[i]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("group velocity matches a finite-difference check") {
  const auto& s = pcs::builtin_scheme("C10");
  for (double z : {0.3, 1.1, 2.2, 2.9}) {
    const double eps = 1e-6;
    const double fd = (pcs::numerical_wavenumber(s, z + eps) -
                       pcs::numerical_wavenumber(s, z - eps)) /
                      (2.0 * eps);
    CHECK(std::abs(pcs::group_velocity(s, z) - fd) <= 1e-7);
  }
}
