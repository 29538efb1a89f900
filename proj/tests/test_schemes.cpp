#include "doctest.h"

#include "pcs/error.hpp"
#include "pcs/schemes.hpp"

#include <cmath>
#include <vector>

namespace {

/// Residual of the Taylor moment condition at moment p:
///   sum_k 2 a_k k^(2p+1) / (2p+1)!  =  delta_{p0} + sum_k 2 alpha_k k^(2p) / (2p)!.
/// A scheme of order 2m satisfies p = 0 .. m-1.
double moment_residual(const pcs::classical_scheme& s, int p) {
  auto fact = [](int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  double lhs = 0.0;
  for (int k = 1; k <= s.ne(); ++k)
    lhs += 2.0 * s.a[k - 1] * std::pow(k, 2 * p + 1) / fact(2 * p + 1);
  double rhs = p == 0 ? 1.0 : 0.0;
  for (int k = 1; k <= s.nc(); ++k)
    rhs += 2.0 * s.alpha[k - 1] * std::pow(k, 2 * p) / fact(2 * p);
  return lhs - rhs;
}

void check_weights(const pcs::classical_scheme& s, const std::vector<double>& alpha,
                   const std::vector<double>& a) {
  REQUIRE(s.alpha.size() == alpha.size());
  REQUIRE(s.a.size() == a.size());
  for (std::size_t i = 0; i < alpha.size(); ++i)
    CHECK(s.alpha[i] == doctest::Approx(alpha[i]).epsilon(1e-15));
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(s.a[i] == doctest::Approx(a[i]).epsilon(1e-15));
}

} // namespace

TEST_CASE("catalog weights are the published rationals") {
  check_weights(pcs::builtin_scheme("C4"), {1.0 / 4.0}, {3.0 / 4.0});
  check_weights(pcs::builtin_scheme("C6"), {1.0 / 3.0}, {7.0 / 9.0, 1.0 / 36.0});
  check_weights(pcs::builtin_scheme("C8"), {4.0 / 9.0, 1.0 / 36.0},
                {20.0 / 27.0, 25.0 / 216.0});
  check_weights(pcs::builtin_scheme("C10"), {1.0 / 2.0, 1.0 / 20.0},
                {17.0 / 24.0, 101.0 / 600.0, 1.0 / 600.0});
  check_weights(pcs::builtin_scheme("C12"), {9.0 / 16.0, 9.0 / 100.0, 1.0 / 400.0},
                {21.0 / 32.0, 231.0 / 1000.0, 49.0 / 4000.0});
  check_weights(pcs::builtin_scheme("C14"), {3.0 / 5.0, 3.0 / 25.0, 1.0 / 175.0},
                {31.0 / 50.0, 67.0 / 250.0, 283.0 / 12250.0, 1.0 / 9800.0});
  check_weights(pcs::builtin_scheme("C16"),
                {16.0 / 25.0, 4.0 / 25.0, 16.0 / 1225.0, 1.0 / 4900.0},
                {72.0 / 125.0, 38.0 / 125.0, 1784.0 / 42875.0, 761.0 / 686000.0});
}

TEST_CASE("catalog metadata") {
  auto labels = pcs::builtin_labels();
  REQUIRE(labels.size() == 7);
  int order = 4;
  for (const auto& label : labels) {
    const auto& s = pcs::builtin_scheme(label);
    CHECK(s.label == label);
    CHECK(s.order == order);
    CHECK(2 * (s.nc() + s.ne()) == s.order);
    CHECK(pcs::is_builtin(label));
    order += 2;
  }
  CHECK_FALSE(pcs::is_builtin("C5"));
  CHECK_FALSE(pcs::is_builtin("PC6"));
  CHECK_THROWS_AS((void)pcs::builtin_scheme("C18"), pcs::error);
}

TEST_CASE("catalog schemes satisfy the moment conditions to machine accuracy") {
  for (const auto& label : pcs::builtin_labels()) {
    const auto& s = pcs::builtin_scheme(label);
    for (int p = 0; p < s.order / 2; ++p) {
      CAPTURE(label);
      CAPTURE(p);
      CHECK(std::abs(moment_residual(s, p)) <= 1e-12);
    }
  }
}

TEST_CASE("derived schemes reproduce the catalog") {
  for (const auto& label : pcs::builtin_labels()) {
    const auto& ref = pcs::builtin_scheme(label);
    auto rep = pcs::derive_classical_report(ref.nc(), ref.ne());
    CHECK(rep.condition > 0.0);
    const auto& s = rep.scheme;
    REQUIRE(s.nc() == ref.nc());
    REQUIRE(s.ne() == ref.ne());
    CHECK(s.order == ref.order);
    for (int i = 0; i < ref.nc(); ++i) {
      CAPTURE(label);
      CHECK(std::abs(s.alpha[i] - ref.alpha[i]) <= 1e-12 * std::abs(ref.alpha[i]));
    }
    for (int i = 0; i < ref.ne(); ++i) {
      CAPTURE(label);
      CHECK(std::abs(s.a[i] - ref.a[i]) <= 1e-12 * std::abs(ref.a[i]));
    }
  }
}

TEST_CASE("derivation rejects unusable stencil splits") {
  CHECK_THROWS_AS((void)pcs::derive_classical(0, 1), pcs::error);
  CHECK_THROWS_AS((void)pcs::derive_classical(1, 0), pcs::error);
  CHECK_THROWS_AS((void)pcs::derive_classical(-1, 2), pcs::error);
  CHECK_THROWS_AS((void)pcs::derive_classical(5, 4), pcs::error);
  try {
    (void)pcs::derive_classical(4, 5);
    FAIL("expected rejection of nc + ne > 8");
  } catch (const pcs::error& e) {
    CHECK(e.code() == pcs::errc::invalid_argument);
  }
}

TEST_CASE("normalization spot values") {
  auto n4 = pcs::normalize(pcs::builtin_scheme("C4"));
  REQUIRE(n4.gamma.size() == 1);
  REQUIRE(n4.eta.size() == 1);
  CHECK(n4.gamma[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(n4.eta[0] == doctest::Approx(1.0 / 2.0).epsilon(1e-15));
  CHECK(n4.center() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  auto n6 = pcs::normalize(pcs::builtin_scheme("C6"));
  CHECK(n6.gamma[0] == doctest::Approx(1.0 / 5.0).epsilon(1e-15));
  CHECK(n6.eta[0] == doctest::Approx(7.0 / 15.0).epsilon(1e-15));
  CHECK(n6.eta[1] == doctest::Approx(1.0 / 60.0).epsilon(1e-15));

  auto n8 = pcs::normalize(pcs::builtin_scheme("C8"));
  CHECK(n8.gamma[0] == doctest::Approx(8.0 / 35.0).epsilon(1e-15));
  CHECK(n8.gamma[1] == doctest::Approx(1.0 / 70.0).epsilon(1e-15));
  CHECK(n8.center() == doctest::Approx(18.0 / 35.0).epsilon(1e-15));

  // center() is the normalization identity 1 - 2 sum gamma for every order.
  for (const auto& label : pcs::builtin_labels()) {
    auto n = pcs::normalize(pcs::builtin_scheme(label));
    double sum = 0.0;
    for (double g : n.gamma) sum += g;
    CHECK(n.center() == doctest::Approx(1.0 - 2.0 * sum).epsilon(1e-15));
  }
}

TEST_CASE("scheme lines round-trip exactly") {
  for (const auto& label : pcs::builtin_labels()) {
    const auto& s = pcs::builtin_scheme(label);
    auto back = pcs::parse_scheme_line(pcs::format_scheme_line(s));
    CHECK(back.label == s.label);
    CHECK(back.order == s.order);
    REQUIRE(back.alpha.size() == s.alpha.size());
    REQUIRE(back.a.size() == s.a.size());
    for (std::size_t i = 0; i < s.alpha.size(); ++i) CHECK(back.alpha[i] == s.alpha[i]);
    for (std::size_t i = 0; i < s.a.size(); ++i) CHECK(back.a[i] == s.a[i]);
  }
}

TEST_CASE("scheme line parse errors") {
  CHECK_THROWS_AS((void)pcs::parse_scheme_line(""), pcs::error);
  CHECK_THROWS_AS((void)pcs::parse_scheme_line("C4, 4, 1"), pcs::error);
  // Field count must match the declared split.
  CHECK_THROWS_AS((void)pcs::parse_scheme_line("X, 4, 1, 1, 0.25"), pcs::error);
  CHECK_THROWS_AS((void)pcs::parse_scheme_line("X, 4, 1, 1, 0.25, 0.75, 0.1"), pcs::error);
  CHECK_THROWS_AS((void)pcs::parse_scheme_line("X, four, 1, 1, 0.25, 0.75"), pcs::error);
}
