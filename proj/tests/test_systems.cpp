#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "systems.hpp"

using namespace shrinktarget;

namespace {
const double kGolden2 = (3.0 + std::sqrt(5.0)) / 2.0;

SpectralProfile spectrum(IntMatrix m) { return analyze_matrix(IntegerMatrixSystem::create(std::move(m))); }
}  // namespace

TEST_CASE("cat map spectrum") {
  auto p = spectrum({{2, 1}, {1, 1}});
  REQUIRE(p.eigen_moduli.size() == 2);
  CHECK(p.eigen_moduli[0].modulus == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-12));
  CHECK(p.eigen_moduli[1].modulus == doctest::Approx(kGolden2).epsilon(1e-12));
  CHECK(p.eigen_moduli[0].multiplicity == 1);
  CHECK(p.d_s == 1);
  CHECK(p.d_u == 1);
  CHECK(p.is_hyperbolic);
  CHECK_FALSE(p.is_expanding);
  REQUIRE(p.lambda_s_mod);
  REQUIRE(p.lambda_u_mod);
}

TEST_CASE("one-dimensional expanding map") {
  auto p = spectrum({{2}});
  REQUIRE(p.eigen_moduli.size() == 1);
  CHECK(p.eigen_moduli[0].modulus == doctest::Approx(2.0));
  CHECK(p.is_expanding);
  CHECK(p.is_hyperbolic);
}

TEST_CASE("identity is not hyperbolic") {
  auto p = spectrum({{1, 0}, {0, 1}});
  CHECK_FALSE(p.is_hyperbolic);
  CHECK_FALSE(p.is_expanding);
  REQUIRE(p.eigen_moduli.size() == 1);
  CHECK(p.eigen_moduli[0].multiplicity == 2);
  CHECK_THROWS_AS(entropy_toral(p), Error);
}

TEST_CASE("singular and malformed matrices") {
  try {
    IntegerMatrixSystem::create({{1, 2}, {2, 4}});
    FAIL("expected SingularMatrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularMatrix);
  }
  CHECK_THROWS_AS(IntegerMatrixSystem::create({{1, 2}}), Error);
  CHECK_THROWS_AS(IntegerMatrixSystem::create({}), Error);
}

TEST_CASE("map kind") {
  CHECK(IntegerMatrixSystem::create({{2, 1}, {1, 1}}).kind() == MapKind::Automorphism);
  CHECK(IntegerMatrixSystem::create({{2, 0}, {0, 2}}).kind() == MapKind::Endomorphism);
  CHECK(IntegerMatrixSystem::create({{2, 0}, {0, 2}}).abs_det() == 4);
}

TEST_CASE("toral entropy") {
  CHECK(entropy_toral(spectrum({{2, 1}, {1, 1}})) == doctest::Approx(std::log(kGolden2)).epsilon(1e-12));
  CHECK(entropy_toral(spectrum({{2, 1}, {1, 1}})) == doctest::Approx(0.962424).epsilon(1e-6));
  CHECK(entropy_toral(spectrum({{2}})) == doctest::Approx(std::log(2.0)));
  CHECK(entropy_toral(spectrum({{2, 0}, {0, 2}})) == doctest::Approx(2.0 * std::log(2.0)));
}

TEST_CASE("sharp profiles") {
  auto m = IntegerMatrixSystem::create({{2, 1}, {1, 1}});
  auto s = sharp_profile_from_matrix(m, analyze_matrix(m));
  const double l = std::log(kGolden2);
  CHECK(s.lambda1 == doctest::Approx(l));
  CHECK(s.lambda2 == doctest::Approx(l));
  REQUIRE(s.lnL1);
  CHECK(*s.lnL1 == doctest::Approx(l));
  CHECK(s.lnL2 == doctest::Approx(l));

  auto e = IntegerMatrixSystem::create({{2}});
  auto se = sharp_profile_from_matrix(e, analyze_matrix(e));
  CHECK(std::isinf(se.lambda1));
  CHECK(se.lambda2 == doctest::Approx(std::log(2.0)));
  CHECK(se.lnL2 == doctest::Approx(std::log(2.0)));
  CHECK_FALSE(se.lnL1);
}

TEST_CASE("sharp profile refuses three moduli in the mixed case") {
  // Eigenvalues 3, 1/2-ish... use a block matrix with moduli {cat_s, cat_u, 2}.
  auto m = IntegerMatrixSystem::create({{2, 1, 0}, {1, 1, 0}, {0, 0, 2}});
  auto p = analyze_matrix(m);
  CHECK(p.is_hyperbolic);
  CHECK(p.eigen_moduli.size() == 3);
  CHECK_FALSE(p.lambda_s_mod);
  try {
    sharp_profile_from_matrix(m, p);
    FAIL("expected UnsupportedSpectrum");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedSpectrum);
  }
  auto c = crude_profile_from_matrix(m);
  CHECK(c.usable);
}

TEST_CASE("crude profiles") {
  auto cat = crude_profile_from_matrix(IntegerMatrixSystem::create({{2, 1}, {1, 1}}));
  CHECK(cat.lnL2 == doctest::Approx(std::log(kGolden2)).epsilon(1e-12));
  REQUIRE(cat.lnL1);
  CHECK(*cat.lnL1 == doctest::Approx(std::log(kGolden2)).epsilon(1e-12));

  auto shear = crude_profile_from_matrix(IntegerMatrixSystem::create({{1, 1}, {0, 1}}));
  CHECK(shear.lnL2 == doctest::Approx(std::log((1.0 + std::sqrt(5.0)) / 2.0)).epsilon(1e-12));
  CHECK_FALSE(shear.usable);

  auto two = crude_profile_from_matrix(IntegerMatrixSystem::create({{2}}));
  CHECK(two.lnL2 == doctest::Approx(std::log(2.0)));
}

TEST_CASE("nonsymmetric matrix: sharp constants strictly below crude") {
  auto m = IntegerMatrixSystem::create({{2, 1}, {0, 3}});
  auto p = analyze_matrix(m);
  CHECK(p.is_expanding);
  auto s = sharp_profile_from_matrix(m, p);
  auto c = crude_profile_from_matrix(m);
  CHECK(s.lnL2 == doctest::Approx(std::log(3.0)));
  CHECK(s.lnL2 < c.lnL2 - 1e-3);
}

TEST_CASE("spectral invariants on a batch of matrices") {
  const std::vector<IntMatrix> ms = {
      {{2, 1}, {1, 1}},
      {{3, 1}, {2, 1}},
      {{0, 1}, {1, 1}},
      {{2, 1}, {0, 3}},
      {{1, -2}, {1, 1}},
      {{2, 1, 0}, {1, 1, 0}, {0, 0, 2}},
      {{0, 0, 1}, {1, 0, 0}, {0, 1, 1}},
      {{1, 1, 0, 0}, {1, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}},
      {{2, 1, 0, 0, 0}, {1, 1, 0, 0, 0}, {0, 0, 3, 0, 0}, {0, 0, 0, 2, 1}, {0, 0, 0, 1, 1}},
      {{0, 0, 0, 0, 0, 1}, {1, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 1}, {0, 0, 1, 0, 0, 0},
       {0, 0, 0, 1, 0, 0}, {0, 0, 0, 0, 1, 2}}};
  for (const auto& a : ms) {
    auto m = IntegerMatrixSystem::create(a);
    auto p = analyze_matrix(m);
    int total = 0;
    double log_prod = 0.0;
    for (const auto& c : p.eigen_moduli) {
      total += c.multiplicity;
      log_prod += c.multiplicity * std::log(c.modulus);
    }
    CHECK(total == static_cast<int>(a.size()));
    CHECK(log_prod == doctest::Approx(std::log(static_cast<double>(m.abs_det()))).epsilon(1e-9));
    for (std::size_t i = 1; i < p.eigen_moduli.size(); ++i)
      CHECK(p.eigen_moduli[i - 1].modulus < p.eigen_moduli[i].modulus);
  }
}

TEST_CASE("repeated and shared moduli") {
  auto dup = spectrum({{2, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 2, 1}, {0, 0, 1, 1}});
  REQUIRE(dup.eigen_moduli.size() == 2);
  CHECK(dup.eigen_moduli[0].multiplicity == 2);
  CHECK(dup.d_s == 2);
  CHECK(dup.lambda_s_mod);

  auto complex_pair = spectrum({{1, -2}, {1, 1}});
  REQUIRE(complex_pair.eigen_moduli.size() == 1);
  CHECK(complex_pair.eigen_moduli[0].modulus == doctest::Approx(std::sqrt(3.0)));
  CHECK(complex_pair.eigen_moduli[0].shared);
  CHECK_FALSE(complex_pair.notes.empty());
}

TEST_CASE("entropy of powers scales linearly") {
  for (const IntMatrix& a : {IntMatrix{{2, 1}, {1, 1}}, IntMatrix{{3, 1}, {2, 1}}, IntMatrix{{2, 1}, {0, 3}}}) {
    auto m = IntegerMatrixSystem::create(a);
    const double h = entropy_toral(analyze_matrix(m));
    for (unsigned k : {2u, 3u}) CHECK(entropy_toral(analyze_matrix(m.power(k))) / k == doctest::Approx(h).epsilon(1e-10));
  }
}

TEST_CASE("two-moduli automorphisms balance stable and unstable volume") {
  for (const IntMatrix& a : {IntMatrix{{2, 1}, {1, 1}}, IntMatrix{{2, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 2, 1}, {0, 0, 1, 1}}}) {
    auto p = spectrum(a);
    REQUIRE(p.lambda_s_mod);
    CHECK(p.d_s * -std::log(*p.lambda_s_mod) == doctest::Approx(p.d_u * std::log(*p.lambda_u_mod)).epsilon(1e-10));
  }
}

TEST_CASE("sharp never exceeds crude") {
  for (const IntMatrix& a : {IntMatrix{{2, 1}, {1, 1}}, IntMatrix{{5, 2}, {2, 1}}, IntMatrix{{1, 2}, {1, 3}}, IntMatrix{{2, 1}, {0, 3}}}) {
    auto m = IntegerMatrixSystem::create(a);
    auto s = sharp_profile_from_matrix(m, analyze_matrix(m));
    auto c = crude_profile_from_matrix(m);
    CHECK(s.lnL2 <= c.lnL2 + 1e-12);
    if (s.lnL1 && c.lnL1) CHECK(*s.lnL1 <= *c.lnL1 + 1e-12);
  }
}

TEST_CASE("singular values") {
  auto [mx, mn] = singular_value_extremes({{3, 0}, {0, 2}});
  CHECK(mx == doctest::Approx(3.0));
  CHECK(mn == doctest::Approx(2.0));
}
