#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "isophote/lorentz.hpp"

using namespace isophote;

TEST_CASE("mdot examples") {
  CHECK(mdot(MVec3(1, 0, 0), MVec3(1, 0, 0)) == -1.0);
  CHECK(mdot(MVec3(0, 1, 0), MVec3(0, 0, 1)) == 0.0);
  CHECK(mdot(MVec3(1, 2, 0), MVec3(3, 1, 1)) == -1.0);
}

TEST_CASE("mcross basis identities and component formula") {
  const MVec3 e1(1, 0, 0), e2(0, 1, 0), e3(0, 0, 1);
  CHECK((mcross(e1, e2) - MVec3(0, 0, -1)).norm() <= 1e-15);
  CHECK((mcross(e2, e3) - e1).norm() <= 1e-15);
  CHECK((mcross(e3, e1) - MVec3(0, -1, 0)).norm() <= 1e-15);
  CHECK((mcross(MVec3(1, 2, 3), MVec3(4, 5, 6)) - MVec3(-3, -6, 3)).norm() == 0.0);
}

TEST_CASE("mcross orthogonality and antisymmetry on random pairs") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-10, 10);
  for (int i = 0; i < 10000; ++i) {
    const MVec3 x(U(rng), U(rng), U(rng)), y(U(rng), U(rng), U(rng));
    const MVec3 z = mcross(x, y);
    const double scale = x.norm() * y.norm() * std::max(x.norm(), y.norm());
    REQUIRE(std::abs(mdot(z, x)) <= 1e-10 * scale);
    REQUIRE(std::abs(mdot(z, y)) <= 1e-10 * scale);
    REQUIRE((z + mcross(y, x)).norm() <= 1e-10 * z.norm() + 1e-300);
  }
}

TEST_CASE("causal classes") {
  CHECK(causal_class(MVec3(1, 0, 0)) == CausalClass::Timelike);
  CHECK(causal_class(MVec3(1, 1, 0)) == CausalClass::Lightlike);
  CHECK(causal_class(MVec3(0.5, 1, 0)) == CausalClass::Spacelike);
  CHECK(causal_class(MVec3::Zero()) == CausalClass::Spacelike);
  // Band scales with the largest component.
  CHECK(causal_class(MVec3(1e4, 1e4 + 1e-6, 0)) == CausalClass::Lightlike);
}

TEST_CASE("normalize") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-5, 5);
  for (int i = 0; i < 1000; ++i) {
    const MVec3 v(U(rng), U(rng), U(rng));
    // Near the cone the rescaled components grow like |v|/sqrt|<v,v>| and
    // rounding grows with their square.
    if (std::abs(mdot(v, v)) < 1e-2 * v.squaredNorm()) continue;
    CHECK(std::abs(std::abs(mdot(normalize(v), normalize(v))) - 1.0) <= 1e-12);
  }
  CHECK_THROWS_AS(normalize(MVec3(2, 2, 0)), Error);
}

TEST_CASE("angle_invariant dispatch") {
  const MVec3 n(0, 1, 0);
  auto a = angle_invariant(n, MVec3(0, std::cos(0.3), std::sin(0.3)));
  CHECK(a.kind == AngleKind::Cos);
  CHECK(a.c == doctest::Approx(std::cos(0.3)).epsilon(1e-14));
  a = angle_invariant(n, MVec3(std::sinh(0.5), std::cosh(0.5), 0));
  CHECK(a.kind == AngleKind::Cosh);
  CHECK(a.c == doctest::Approx(std::cosh(0.5)).epsilon(1e-14));
  a = angle_invariant(n, MVec3(std::cosh(0.7), std::sinh(0.7), 0));
  CHECK(a.kind == AngleKind::Sinh);
  CHECK(a.c == doctest::Approx(std::sinh(0.7)).epsilon(1e-14));
  a = angle_invariant(MVec3(1, 0, 0), MVec3(-std::cosh(0.2), std::sinh(0.2), 0));
  CHECK(a.kind == AngleKind::TimeconeCosh);
  CHECK(a.c == doctest::Approx(std::cosh(0.2)).epsilon(1e-14));
  CHECK_THROWS_AS(angle_invariant(n, MVec3(1, 1, 0)), Error);
}

TEST_CASE("angle kind is invariant under positive scaling before normalization") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-3, 3), S(0.01, 100);
  int tested = 0;
  for (int i = 0; i < 2000; ++i) {
    const MVec3 n(U(rng), U(rng), U(rng)), d(U(rng), U(rng), U(rng));
    if (causal_class(n, 1e-3) == CausalClass::Lightlike || causal_class(d, 1e-3) == CausalClass::Lightlike) continue;
    const AngleKind k = angle_invariant(normalize(n), normalize(d)).kind;
    const AngleKind k2 = angle_invariant(normalize(MVec3(S(rng) * n)), normalize(MVec3(S(rng) * d))).kind;
    // Nearly-null spans can flip; skip those.
    const MVec3 a = normalize(n), b = normalize(d);
    const double gram = mdot(a, a) * mdot(b, b) - mdot(a, b) * mdot(a, b);
    if (std::abs(gram) < 1e-6) continue;
    CHECK(k == k2);
    ++tested;
  }
  CHECK(tested > 1000);
}

TEST_CASE("angle <-> invariant roundtrip") {
  for (double x : {0.0, 0.3, 1.2}) {
    CHECK(angle_from_invariant(AngleKind::Cos, invariant_from_angle(AngleKind::Cos, x)) == doctest::Approx(x));
    CHECK(angle_from_invariant(AngleKind::Sinh, invariant_from_angle(AngleKind::Sinh, x)) == doctest::Approx(x));
    CHECK(angle_from_invariant(AngleKind::Cosh, invariant_from_angle(AngleKind::Cosh, x)) == doctest::Approx(x));
  }
  CHECK_THROWS_AS(angle_from_invariant(AngleKind::Cosh, 0.5), Error);
  CHECK_THROWS_AS(angle_from_invariant(AngleKind::Cos, 1.5), Error);
}
