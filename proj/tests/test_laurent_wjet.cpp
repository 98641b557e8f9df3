#include <doctest.h>

#include <random>
#include <vector>

#include "ueda/laurent.hpp"
#include "ueda/wjet.hpp"

using namespace ueda;

namespace {

// brute-force compositional inverse: solve J(S(v)) = v coefficient by
// coefficient using plain double convolution arrays (independent of WJet)
std::vector<double> bruteReversion(const std::vector<double>& j, int order) {
  std::vector<double> s(size_t(order) + 1, 0.0);
  s[1] = 1.0 / j[1];
  auto mul = [&](const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> r(size_t(order) + 1, 0.0);
    for (int x = 0; x <= order; ++x)
      for (int y = 0; x + y <= order; ++y) r[size_t(x + y)] += a[size_t(x)] * b[size_t(y)];
    return r;
  };
  for (int m = 2; m <= order; ++m) {
    // expand J(S) with s[m] still 0 and read the defect at v^m
    std::vector<double> comp(size_t(order) + 1, 0.0);
    std::vector<double> pw = s;
    for (int k = 1; k <= order; ++k) {
      if (k > 1) pw = mul(pw, s);
      if (k < int(j.size()) && j[size_t(k)] != 0.0)
        for (int a = 0; a <= order; ++a) comp[size_t(a)] += j[size_t(k)] * pw[size_t(a)];
    }
    s[size_t(m)] = -comp[size_t(m)] / j[1];
  }
  return s;
}

}  // namespace

TEST_CASE("laurent arithmetic basics") {
  LaurentPoly z = LaurentPoly::monomial(1.0, 1);
  LaurentPoly zi = LaurentPoly::monomial(1.0, -1);
  LaurentPoly s = z + zi;
  CHECK(s.coeff(1) == cplx(1.0));
  CHECK(s.coeff(-1) == cplx(1.0));
  LaurentPoly p = s * s;
  CHECK(p.coeff(2) == cplx(1.0));
  CHECK(p.coeff(0) == cplx(2.0));
  CHECK(p.coeff(-2) == cplx(1.0));
  CHECK(p.eval(cplx(2.0)).real() == doctest::Approx(6.25));
  CHECK(s.derivative().coeff(-2) == cplx(-1.0));
  CHECK(s.derivative().coeff(0) == cplx(1.0));
}

TEST_CASE("supNorm bounds") {
  Annulus half2{0.5, 2.0};
  CHECK(LaurentPoly::constant(1.0).supNormBound(half2) == doctest::Approx(1.0));
  CHECK(LaurentPoly::monomial(1.0, 1).supNormBound(half2) == doctest::Approx(2.0));
  LaurentPoly s = LaurentPoly::monomial(1.0, 1) + LaurentPoly::monomial(1.0, -1);
  double bound = s.supNormBound(half2);
  CHECK(bound <= 4.0 + 1e-12);
  // dense boundary sampling oracle: true sup is 2.5, attained at z = +-2
  double sampled = s.supNormSampled(half2, 2048);
  CHECK(sampled >= 2.5 - 1e-6);
  CHECK(bound >= sampled);
}

TEST_CASE("supNorm is submultiplicative on shared annuli") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Annulus a{0.5, 2.0};
  for (int trial = 0; trial < 50; ++trial) {
    LaurentPoly f, g;
    for (int e = -3; e <= 3; ++e) {
      f.setCoeff(e, cplx(uni(rng), uni(rng)));
      g.setCoeff(e, cplx(uni(rng), uni(rng)));
    }
    CHECK((f * g).supNormBound(a) <= f.supNormBound(a) * g.supNormBound(a) + 1e-9);
  }
}

TEST_CASE("reversion of w + w^2") {
  Annulus a{0.5, 2.0};
  WJet j(3, a);
  j.setCoeff(1, LaurentPoly::constant(1.0));
  j.setCoeff(2, LaurentPoly::constant(1.0));
  WJet s = j.reversion();
  // frozen from the brute-force substitution oracle: w - w^2 + 2w^3
  CHECK(std::abs(s.coeff(1).coeff(0) - cplx(1.0)) < 1e-14);
  CHECK(std::abs(s.coeff(2).coeff(0) - cplx(-1.0)) < 1e-14);
  CHECK(std::abs(s.coeff(3).coeff(0) - cplx(2.0)) < 1e-14);
  auto oracle = bruteReversion({0.0, 1.0, 1.0}, 3);
  CHECK(oracle[1] == doctest::Approx(1.0));
  CHECK(oracle[2] == doctest::Approx(-1.0));
  CHECK(oracle[3] == doctest::Approx(2.0));
}

TEST_CASE("reversion round-trips on random jets") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(-0.5, 0.5);
  Annulus a{0.5, 2.0};
  for (int trial = 0; trial < 20; ++trial) {
    WJet j(6, a);
    j.setCoeff(1, LaurentPoly::constant(1.0));
    for (int m = 2; m <= 6; ++m) {
      LaurentPoly c;
      c.setCoeff(-1, cplx(uni(rng), uni(rng)));
      c.setCoeff(0, cplx(uni(rng), uni(rng)));
      c.setCoeff(1, cplx(uni(rng), uni(rng)));
      j.setCoeff(m, c);
    }
    WJet s = j.reversion();
    WJet id = j.compose(s);
    CHECK(std::abs(id.coeff(1).coeff(0) - cplx(1.0)) < 1e-11);
    for (int m = 2; m <= 6; ++m) CHECK(id.coeff(m).maxAbsCoeff() < 1e-11);
  }
}

TEST_CASE("fractional power binomial: (1 - w^2)^{-1/2}") {
  Annulus a{0.5, 2.0};
  WJet j(4, a);
  j.setCoeff(0, LaurentPoly::constant(1.0));
  j.setCoeff(2, LaurentPoly::constant(-1.0));
  WJet p = j.fractionalPower(RationalExp{-1, 2});
  // binomial series oracle: 1 + w^2/2 + 3 w^4/8
  CHECK(std::abs(p.coeff(0).coeff(0) - cplx(1.0)) < 1e-14);
  CHECK(p.coeff(1).maxAbsCoeff() < 1e-14);
  CHECK(std::abs(p.coeff(2).coeff(0) - cplx(0.5)) < 1e-14);
  CHECK(p.coeff(3).maxAbsCoeff() < 1e-14);
  CHECK(std::abs(p.coeff(4).coeff(0) - cplx(0.375)) < 1e-14);
}

TEST_CASE("fractional power undoes integer power") {
  Annulus a{0.5, 2.0};
  WJet j(5, a);
  j.setCoeff(0, LaurentPoly::constant(1.0));
  LaurentPoly c;
  c.setCoeff(0, cplx(0.3, 0.1));
  c.setCoeff(1, cplx(-0.2, 0.0));
  j.setCoeff(1, c);
  WJet cube = j.powInt(3);
  WJet back = cube.fractionalPower(RationalExp{1, 3});
  for (int m = 0; m <= 5; ++m) CHECK((back.coeff(m) - j.coeff(m)).maxAbsCoeff() < 1e-12);
}

TEST_CASE("compose with identity is the identity action") {
  Annulus a{0.5, 2.0};
  WJet j(4, a);
  j.setCoeff(1, LaurentPoly::constant(2.0));
  j.setCoeff(3, LaurentPoly::monomial(cplx(0.0, 1.0), -2));
  WJet id = WJet::identity(4, a);
  WJet c = j.compose(id);
  for (int m = 0; m <= 4; ++m) CHECK((c.coeff(m) - j.coeff(m)).maxAbsCoeff() == 0.0);
}

TEST_CASE("incompatible annuli are rejected") {
  WJet a(2, Annulus{0.1, 0.2});
  WJet b(2, Annulus{0.5, 1.0});
  CHECK_THROWS_AS(a + b, domain_error);
}

TEST_CASE("degree cap failure is loud") {
  Annulus a{0.5, 2.0};
  LaurentPoly big = LaurentPoly::monomial(1.0, 20);
  LaurentPoly big2 = LaurentPoly::monomial(1.0, 18);
  CHECK_THROWS_AS((big * big2).checkDegreeCap(), domain_error);
}
