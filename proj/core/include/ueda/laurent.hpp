#pragma once

#include <vector>

#include "ueda/scalar.hpp"

namespace ueda {

// Laurent polynomial sum_e c_e z^e with a dense coefficient window
// [lo, lo + size). Exponent range is capped: operations that would push a
// nonzero coefficient past |e| > max_degree throw instead of truncating.
class LaurentPoly {
 public:
  static constexpr int kMaxDegree = 32;

  LaurentPoly() = default;
  static LaurentPoly constant(cplx c);
  static LaurentPoly monomial(cplx c, int e);

  bool isZero(double tol = 0.0) const;
  int lowest() const;   // lowest exponent with nonzero coeff (0 if zero poly)
  int highest() const;  // highest exponent with nonzero coeff
  cplx coeff(int e) const;
  void setCoeff(int e, cplx c);

  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  LaurentPoly operator*(cplx s) const;
  LaurentPoly operator-() const { return *this * cplx(-1.0); }

  // d/dz
  LaurentPoly derivative() const;
  cplx eval(cplx z) const;

  // sum |c_e| max(rI^e, rO^e); an upper bound for sup over the annulus.
  double supNormBound(const Annulus& a) const;
  // |eval| maximized over a dense sample of both boundary circles (lower
  // bound for the true sup; used as the cheap two-sided check).
  double supNormSampled(const Annulus& a, int samples = 256) const;

  // substitute z -> c z^eps, eps in {+1,-1}; exact on Laurent polynomials.
  LaurentPoly substMonomial(cplx c, int eps) const;

  // multiplicative inverse; exact only for monomials, throws otherwise.
  LaurentPoly inverseMonomial() const;
  bool isMonomial() const;

  LaurentPoly conjugateCoeffs() const;  // c_e -> conj(c_e)

  double maxAbsCoeff() const;
  void trim(double tol = 0.0);
  void checkDegreeCap(int cap = kMaxDegree) const;

  const std::vector<cplx>& raw() const { return c_; }
  int rawLo() const { return lo_; }

 private:
  void ensureWindow(int lo, int hi);
  int lo_ = 0;
  std::vector<cplx> c_;
};

}  // namespace ueda
