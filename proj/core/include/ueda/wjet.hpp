#pragma once

#include <vector>

#include "ueda/laurent.hpp"

namespace ueda {

// Truncated power series sum_{m=0..M} c_m(z) w^m + O(w^{M+1}) whose
// coefficients are Laurent polynomials in the base coordinate, all valid on
// one annulus.
class WJet {
 public:
  WJet() = default;
  WJet(int order, Annulus ann);

  static WJet zero(int order, Annulus ann) { return WJet(order, ann); }
  // the jet "w" itself
  static WJet identity(int order, Annulus ann);
  static WJet fromConstantJet(const std::vector<cplx>& coeffs, Annulus ann);

  int order() const { return order_; }
  const Annulus& annulus() const { return ann_; }
  const LaurentPoly& coeff(int m) const;
  LaurentPoly& coeffRef(int m);
  void setCoeff(int m, LaurentPoly p);

  WJet truncated(int newOrder) const;

  WJet& operator+=(const WJet& o);
  WJet& operator-=(const WJet& o);
  friend WJet operator+(WJet a, const WJet& b) { return a += b; }
  friend WJet operator-(WJet a, const WJet& b) { return a -= b; }
  friend WJet operator*(const WJet& a, const WJet& b);
  WJet operator*(cplx s) const;
  WJet operator*(const LaurentPoly& p) const;

  // substitute w := s(z, v); s must have zero constant term.
  WJet compose(const WJet& s) const;
  // compositional inverse: the jet s with this(s(v)) = v + O(v^{M+1});
  // requires zero constant term and monomial-invertible linear term.
  WJet reversion() const;
  // (*this)^r for rational r; requires constant term exactly 1.
  WJet fractionalPower(RationalExp r) const;
  WJet powInt(int n) const;  // n >= 0

  cplx eval(cplx z, cplx w) const;
  double maxAbsCoeff() const;
  bool isZero(double tol) const;

  // multiply by w^k (raises exponents; drops what falls beyond truncation)
  WJet shiftW(int k) const;

 private:
  void requireCompatible(const WJet& o) const;
  int order_ = 0;
  Annulus ann_;
  std::vector<LaurentPoly> c_;
};

// L(phi(z, w)) where L is a Laurent polynomial and the substitution target
// phi = c z^eps (1 + u) with u = O(w). Needed for base-coordinate changes.
WJet laurentCompose(const LaurentPoly& L, cplx c, int eps, const WJet& phiRelative);

// Split phi (a jet with monomial leading coefficient gamma z^k) as
// gamma z^k (1 + u); returns u. Throws if the leading coefficient is not a
// monomial in z.
WJet relativeRemainder(const WJet& phi, cplx& gamma, int& k);

}  // namespace ueda
