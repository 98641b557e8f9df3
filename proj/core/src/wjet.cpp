#include "ueda/wjet.hpp"

#include <algorithm>
#include <cmath>

namespace ueda {

WJet::WJet(int order, Annulus ann) : order_(order), ann_(ann), c_(size_t(order) + 1) {
  if (order < 0) throw domain_error("WJet: negative order");
}

WJet WJet::identity(int order, Annulus ann) {
  WJet j(order, ann);
  if (order >= 1) j.c_[1] = LaurentPoly::constant(1.0);
  return j;
}

WJet WJet::fromConstantJet(const std::vector<cplx>& coeffs, Annulus ann) {
  WJet j(int(coeffs.size()) - 1, ann);
  for (size_t m = 0; m < coeffs.size(); ++m) j.c_[m] = LaurentPoly::constant(coeffs[m]);
  return j;
}

const LaurentPoly& WJet::coeff(int m) const {
  static const LaurentPoly kZero;
  if (m < 0 || m > order_) return kZero;
  return c_[size_t(m)];
}

LaurentPoly& WJet::coeffRef(int m) {
  if (m < 0 || m > order_) throw domain_error("WJet::coeffRef out of range");
  return c_[size_t(m)];
}

void WJet::setCoeff(int m, LaurentPoly p) {
  if (m < 0 || m > order_) throw domain_error("WJet::setCoeff out of range");
  c_[size_t(m)] = std::move(p);
}

WJet WJet::truncated(int newOrder) const {
  WJet j(newOrder, ann_);
  for (int m = 0; m <= std::min(newOrder, order_); ++m) j.c_[size_t(m)] = c_[size_t(m)];
  return j;
}

void WJet::requireCompatible(const WJet& o) const {
  if (ann_.intersect(o.ann_).empty()) throw domain_error("WJet: incompatible annuli");
}

WJet& WJet::operator+=(const WJet& o) {
  requireCompatible(o);
  int m = std::min(order_, o.order_);
  WJet r = truncated(m);
  r.ann_ = ann_.intersect(o.ann_);
  for (int i = 0; i <= m; ++i) r.c_[size_t(i)] += o.c_[size_t(i)];
  *this = std::move(r);
  return *this;
}

WJet& WJet::operator-=(const WJet& o) {
  requireCompatible(o);
  int m = std::min(order_, o.order_);
  WJet r = truncated(m);
  r.ann_ = ann_.intersect(o.ann_);
  for (int i = 0; i <= m; ++i) r.c_[size_t(i)] -= o.c_[size_t(i)];
  *this = std::move(r);
  return *this;
}

WJet operator*(const WJet& a, const WJet& b) {
  a.requireCompatible(b);
  int m = std::min(a.order_, b.order_);
  WJet r(m, a.ann_.intersect(b.ann_));
  for (int i = 0; i <= m; ++i) {
    if (a.c_[size_t(i)].isZero()) continue;
    for (int j = 0; i + j <= m; ++j) {
      if (b.c_[size_t(j)].isZero()) continue;
      r.c_[size_t(i + j)] += a.c_[size_t(i)] * b.c_[size_t(j)];
    }
  }
  for (auto& p : r.c_) p.checkDegreeCap();
  return r;
}

WJet WJet::operator*(cplx s) const {
  WJet r = *this;
  for (auto& p : r.c_) p = p * s;
  return r;
}

WJet WJet::operator*(const LaurentPoly& p) const {
  WJet r = *this;
  for (auto& q : r.c_) {
    q = q * p;
    q.checkDegreeCap();
  }
  return r;
}

WJet WJet::compose(const WJet& s) const {
  requireCompatible(s);
  if (!s.coeff(0).isZero())
    throw domain_error("WJet::compose: inner jet must have zero constant term");
  int m = std::min(order_, s.order_);
  WJet r(m, ann_.intersect(s.ann_));
  r.c_[0] = coeff(0);
  WJet p = s.truncated(m);  // s^k running power
  for (int k = 1; k <= m; ++k) {
    if (!coeff(k).isZero()) {
      for (int i = 0; i <= m; ++i) r.c_[size_t(i)] += p.coeff(i) * coeff(k);
    }
    if (k < m) p = p * s.truncated(m);
  }
  for (auto& q : r.c_) q.checkDegreeCap();
  return r;
}

WJet WJet::reversion() const {
  if (!coeff(0).isZero()) throw domain_error("reversion: nonzero constant term");
  if (!coeff(1).isMonomial())
    throw domain_error("reversion: linear coefficient must be an invertible monomial");
  LaurentPoly inv1 = coeff(1).inverseMonomial();
  WJet s(order_, ann_);
  s.c_[1] = inv1;
  for (int m = 2; m <= order_; ++m) {
    WJet t = compose(s.truncated(m));
    // t = v + d_m v^m + higher-known after choosing s_m; coefficient m of
    // c_1 * s contributes c_1 s_m, currently s_m = 0
    s.c_[size_t(m)] = (t.coeff(m) * inv1) * cplx(-1.0);
    s.c_[size_t(m)].checkDegreeCap();
  }
  return s;
}

WJet WJet::fractionalPower(RationalExp r) const {
  LaurentPoly c0 = coeff(0);
  LaurentPoly one = LaurentPoly::constant(1.0);
  LaurentPoly diff = c0 - one;
  if (!diff.isZero(1e-15)) throw domain_error("fractionalPower: constant term must be 1");
  WJet u = *this;
  u.c_[0] = LaurentPoly();
  WJet acc = WJet(order_, ann_);
  acc.c_[0] = one;
  WJet upow = u;  // u^k
  double rv = r.value();
  double binom = 1.0;
  for (int k = 1; k <= order_; ++k) {
    binom *= (rv - double(k - 1)) / double(k);
    if (binom != 0.0) {
      WJet term = upow * cplx(binom);
      acc += term;
    }
    if (k < order_) upow = upow * u;
  }
  return acc;
}

WJet WJet::powInt(int n) const {
  if (n < 0) throw domain_error("powInt: negative exponent");
  WJet r(order_, ann_);
  r.c_[0] = LaurentPoly::constant(1.0);
  for (int i = 0; i < n; ++i) r = r * (*this);
  return r;
}

cplx WJet::eval(cplx z, cplx w) const {
  cplx s = 0.0;
  for (int m = order_; m >= 0; --m) s = s * w + c_[size_t(m)].eval(z);
  return s;
}

double WJet::maxAbsCoeff() const {
  double m = 0.0;
  for (const auto& p : c_) m = std::max(m, p.maxAbsCoeff());
  return m;
}

bool WJet::isZero(double tol) const {
  for (const auto& p : c_)
    if (!p.isZero(tol)) return false;
  return true;
}

WJet WJet::shiftW(int k) const {
  if (k < 0) throw domain_error("shiftW: negative shift");
  WJet r(order_, ann_);
  for (int m = 0; m + k <= order_; ++m) r.c_[size_t(m + k)] = c_[size_t(m)];
  return r;
}

WJet relativeRemainder(const WJet& phi, cplx& gamma, int& k) {
  const LaurentPoly& c0 = phi.coeff(0);
  if (!c0.isMonomial())
    throw domain_error("relativeRemainder: leading coefficient is not a monomial");
  k = c0.lowest();
  gamma = c0.coeff(k);
  LaurentPoly inv = c0.inverseMonomial();
  WJet u(phi.order(), phi.annulus());
  for (int m = 1; m <= phi.order(); ++m) {
    LaurentPoly q = phi.coeff(m) * inv;
    q.checkDegreeCap();
    u.setCoeff(m, q);
  }
  return u;
}

WJet laurentCompose(const LaurentPoly& L, cplx c, int eps, const WJet& u) {
  // L(c z^eps (1+u)) = sum_e a_e c^e z^{eps e} (1+u)^e
  WJet r(u.order(), u.annulus());
  if (L.isZero()) return r;
  WJet onePlusU = u;
  onePlusU.setCoeff(0, LaurentPoly::constant(1.0));
  for (int e = L.lowest(); e <= L.highest(); ++e) {
    cplx a = L.coeff(e);
    if (a == cplx(0.0)) continue;
    WJet pw = onePlusU.fractionalPower(RationalExp{e, 1});
    LaurentPoly mono = LaurentPoly::monomial(a * cpowInt(c, e), eps * e);
    r += pw * mono;
  }
  return r;
}

}  // namespace ueda
