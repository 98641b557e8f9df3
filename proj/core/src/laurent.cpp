#include "ueda/laurent.hpp"

#include <algorithm>
#include <cmath>

namespace ueda {

LaurentPoly LaurentPoly::constant(cplx c) { return monomial(c, 0); }

LaurentPoly LaurentPoly::monomial(cplx c, int e) {
  LaurentPoly p;
  if (c != cplx(0.0)) {
    p.lo_ = e;
    p.c_ = {c};
  }
  return p;
}

bool LaurentPoly::isZero(double tol) const {
  for (const cplx& v : c_)
    if (std::abs(v) > tol) return false;
  return true;
}

int LaurentPoly::lowest() const {
  for (size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != cplx(0.0)) return lo_ + int(i);
  return 0;
}

int LaurentPoly::highest() const {
  for (size_t i = c_.size(); i-- > 0;)
    if (c_[i] != cplx(0.0)) return lo_ + int(i);
  return 0;
}

cplx LaurentPoly::coeff(int e) const {
  int idx = e - lo_;
  if (idx < 0 || idx >= int(c_.size())) return 0.0;
  return c_[idx];
}

void LaurentPoly::ensureWindow(int lo, int hi) {
  if (c_.empty()) {
    lo_ = lo;
    c_.assign(size_t(hi - lo + 1), 0.0);
    return;
  }
  int cur_hi = lo_ + int(c_.size()) - 1;
  if (lo < lo_) {
    c_.insert(c_.begin(), size_t(lo_ - lo), 0.0);
    lo_ = lo;
  }
  if (hi > cur_hi) c_.resize(c_.size() + size_t(hi - cur_hi), 0.0);
}

void LaurentPoly::setCoeff(int e, cplx v) {
  if (v == cplx(0.0) && (e < lo_ || e >= lo_ + int(c_.size()))) return;
  ensureWindow(std::min(e, c_.empty() ? e : lo_), std::max(e, c_.empty() ? e : lo_ + int(c_.size()) - 1));
  c_[size_t(e - lo_)] = v;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  if (o.c_.empty()) return *this;
  ensureWindow(std::min(lo_, o.lo_), std::max(c_.empty() ? o.lo_ : lo_ + int(c_.size()) - 1,
                                              o.lo_ + int(o.c_.size()) - 1));
  for (size_t i = 0; i < o.c_.size(); ++i) c_[size_t(o.lo_ + int(i) - lo_)] += o.c_[i];
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  return *this += o * cplx(-1.0);
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly r;
  if (a.c_.empty() || b.c_.empty()) return r;
  r.lo_ = a.lo_ + b.lo_;
  r.c_.assign(a.c_.size() + b.c_.size() - 1, 0.0);
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == cplx(0.0)) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
  }
  r.trim();
  return r;
}

LaurentPoly LaurentPoly::operator*(cplx s) const {
  LaurentPoly r = *this;
  for (cplx& v : r.c_) v *= s;
  return r;
}

LaurentPoly LaurentPoly::derivative() const {
  LaurentPoly r;
  for (size_t i = 0; i < c_.size(); ++i) {
    int e = lo_ + int(i);
    if (e != 0 && c_[i] != cplx(0.0)) r.setCoeff(e - 1, double(e) * c_[i]);
  }
  return r;
}

cplx LaurentPoly::eval(cplx z) const {
  if (c_.empty()) return 0.0;
  cplx s = 0.0;
  cplx p = cpowInt(z, lo_);
  for (size_t i = 0; i < c_.size(); ++i) {
    s += c_[i] * p;
    p *= z;
  }
  return s;
}

double LaurentPoly::supNormBound(const Annulus& a) const {
  double s = 0.0;
  for (size_t i = 0; i < c_.size(); ++i) {
    int e = lo_ + int(i);
    double m = std::abs(c_[i]);
    if (m == 0.0) continue;
    s += m * std::max(std::pow(a.r_inner, e), std::pow(a.r_outer, e));
  }
  return s;
}

double LaurentPoly::supNormSampled(const Annulus& a, int samples) const {
  double best = 0.0;
  for (double r : {a.r_inner, a.r_outer, 0.5 * (a.r_inner + a.r_outer)}) {
    if (!(r > 0.0) || !std::isfinite(r)) continue;
    for (int k = 0; k < samples; ++k) {
      double th = 2.0 * kPi * k / samples;
      best = std::max(best, std::abs(eval(std::polar(r, th))));
    }
  }
  return best;
}

LaurentPoly LaurentPoly::substMonomial(cplx c, int eps) const {
  if (eps != 1 && eps != -1) throw domain_error("substMonomial: eps must be +-1");
  LaurentPoly r;
  for (size_t i = 0; i < c_.size(); ++i) {
    int e = lo_ + int(i);
    if (c_[i] == cplx(0.0)) continue;
    r.setCoeff(eps * e, c_[i] * cpowInt(c, e));
  }
  return r;
}

bool LaurentPoly::isMonomial() const {
  int nz = 0;
  for (const cplx& v : c_)
    if (v != cplx(0.0)) ++nz;
  return nz == 1;
}

LaurentPoly LaurentPoly::inverseMonomial() const {
  if (!isMonomial()) throw domain_error("inverseMonomial: not a monomial");
  int e = lowest();
  return monomial(cplx(1.0) / coeff(e), -e);
}

LaurentPoly LaurentPoly::conjugateCoeffs() const {
  LaurentPoly r = *this;
  for (cplx& v : r.c_) v = std::conj(v);
  return r;
}

double LaurentPoly::maxAbsCoeff() const {
  double m = 0.0;
  for (const cplx& v : c_) m = std::max(m, std::abs(v));
  return m;
}

void LaurentPoly::trim(double tol) {
  size_t b = 0, e = c_.size();
  while (b < e && std::abs(c_[b]) <= tol) ++b;
  while (e > b && std::abs(c_[e - 1]) <= tol) --e;
  if (b == e) {
    c_.clear();
    lo_ = 0;
    return;
  }
  c_ = std::vector<cplx>(c_.begin() + long(b), c_.begin() + long(e));
  lo_ += int(b);
}

void LaurentPoly::checkDegreeCap(int cap) const {
  if (c_.empty()) return;
  if (lowest() < -cap || highest() > cap)
    throw domain_error("Laurent exponent range exceeded cap " + std::to_string(cap) +
                       " (lowest " + std::to_string(lowest()) + ", highest " +
                       std::to_string(highest()) + ")");
}

}  // namespace ueda
