#include "ueda/angle.hpp"

#include <cmath>

namespace ueda {

ExactAngle ExactAngle::fromFraction(long p, long q) {
  if (q == 0) throw domain_error("angle with zero denominator");
  mpq_class t(p, q);
  t.canonicalize();
  return {t};
}

ExactAngle ExactAngle::fromRational(const mpq_class& t) {
  mpq_class c = t;
  c.canonicalize();
  return {c};
}

ExactAngle ExactAngle::times(long n) const { return {mpq_class(turns * n)}; }

mpq_class ExactAngle::normalized() const {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), turns.get_num().get_mpz_t(), turns.get_den().get_mpz_t());
  mpq_class r = turns - mpq_class(fl);
  r.canonicalize();
  return r;
}

double ExactAngle::distToInt(const mpz_class& n) const {
  mpq_class nx = turns * mpq_class(n);
  mpz_class num = nx.get_num(), den = nx.get_den();
  mpz_class rem;
  mpz_fdiv_r(rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());  // 0 <= rem < den
  mpq_class frac(rem, den);
  frac.canonicalize();
  mpq_class d = frac <= mpq_class(1, 2) ? frac : mpq_class(1) - frac;
  return d.get_d();
}

mpz_class ExactAngle::torsionOrder() const {
  mpq_class t = normalized();
  return t.get_den();
}

cplx ExactAngle::unitValue() const {
  double t = mpq_class(normalized()).get_d();
  return std::polar(1.0, 2.0 * kPi * t);
}

std::vector<mpz_class> continuedFraction(const mpq_class& x, int maxTerms) {
  // x in [0,1); returns a_1, a_2, ... with x = 1/(a_1 + 1/(a_2 + ...))
  if (x < 0 || x >= 1) throw domain_error("continuedFraction: x must be in [0,1)");
  std::vector<mpz_class> a;
  mpz_class p = x.get_num(), q = x.get_den();
  for (int i = 0; i < maxTerms && p != 0; ++i) {
    mpz_class ai, r;
    mpz_fdiv_qr(ai.get_mpz_t(), r.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    a.push_back(ai);
    q = p;
    p = r;
  }
  return a;
}

std::vector<Convergent> convergentDenominators(const mpq_class& theta, const mpz_class& cap) {
  std::vector<Convergent> out;
  mpq_class x = theta;
  // CF by the Euclidean algorithm on (num, den)
  mpz_class num = x.get_num(), den = x.get_den();
  if (num < 0 || num >= den) throw domain_error("convergentDenominators: theta must be in [0,1)");
  if (num == 0) return out;
  mpz_class p = num, q = den;
  std::vector<mpz_class> denoms;
  mpz_class q_prev = 1, q_prevprev = 0;
  while (p != 0) {
    // a = floor(q / p), remainder r = q - a p ; next (p,q) = (r, p)
    mpz_class a, r;
    mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    mpz_class qk_new = a * q_prev + q_prevprev;
    denoms.push_back(qk_new);
    q_prevprev = q_prev;
    q_prev = qk_new;
    q = p;
    p = r;
    if (qk_new > cap) break;
  }
  ExactAngle ang{theta};
  for (size_t i = 0; i < denoms.size(); ++i) {
    Convergent c;
    c.q = denoms[i];
    c.qNext = (i + 1 < denoms.size()) ? denoms[i + 1] : mpz_class(0);
    c.dist = ang.distToInt(denoms[i]);
    out.push_back(c);
  }
  return out;
}

std::vector<Convergent> convergentDenominators(double theta, const mpz_class& cap) {
  if (!(theta >= 0.0 && theta < 1.0))
    throw domain_error("convergentDenominators: theta must be in [0,1)");
  // doubles are rationals with denominator 2^k; the exact CF of that rational
  // is meaningful up to denominators ~ 1/ulp
  mpq_class x(theta);
  x.canonicalize();
  mpz_class effCap = cap;
  mpz_class ulpCap("100000000000000");  // 1e14: beyond this the float carries no information
  if (effCap > ulpCap) effCap = ulpCap;
  return convergentDenominators(x, effCap);
}

double mpzLog(const mpz_class& n) {
  if (n <= 0) throw domain_error("mpzLog: nonpositive");
  signed long exp10;
  double d = mpz_get_d_2exp(&exp10, n.get_mpz_t());
  return std::log(d) + double(exp10) * std::log(2.0);
}

mpq_class liouvilleTruncated(int K) {
  mpq_class s = 0;
  long fact = 1;
  for (int k = 1; k <= K; ++k) {
    fact *= k;
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10u, static_cast<unsigned long>(fact));
    s += mpq_class(mpz_class(1), den);
  }
  s.canonicalize();
  return s;
}

double goldenRatioAngle() { return (std::sqrt(5.0) - 1.0) / 2.0; }

}  // namespace ueda
