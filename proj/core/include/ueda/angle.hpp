#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "ueda/scalar.hpp"

namespace ueda {

// Angle of a unit complex number, in full turns. Exact when the angle is a
// rational multiple of 2*pi.
struct ExactAngle {
  mpq_class turns;  // holonomy = exp(2 pi i * turns)

  static ExactAngle fromFraction(long p, long q);
  static ExactAngle fromRational(const mpq_class& t);

  ExactAngle times(long n) const;
  // reduced to [0,1)
  mpq_class normalized() const;
  // distance of n*turns to the nearest integer, as double (exact arithmetic,
  // rounded once at the end)
  double distToInt(const mpz_class& n) const;
  // torsion order if turns is rational p/q in lowest terms: q (order of the
  // root of unity)
  mpz_class torsionOrder() const;
  cplx unitValue() const;
};

// Continued fraction machinery over exact rationals / floating angles.
struct Convergent {
  mpz_class q;       // denominator q_k
  mpz_class qNext;   // q_{k+1} (0 if expansion terminated at q_k)
  double dist;       // || q * theta || distance of q*theta to nearest integer
};

// convergent denominators of theta in (0,1), stopping once q > cap or the
// expansion terminates
std::vector<Convergent> convergentDenominators(const mpq_class& theta, const mpz_class& cap);
std::vector<Convergent> convergentDenominators(double theta, const mpz_class& cap);

// continued fraction coefficients of a rational in [0,1)
std::vector<mpz_class> continuedFraction(const mpq_class& x, int maxTerms = 128);

double mpzLog(const mpz_class& n);

// truncated Liouville angle sum_{k=1..K} 10^{-k!}
mpq_class liouvilleTruncated(int K);

// golden ratio fractional part (sqrt(5)-1)/2 as a double (its continued
// fraction is all ones; used by float-angle paths and tests)
double goldenRatioAngle();

}  // namespace ueda
