#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace ueda {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

// Annulus rInner < |z| < rOuter in a chart coordinate. rInner == 0 gives a
// punctured disk, rOuter == inf a neighborhood of infinity's complement.
struct Annulus {
  double r_inner = 0.0;
  double r_outer = std::numeric_limits<double>::infinity();

  bool empty() const { return !(r_inner < r_outer); }
  bool contains(double r) const { return r_inner < r && r < r_outer; }
  Annulus intersect(const Annulus& o) const {
    return {std::max(r_inner, o.r_inner), std::min(r_outer, o.r_outer)};
  }
  bool unbounded() const {
    return r_inner == 0.0 || r_outer == std::numeric_limits<double>::infinity();
  }
};

// Exponent for fractional powers, kept exact as p/q.
struct RationalExp {
  long long num = 0;
  long long den = 1;
  double value() const { return double(num) / double(den); }
};

struct domain_error : std::runtime_error {
  explicit domain_error(const std::string& m) : std::runtime_error(m) {}
};

// exact integer power by squaring (std::pow on complex goes through exp/log)
inline cplx cpowInt(cplx b, long n) {
  bool inv = n < 0;
  unsigned long k = inv ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  cplx r = 1.0;
  while (k) {
    if (k & 1ul) r *= b;
    b *= b;
    k >>= 1ul;
  }
  return inv ? cplx(1.0) / r : r;
}

}  // namespace ueda
