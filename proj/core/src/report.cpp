#include "ueda/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>

namespace ueda {

std::string fmtReal(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parseReal(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

ojson jsonComplex(cplx v) {
  return ojson{{"re", fmtReal(v.real())}, {"im", fmtReal(v.imag())}};
}

cplx complexFromJson(const ojson& j) {
  return {parseReal(j.at("re").get<std::string>()), parseReal(j.at("im").get<std::string>())};
}

ojson jsonAnnulus(const Annulus& a) {
  return ojson{{"rInner", fmtReal(a.r_inner)}, {"rOuter", fmtReal(a.r_outer)}};
}

Annulus annulusFromJson(const ojson& j) {
  return {parseReal(j.at("rInner").get<std::string>()),
          parseReal(j.at("rOuter").get<std::string>())};
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hexDigest(const std::string& data) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a(data));
  return buf;
}

ojson reproHeader(const std::string& command, const std::string& inputDigest,
                  std::uint64_t seed, double tol, const std::string& precision) {
  ojson h;
  h["tool"] = "uedak";
  h["version"] = "0.1.0";
  h["command"] = command;
  h["inputDigest"] = inputDigest;
  h["seed"] = std::to_string(seed);
  h["tol"] = fmtReal(tol);
  h["precision"] = precision;
  return h;
}

}  // namespace ueda
