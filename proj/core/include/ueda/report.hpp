#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "ueda/scalar.hpp"

namespace ueda {

using ojson = nlohmann::ordered_json;

// Numbers in reports are decimal strings with up to 17 significant digits so
// that serialize/parse round-trips bit-exactly and output is byte-stable.
std::string fmtReal(double x);
double parseReal(const std::string& s);
ojson jsonComplex(cplx v);
cplx complexFromJson(const ojson& j);
ojson jsonAnnulus(const Annulus& a);
Annulus annulusFromJson(const ojson& j);

// FNV-1a over the canonical serialization; used for input digests.
std::uint64_t fnv1a(const std::string& data);
std::string hexDigest(const std::string& data);

// reproducibility header attached to every CLI report
ojson reproHeader(const std::string& command, const std::string& inputDigest,
                  std::uint64_t seed, double tol, const std::string& precision);

}  // namespace ueda
