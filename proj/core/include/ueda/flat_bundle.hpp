#pragma once

#include <map>
#include <optional>
#include <random>

#include "ueda/angle.hpp"
#include "ueda/curve.hpp"
#include "ueda/report.hpp"

namespace ueda {

// Topologically trivial line bundle presented by constant transition values
// t_{jk}, one per overlap record (value for the stored orientation j -> k).
struct FlatCocycle {
  std::map<int, cplx> values;
  // exact holonomy angle (in turns) when the cocycle was built from one
  std::optional<ExactAngle> angle;

  cplx value(int recordId) const {
    auto it = values.find(recordId);
    return it == values.end() ? cplx(1.0) : it->second;
  }
};

struct NormalForm {
  std::map<int, cplx> tau;  // unitary transition per record, on the normalization
  std::map<int, cplx> a;    // scale per normalization chart id
};

FlatCocycle trivialCocycle(const Covering& cov);
// holonomy planted on the y-branch record entering node 0 (the last edge of
// the canonical cycle path), all other values 1
FlatCocycle cycleCocycle(const Covering& cov, cplx holonomy,
                         std::optional<ExactAngle> angle = std::nullopt);
// random U(1) values with a planted total holonomy (triple-consistent)
FlatCocycle randomUnitaryCocycle(const Covering& cov, cplx plantedHolonomy, std::mt19937_64& rng,
                                 std::optional<ExactAngle> angle = std::nullopt);
// coboundary move t'_{jk} = a_j t_{jk} / a_k
FlatCocycle coboundaryRescale(const Covering& cov, const FlatCocycle& L,
                              const std::map<int, cplx>& gauge);
FlatCocycle tensor(const FlatCocycle& a, const FlatCocycle& b);
FlatCocycle power(const FlatCocycle& L, long n);

// canonical cycle path: (recordId, direction), direction +1 when traversed
// j -> k; components visited in increasing id, each from its zeta=0 node
// chart to its zeta=inf node chart
std::vector<std::pair<int, int>> canonicalCyclePath(const Covering& cov);

// ordered product of transition values around the cycle (direction-signed)
cplx holonomy(const Covering& cov, const FlatCocycle& L);
// products around all independent nerve-graph cycles that are not triple
// boundaries have modulus 1
bool flatFlag(const Covering& cov, const FlatCocycle& L, double tol = 1e-9);

NormalForm normalForm(const Covering& cov, const FlatCocycle& L);

// number of edges the balanced representative spreads the holonomy over
int cycleEdgeBudget(const Covering& cov);
// inf over U(1) representatives of max_r |1 - t_r|
double distance(const Covering& cov, const FlatCocycle& L);
double powerDistance(const Covering& cov, const FlatCocycle& L, const mpz_class& n);

struct ClassifyParams {
  long depth = 10000;        // N
  long torsionBound = 1000;  // M
  double tol = 1e-12;
  double e1Slope = 1.5;
  double e1Intercept = 2.0;
  double fitMargin = 2.5;
  mpz_class scanCap = mpz_class("1000000000000000000000000000000");  // 1e30
};

struct BundleClassification {
  enum class Verdict { Torsion, E1, NotE1UpTo, NonFlat };
  Verdict verdict = Verdict::E1;
  long torsionOrder = 0;
  long depth = 0;
  double fitC1 = 0, fitC2 = 0, fitResidual = 0;
  mpz_class witness = 0;
  double witnessValue = 0;  // -log||n* theta||
  double witnessBound = 0;  // c1 + c2 log n* it violated
  double holonomyModulus = 1.0;
  ojson toJson() const;
};

BundleClassification classify(const Covering& cov, const FlatCocycle& L,
                              const ClassifyParams& params = {});

struct CohomologyDims {
  int h0Constant = 0;
  int h1Constant = 0;
  std::optional<int> h0Structure;  // only for all-rational configurations
  std::optional<int> h1Structure;
};

CohomologyDims cohomologyDims(const Covering& cov, const FlatCocycle& L, double tol = 1e-12);

ojson bundleToJson(const Covering& cov, const FlatCocycle& L);
FlatCocycle bundleFromJson(const Covering& cov, const ojson& j);

}  // namespace ueda
