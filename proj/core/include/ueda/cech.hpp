#pragma once

#include <map>

#include "ueda/curve.hpp"
#include "ueda/laurent.hpp"

namespace ueda {

// 0-cochain with values in a constantly-twisted sheaf: a Laurent polynomial
// per smooth chart, and the split form C + G+(x) + G-(y) per node chart
// (G+-, G- have no constant term).
struct CechCochain {
  std::map<int, LaurentPoly> smooth;
  std::map<int, cplx> nodeConst;
  std::map<int, LaurentPoly> nodeGx;
  std::map<int, LaurentPoly> nodeGy;

  double supNorm(const Covering& cov) const;
};

struct CechSolveResult {
  CechCochain cochain;
  double residual = 0.0;     // l2 norm of unmatched coefficients
  double rhsNorm = 0.0;      // l2 norm of rhs coefficients
  double cochainNorm = 0.0;  // sup-norm bound over charts
  int kernelDim = 0;         // kernel dimension across blocks
  bool pinned = false;       // gauge pin applied in the e = 0 block
  bool solved(double tol) const { return residual <= tol * std::max(1.0, rhsNorm); }
};

struct CechOptions {
  int maxExp = LaurentPoly::kMaxDegree;
  double svdTol = 1e-10;
  int pinChart = -1;  // -1: lowest smooth chart id
};

// Coefficient-matching solver for F_j - lambda_r F_k(transport) = rhs_r over
// a covering with monomial base transitions. The problem splits into
// independent exponent blocks {e, -e}; each is solved in least squares with
// the minimal-norm solution, so results are reproducible.
class CechSystem {
 public:
  CechSystem(const Covering& cov, std::map<int, cplx> twist);

  CechSolveResult solve(const std::map<int, LaurentPoly>& rhs, const CechOptions& opts = {}) const;

  // delta F per record: F_j - lambda_r F_k(transport), restricted to the curve
  std::map<int, LaurentPoly> coboundary(const CechCochain& F) const;

  // (h0, h1) of the twisted sheaf of holomorphic sections, brute-force ranks
  // on the truncated complex (delta^1 rows from the covering's triples)
  std::pair<int, int> bruteCohomology(int maxExp = 8, double rankTol = 1e-8) const;
  // per-exponent-block (h0, h1), for checking that high blocks are exact
  std::pair<int, int> bruteCohomologyBlock(int e, double rankTol = 1e-8) const;
  // same for the sheaf of constant sections (block e = 0 with constants only)
  std::pair<int, int> bruteConstantCohomology(double rankTol = 1e-8) const;

  const Covering& covering() const { return cov_; }
  cplx twistOf(int recordId) const { return twist_.at(recordId); }

 private:
  struct Block;
  Block assembleBlock(int e, const std::map<int, LaurentPoly>* rhs) const;
  const Covering& cov_;
  std::map<int, cplx> twist_;
};

// transported restriction of a cochain to a record's overlap, as a Laurent
// polynomial in the base coordinate z_j
LaurentPoly restrictToRecord(const Covering& cov, const CechCochain& F, const OverlapRec& r,
                             bool kSide);

}  // namespace ueda
