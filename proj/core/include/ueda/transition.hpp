#pragma once

#include <map>
#include <random>

#include "ueda/flat_bundle.hpp"
#include "ueda/wjet.hpp"

namespace ueda {

// Gluing data of one overlap record: the target chart's coordinates as jets
// of the source chart's (z_j, w_j). For smooth targets `first` is z_k and
// `defining` is w_k; for node targets `first`/`second` are the (x_k, y_k)
// pair and `defining` is the current defining function of chart k.
struct RecordJets {
  WJet first;
  WJet second;    // node targets only
  WJet defining;  // vanishes on the curve: zero constant term
};

// Chart-gluing data of a neighborhood germ, order-1 normalized:
// t_r * defining_k = w_j + O(w_j^2) on every record.
struct TransitionSystem {
  Covering cov;
  FlatCocycle t;
  int wOrder = 12;
  std::map<int, RecordJets> jets;

  // f^{kj}_m(z_j) = t_r [w_j^m] (defining jet of record r)
  LaurentPoly expandCoeff(int recordId, int m) const;
  // all coefficients m = 2..M (throws if M exceeds the stored truncation)
  std::vector<LaurentPoly> expand(int recordId, int M) const;
  // largest residual max_{2<=m<=n} sup-norm of f_m over records
  double orderResidual(int n) const;
  // composing transitions around each nerve 2-cell returns the identity to
  // the given order; returns the worst residual
  double tripleConsistencyResidual(int throughOrder) const;
};

// F(z_k, w_k) = sum c_m(z_k) w_k^m pushed through (z_k, w_k) = (zk, wk) jets
WJet substituteInto(const WJet& F, const WJet& zkJet, const WJet& wkJet);

// sup-norm bound of a jet over {annulus} x {|w| <= wRadius}
double jetSupNorm(const WJet& j, const Annulus& a, double wRadius);

// The linearized product-type germ of a triple-consistent flat cocycle:
// every record glues by w_k = t_r^{-1} w_j exactly (all f_m vanish).
TransitionSystem productModel(const Covering& cov, const FlatCocycle& t, int wOrder = 12);

// Replace one record's transverse gluing by
//   t_r w_k = w_j + d(z_j) w_j^{order+1} + (existing higher terms),
// planting the expansion coefficient f_{order+1} = d. The record must not
// participate in any nerve 2-cell.
void plantDefect(TransitionSystem& sys, int recordId, const LaurentPoly& d, int order);

// id of the record carrying the plant in canonical builders: the x-branch
// record of component 0's zero-end node chart
int defaultPlantRecord(const Covering& cov);

// Reparametrize defining functions by w_j -> w_j + sum_{m >= fromOrder}
// g_{j,m}(z_j) w_j^m on smooth charts (a gauge move preserving order
// fromOrder-1). Gauges are given per chart id.
void applyGauge(TransitionSystem& sys, const std::map<int, WJet>& gaugePerChart);

// random order-n system on the covering: product model + random plants of
// order n on plant-safe records + random gauges above order n
TransitionSystem randomOrderNSystem(const Covering& cov, const FlatCocycle& t, int n, int wOrder,
                                    std::mt19937_64& rng, double amplitude = 0.5);

// Order-1 normalization of a raw system whose linear coefficients are
// nowhere-vanishing units (monomial times small perturbation). Rescales the
// defining functions chartwise, records the constants t_r, and returns the
// normalized system. Throws when the linear coefficients wind (nonzero
// degree) or are not unit-like.
TransitionSystem normalizeOrder1(const TransitionSystem& raw, double tol = 1e-12);

// chartwise rescale w_j -> w_j / E_j with E given in Cech split form (unit
// Laurent per smooth chart, exp(C)·exp(G+)·exp(G-) per node chart)
TransitionSystem rescaleDefining(const TransitionSystem& sys,
                                 const std::map<int, LaurentPoly>& smoothUnits,
                                 const std::map<int, cplx>& nodeConstUnits,
                                 const std::map<int, LaurentPoly>& nodeUnitX,
                                 const std::map<int, LaurentPoly>& nodeUnitY);

// refined-covering version of a system (smooth chart split in two): jets are
// inherited on the clipped records, the new seam record glues identically
TransitionSystem refineSystem(const TransitionSystem& sys, int chartId);

}  // namespace ueda
