#include "ueda/transition.hpp"

#include <algorithm>

#include "ueda/cech.hpp"
#include <deque>
#include <set>

namespace ueda {

namespace {

// factor L = gamma z^d (1 + p) with small p; picks the dominant exponent
void factorUnit(const LaurentPoly& L, const Annulus& ann, cplx& gamma, int& d, LaurentPoly& p) {
  if (L.isZero()) throw domain_error("factorUnit: zero coefficient");
  double best = -1.0;
  for (int e = L.lowest(); e <= L.highest(); ++e) {
    if (L.coeff(e) == cplx(0.0)) continue;
    LaurentPoly cand = L * LaurentPoly::monomial(cplx(1.0) / L.coeff(e), -e);
    cand -= LaurentPoly::constant(1.0);
    double score = cand.supNormBound(ann);
    if (best < 0 || score < best) {
      best = score;
      gamma = L.coeff(e);
      d = e;
      p = cand;
    }
  }
  if (best >= 0.99)
    throw domain_error("factorUnit: coefficient is not unit-like on its annulus");
}

// 1/L as a truncated Laurent series; exact when L is a monomial
LaurentPoly laurentReciprocal(const LaurentPoly& L, const Annulus& ann) {
  cplx gamma;
  int d;
  LaurentPoly p;
  factorUnit(L, ann, gamma, d, p);
  LaurentPoly inv = LaurentPoly::monomial(cplx(1.0) / gamma, -d);
  if (p.isZero()) return inv;
  LaurentPoly series = LaurentPoly::constant(1.0);
  LaurentPoly term = LaurentPoly::constant(1.0);
  for (int k = 1; k <= 48; ++k) {
    term = term * (p * cplx(-1.0));
    term.trim(1e-17 * (1.0 + term.maxAbsCoeff()));
    term.checkDegreeCap();
    series += term;
    if (term.supNormBound(ann) < 1e-17) break;
  }
  return inv * series;
}

LaurentPoly logOnePlus(const LaurentPoly& p, const Annulus& ann) {
  LaurentPoly acc;
  LaurentPoly term = LaurentPoly::constant(1.0);
  for (int k = 1; k <= 48; ++k) {
    term = term * p;
    LaurentPoly contrib = term * cplx(std::pow(-1.0, k + 1) / double(k));
    acc += contrib;
    if (contrib.supNormBound(ann) < 1e-17) break;
    term.checkDegreeCap();
  }
  return acc;
}

LaurentPoly expSeries(const LaurentPoly& f, const Annulus& ann) {
  LaurentPoly acc = LaurentPoly::constant(1.0);
  LaurentPoly term = LaurentPoly::constant(1.0);
  for (int k = 1; k <= 48; ++k) {
    term = term * f;
    term = term * cplx(1.0 / double(k));
    acc += term;
    if (term.supNormBound(ann) < 1e-17) break;
    term.checkDegreeCap();
  }
  return acc;
}

// L(phiJet) where phiJet has an invertible w^0 coefficient
WJet composeLaurentOverJet(const LaurentPoly& L, const WJet& phiJet) {
  cplx gamma;
  int d;
  WJet u = relativeRemainder(phiJet, gamma, d);
  return laurentCompose(L, gamma, d, u);
}

// T(phiJet) for Taylor T (exponents >= 0) and phiJet with zero w^0 term
WJet taylorComposeJet(const LaurentPoly& T, const WJet& phiJet) {
  if (T.lowest() < 0 && !T.isZero())
    throw domain_error("taylorComposeJet: negative exponents");
  WJet out(phiJet.order(), phiJet.annulus());
  out.setCoeff(0, LaurentPoly::constant(T.coeff(0)));
  WJet pw = phiJet;
  for (int e = 1; e <= T.highest(); ++e) {
    if (T.coeff(e) != cplx(0.0)) out += pw * T.coeff(e);
    if (e < T.highest()) pw = pw * phiJet;
  }
  return out;
}

WJet jetReciprocal(const WJet& J, const Annulus& ann) {
  LaurentPoly c0 = J.coeff(0);
  LaurentPoly inv0 = laurentReciprocal(c0, ann);
  // J * inv0 = 1 + v with v = O(w) up to the truncation error of inv0
  WJet v = J * inv0;
  // the w^0 part is 1 up to the reciprocal's truncation error; drop it
  v.setCoeff(0, LaurentPoly());
  WJet onePlus = v;
  onePlus.setCoeff(0, LaurentPoly::constant(1.0));
  return onePlus.fractionalPower(RationalExp{-1, 1}) * inv0;
}

}  // namespace

WJet substituteInto(const WJet& F, const WJet& zkJet, const WJet& wkJet) {
  if (!wkJet.coeff(0).isZero(0.0))
    throw domain_error("substituteInto: defining jet must vanish on the curve");
  int M = std::min({F.order(), zkJet.order(), wkJet.order()});
  Annulus ann = zkJet.annulus().intersect(wkJet.annulus());
  WJet out(M, ann);
  bool zkUnit = !zkJet.coeff(0).isZero();
  cplx gamma = 0;
  int d = 0;
  WJet u(M, ann);
  if (zkUnit) u = relativeRemainder(zkJet, gamma, d);
  WJet wpow(M, ann);
  wpow.setCoeff(0, LaurentPoly::constant(1.0));
  for (int m = 0; m <= M; ++m) {
    const LaurentPoly& cm = F.coeff(m);
    if (!cm.isZero()) {
      WJet cOf = zkUnit ? laurentCompose(cm, gamma, d, u.truncated(M))
                        : taylorComposeJet(cm, zkJet.truncated(M));
      out += cOf * wpow;
    }
    if (m < M) wpow = wpow * wkJet;
  }
  return out;
}

double jetSupNorm(const WJet& j, const Annulus& a, double wRadius) {
  double s = 0.0, wp = 1.0;
  for (int m = 0; m <= j.order(); ++m) {
    s += j.coeff(m).supNormBound(a) * wp;
    wp *= wRadius;
  }
  return s;
}

LaurentPoly TransitionSystem::expandCoeff(int recordId, int m) const {
  if (m > wOrder)
    throw domain_error("expand: order " + std::to_string(m) + " beyond stored truncation");
  const RecordJets& rj = jets.at(recordId);
  return rj.defining.coeff(m) * t.value(recordId);
}

std::vector<LaurentPoly> TransitionSystem::expand(int recordId, int M) const {
  std::vector<LaurentPoly> out;
  for (int m = 2; m <= M; ++m) out.push_back(expandCoeff(recordId, m));
  return out;
}

double TransitionSystem::orderResidual(int n) const {
  double worst = 0.0;
  for (const auto& r : cov.nerve)
    for (int m = 2; m <= std::min(n, wOrder); ++m)
      worst = std::max(worst, expandCoeff(r.id, m).supNormBound(r.annulus));
  return worst;
}

double TransitionSystem::tripleConsistencyResidual(int throughOrder) const {
  double worst = 0.0;
  for (const auto& tri : cov.triples) {
    const OverlapRec& rjk = cov.overlap(tri.rec_jk);
    const RecordJets& ab = jets.at(tri.rec_jk);
    const RecordJets& ak = jets.at(tri.rec_jl);
    const RecordJets& bk = jets.at(tri.rec_kl);
    const ChartRec& target = cov.chart(cov.overlap(tri.rec_jl).k);
    (void)rjk;
    auto diffNorm = [&](const WJet& a, const WJet& b) {
      WJet d = a.truncated(throughOrder) - b.truncated(throughOrder);
      return jetSupNorm(d, tri.annulus, 0.0) + d.maxAbsCoeff() * 0.0;
    };
    WJet firstVia = substituteInto(bk.first, ab.first, ab.defining);
    double r1 = 0.0;
    r1 = std::max(r1, diffNorm(firstVia, ak.first));
    if (target.kind == ChartKind::NodeChart) {
      WJet secondVia = substituteInto(bk.second, ab.first, ab.defining);
      r1 = std::max(r1, diffNorm(secondVia, ak.second));
    }
    WJet defVia = substituteInto(bk.defining, ab.first, ab.defining);
    r1 = std::max(r1, diffNorm(defVia, ak.defining));
    worst = std::max(worst, r1);
  }
  return worst;
}

TransitionSystem productModel(const Covering& cov, const FlatCocycle& t, int wOrder) {
  TransitionSystem sys;
  sys.cov = cov;
  sys.t = t;
  sys.wOrder = wOrder;
  for (const auto& r : cov.nerve) {
    cplx ti = cplx(1.0) / t.value(r.id);
    RecordJets rj;
    const ChartRec& ck = cov.chart(r.k);
    WJet base(wOrder, r.annulus);
    base.setCoeff(0, LaurentPoly::monomial(r.scale, r.eps));
    WJet w(wOrder, r.annulus);
    w.setCoeff(1, LaurentPoly::constant(ti));
    if (ck.kind == ChartKind::SmoothDisk) {
      rj.first = base;
      rj.second = WJet(wOrder, r.annulus);
      rj.defining = w;
    } else {
      // the branch coordinate is along the curve, the other one carries w
      WJet other(wOrder, r.annulus);
      other.setCoeff(1, LaurentPoly::monomial(ti / r.scale, -r.eps));
      if (r.branch == NodeBranch::X) {
        rj.first = base;
        rj.second = other;
      } else {
        rj.first = other;
        rj.second = base;
      }
      rj.defining = w;
    }
    sys.jets[r.id] = rj;
  }
  return sys;
}

int defaultPlantRecord(const Covering& cov) {
  for (const auto& r : cov.nerve) {
    const ChartRec& ck = cov.chart(r.k);
    if (ck.kind != ChartKind::NodeChart || r.branch != NodeBranch::X) continue;
    bool inTriple = false;
    for (const auto& tri : cov.triples)
      if (tri.rec_jk == r.id || tri.rec_jl == r.id || tri.rec_kl == r.id) inTriple = true;
    if (!inTriple) return r.id;
  }
  throw domain_error("no plant-safe record in covering");
}

void plantDefect(TransitionSystem& sys, int recordId, const LaurentPoly& d, int order) {
  if (order + 1 > sys.wOrder) throw domain_error("plantDefect: order beyond truncation");
  for (const auto& tri : sys.cov.triples)
    if (tri.rec_jk == recordId || tri.rec_jl == recordId || tri.rec_kl == recordId)
      throw domain_error("plantDefect: record participates in a nerve 2-cell");
  const OverlapRec& r = sys.cov.overlap(recordId);
  RecordJets& rj = sys.jets.at(recordId);
  cplx ti = cplx(1.0) / sys.t.value(recordId);
  WJet delta(sys.wOrder, r.annulus);
  delta.setCoeff(order + 1, d * ti);
  rj.defining += delta;
  const ChartRec& ck = sys.cov.chart(r.k);
  if (ck.kind == ChartKind::NodeChart) {
    // keep defining = x * y: recompute the coordinate that carries w
    if (r.branch == NodeBranch::X)
      rj.second = rj.defining * jetReciprocal(rj.first, r.annulus);
    else
      rj.first = rj.defining * jetReciprocal(rj.second, r.annulus);
  }
}

void applyGauge(TransitionSystem& sys, const std::map<int, WJet>& gaugePerChart) {
  for (const auto& [cid, g] : gaugePerChart) {
    if (sys.cov.chart(cid).kind != ChartKind::SmoothDisk)
      throw domain_error("applyGauge: gauges only on smooth charts");
    if (!g.coeff(0).isZero() || (g.coeff(1) - LaurentPoly::constant(1.0)).maxAbsCoeff() > 0)
      throw domain_error("applyGauge: gauge must be w + O(w^2)");
  }
  for (const auto& r : sys.cov.nerve) {
    RecordJets& rj = sys.jets.at(r.id);
    auto itj = gaugePerChart.find(r.j);
    if (itj != gaugePerChart.end()) {
      // new source transverse coordinate w' = g(w); old w = g^{-1}(w')
      WJet inv = itj->second.truncated(sys.wOrder).reversion();
      rj.first = rj.first.compose(inv);
      if (rj.second.order() > 0) rj.second = rj.second.compose(inv);
      rj.defining = rj.defining.compose(inv);
    }
    auto itk = gaugePerChart.find(r.k);
    if (itk != gaugePerChart.end()) {
      rj.defining = substituteInto(itk->second.truncated(sys.wOrder), rj.first, rj.defining);
    }
  }
}

TransitionSystem randomOrderNSystem(const Covering& cov, const FlatCocycle& t, int n, int wOrder,
                                    std::mt19937_64& rng, double amplitude) {
  TransitionSystem sys = productModel(cov, t, wOrder);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  auto rc = [&]() { return cplx(uni(rng), uni(rng)) * amplitude; };
  for (const auto& r : cov.nerve) {
    const ChartRec& ck = cov.chart(r.k);
    if (ck.kind != ChartKind::NodeChart || r.branch != NodeBranch::X) continue;
    bool inTriple = false;
    for (const auto& tri : cov.triples)
      if (tri.rec_jk == r.id || tri.rec_jl == r.id || tri.rec_kl == r.id) inTriple = true;
    if (inTriple) continue;
    LaurentPoly d;
    d.setCoeff(-1, rc());
    d.setCoeff(0, rc());
    d.setCoeff(1, rc());
    if (n + 1 <= wOrder) plantDefect(sys, r.id, d, n);
  }
  std::map<int, WJet> gauges;
  for (const auto& c : cov.charts) {
    if (c.kind != ChartKind::SmoothDisk) continue;
    WJet g = WJet::identity(wOrder, c.domain);
    for (int m = n + 1; m <= std::min(n + 2, wOrder); ++m) {
      LaurentPoly gm;
      gm.setCoeff(-1, rc());
      gm.setCoeff(0, rc());
      gm.setCoeff(1, rc());
      g.setCoeff(m, gm);
    }
    gauges[c.id] = g;
  }
  applyGauge(sys, gauges);
  return sys;
}

TransitionSystem rescaleDefining(const TransitionSystem& sys,
                                 const std::map<int, LaurentPoly>& smoothUnits,
                                 const std::map<int, cplx>& nodeConstUnits,
                                 const std::map<int, LaurentPoly>& nodeUnitX,
                                 const std::map<int, LaurentPoly>& nodeUnitY) {
  TransitionSystem out = sys;
  auto unitOf = [&](int cid) {
    auto it = smoothUnits.find(cid);
    return it == smoothUnits.end() ? LaurentPoly::constant(1.0) : it->second;
  };
  for (const auto& r : sys.cov.nerve) {
    RecordJets& rj = out.jets.at(r.id);
    const ChartRec& ck = sys.cov.chart(r.k);
    // source: w_j = E_j(z_j) w'_j
    LaurentPoly Ej = unitOf(r.j);
    if (!(Ej - LaurentPoly::constant(1.0)).isZero()) {
      WJet inner(sys.wOrder, r.annulus);
      inner.setCoeff(1, Ej);
      rj.first = rj.first.compose(inner);
      if (rj.second.order() > 0) rj.second = rj.second.compose(inner);
      rj.defining = rj.defining.compose(inner);
    }
    if (ck.kind == ChartKind::SmoothDisk) {
      LaurentPoly Ek = unitOf(r.k);
      if (!(Ek - LaurentPoly::constant(1.0)).isZero()) {
        WJet scale = composeLaurentOverJet(Ek, rj.first);
        rj.defining = rj.defining * jetReciprocal(scale, r.annulus);
      }
    } else {
      cplx q = nodeConstUnits.count(r.k) ? nodeConstUnits.at(r.k) : cplx(1.0);
      LaurentPoly Ux = nodeUnitX.count(r.k) ? nodeUnitX.at(r.k) : LaurentPoly();
      LaurentPoly Uy = nodeUnitY.count(r.k) ? nodeUnitY.at(r.k) : LaurentPoly();
      // split E_K = q (1 + Ux(x)) (1 + Uy(y)); x' = x / (q (1+Ux)), y' = y / (1+Uy)
      auto unitJet = [&](const LaurentPoly& U, const WJet& coord) {
        LaurentPoly one = LaurentPoly::constant(1.0);
        LaurentPoly full = one + U;
        if (U.isZero()) return WJet::fromConstantJet({1.0}, r.annulus).truncated(sys.wOrder);
        if (!coord.coeff(0).isZero()) return composeLaurentOverJet(full, coord);
        return taylorComposeJet(full, coord);
      };
      WJet sx = unitJet(Ux, rj.first) * q;
      WJet sy = unitJet(Uy, rj.second);
      rj.first = rj.first * jetReciprocal(sx, r.annulus);
      rj.second = rj.second * jetReciprocal(sy, r.annulus);
      rj.defining = rj.first * rj.second;
    }
  }
  return out;
}

TransitionSystem normalizeOrder1(const TransitionSystem& raw, double tol) {
  // factor every linear coefficient as gamma z^m (1 + p)
  struct Fact {
    cplx gamma;
    int m;
    LaurentPoly p;
  };
  std::map<int, Fact> facts;
  for (const auto& r : raw.cov.nerve) {
    LaurentPoly c1 = raw.jets.at(r.id).defining.coeff(1);
    if (c1.isZero()) throw domain_error("normalizeOrder1: vanishing linear coefficient");
    Fact f;
    factorUnit(c1, r.annulus, f.gamma, f.m, f.p);
    facts[r.id] = f;
  }
  // integer flow mu_j on smooth charts (node charts carry no monomial unit):
  // m_r + mu_j - eps mu_k = 0
  std::map<int, int> mu;
  for (const auto& c : raw.cov.charts)
    if (c.kind == ChartKind::NodeChart) mu[c.id] = 0;
  std::map<int, std::vector<std::tuple<int, int, int, int>>> adj;  // chart -> (rec, other, eps, m) as seen from chart
  for (const auto& r : raw.cov.nerve) {
    adj[r.j].emplace_back(r.id, r.k, r.eps, facts[r.id].m);
    adj[r.k].emplace_back(r.id, r.j, r.eps, facts[r.id].m);
  }
  std::deque<int> q;
  std::set<int> seen;
  for (const auto& c : raw.cov.charts)
    if (c.kind == ChartKind::NodeChart) {
      q.push_back(c.id);
      seen.insert(c.id);
    }
  if (q.empty()) {
    int first = raw.cov.charts.front().id;
    mu[first] = 0;
    q.push_back(first);
    seen.insert(first);
  }
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (auto [rid, v, eps, m] : adj[u]) {
      const OverlapRec& r = raw.cov.overlap(rid);
      int need;
      if (r.j == u)  // know mu_j, solve mu_k = eps (m + mu_j)
        need = eps * (m + mu[u]);
      else  // know mu_k, solve mu_j = eps mu_k - m
        need = eps * mu[u] - m;
      if (seen.count(v)) {
        if (mu[v] != need)
          throw domain_error("normalizeOrder1: winding obstruction (normal bundle has nonzero degree)");
      } else {
        mu[v] = need;
        seen.insert(v);
        q.push_back(v);
      }
    }
  }
  for (const auto& c : raw.cov.charts)
    if (c.kind == ChartKind::NodeChart && mu[c.id] != 0)
      throw domain_error("normalizeOrder1: node chart would need a winding unit");

  // after the monomial rescale the leftover unit parts solve an additive
  // Cech problem in log space, blocks e >= 1 only
  std::map<int, LaurentPoly> rhs;
  bool anyUnit = false;
  for (const auto& r : raw.cov.nerve) {
    LaurentPoly l = logOnePlus(facts[r.id].p, r.annulus);
    l.setCoeff(0, 0.0);  // constants stay in t_r
    rhs[r.id] = l * cplx(-1.0);
    if (!l.isZero(1e-15)) anyUnit = true;
  }
  CechCochain F;
  if (anyUnit) {
    std::map<int, cplx> unitTwist;
    for (const auto& r : raw.cov.nerve) unitTwist[r.id] = 1.0;
    CechSolveResult sol = CechSystem(raw.cov, unitTwist).solve(rhs);
    if (!sol.solved(1e-8))
      throw domain_error("normalizeOrder1: unit parts are not a coboundary");
    F = sol.cochain;
  }

  std::map<int, LaurentPoly> smoothUnits;
  std::map<int, cplx> nodeConstUnits;
  std::map<int, LaurentPoly> nodeUnitX, nodeUnitY;
  for (const auto& c : raw.cov.charts) {
    if (c.kind == ChartKind::SmoothDisk) {
      LaurentPoly f = F.smooth.count(c.id) ? F.smooth.at(c.id) : LaurentPoly();
      f.setCoeff(0, 0.0);
      LaurentPoly unit = expSeries(f, c.domain) * LaurentPoly::monomial(1.0, mu[c.id]);
      smoothUnits[c.id] = unit;
    } else {
      LaurentPoly gx = F.nodeGx.count(c.id) ? F.nodeGx.at(c.id) : LaurentPoly();
      LaurentPoly gy = F.nodeGy.count(c.id) ? F.nodeGy.at(c.id) : LaurentPoly();
      nodeConstUnits[c.id] = 1.0;
      nodeUnitX[c.id] = expSeries(gx, {0.0, c.xRadius}) - LaurentPoly::constant(1.0);
      nodeUnitY[c.id] = expSeries(gy, {0.0, c.yRadius}) - LaurentPoly::constant(1.0);
    }
  }
  TransitionSystem out = rescaleDefining(raw, smoothUnits, nodeConstUnits, nodeUnitX, nodeUnitY);
  // read off the constants t_r and normalize the stored cocycle
  for (const auto& r : out.cov.nerve) {
    LaurentPoly c1 = out.jets.at(r.id).defining.coeff(1);
    cplx gamma;
    int m;
    LaurentPoly p;
    factorUnit(c1, r.annulus, gamma, m, p);
    if (m != 0 || p.supNormBound(r.annulus) > tol * 10 + 1e-9)
      throw domain_error("normalizeOrder1: linear coefficient failed to normalize");
    out.t.values[r.id] = cplx(1.0) / gamma;
    out.t.angle = std::nullopt;
  }
  return out;
}

TransitionSystem refineSystem(const TransitionSystem& sys, int chartId) {
  std::pair<int, int> newIds;
  Covering refined = refineSmoothChart(sys.cov, chartId, &newIds);
  TransitionSystem out;
  out.cov = refined;
  out.wOrder = sys.wOrder;
  out.t = sys.t;
  for (const auto& r : refined.nerve) {
    if (sys.jets.count(r.id)) {
      out.jets[r.id] = sys.jets.at(r.id);
    } else {
      // the seam record: identical coordinates on both halves
      RecordJets rj;
      rj.first = WJet(sys.wOrder, r.annulus);
      rj.first.setCoeff(0, LaurentPoly::monomial(1.0, 1));
      rj.second = WJet(sys.wOrder, r.annulus);
      rj.defining = WJet::identity(sys.wOrder, r.annulus);
      out.jets[r.id] = rj;
      out.t.values[r.id] = 1.0;
    }
  }
  return out;
}

}  // namespace ueda
