#include "ueda/cech.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <set>

namespace ueda {

double CechCochain::supNorm(const Covering& cov) const {
  double m = 0.0;
  for (const auto& [cid, F] : smooth) m = std::max(m, F.supNormBound(cov.chart(cid).domain));
  for (const auto& [cid, C] : nodeConst) {
    const ChartRec& c = cov.chart(cid);
    double v = std::abs(C);
    auto itx = nodeGx.find(cid);
    if (itx != nodeGx.end()) v += itx->second.supNormBound({0.0, c.xRadius});
    auto ity = nodeGy.find(cid);
    if (ity != nodeGy.end()) v += ity->second.supNormBound({0.0, c.yRadius});
    m = std::max(m, v);
  }
  return m;
}

LaurentPoly restrictToRecord(const Covering& cov, const CechCochain& F, const OverlapRec& r,
                             bool kSide) {
  int cid = kSide ? r.k : r.j;
  const ChartRec& c = cov.chart(cid);
  if (c.kind == ChartKind::SmoothDisk) {
    LaurentPoly f;
    auto it = F.smooth.find(cid);
    if (it != F.smooth.end()) f = it->second;
    if (!kSide) return f;
    return f.substMonomial(r.scale, r.eps);
  }
  if (!kSide) throw domain_error("restrictToRecord: node chart cannot be the base side");
  cplx C = F.nodeConst.count(cid) ? F.nodeConst.at(cid) : cplx(0.0);
  LaurentPoly out = LaurentPoly::constant(C);
  const std::map<int, LaurentPoly>& g = r.branch == NodeBranch::X ? F.nodeGx : F.nodeGy;
  auto it = g.find(cid);
  if (it != g.end()) out += it->second.substMonomial(r.scale, r.eps);
  return out;
}

CechSystem::CechSystem(const Covering& cov, std::map<int, cplx> twist)
    : cov_(cov), twist_(std::move(twist)) {
  for (const auto& r : cov_.nerve)
    if (!twist_.count(r.id)) throw domain_error("CechSystem: missing twist for record");
}

std::map<int, LaurentPoly> CechSystem::coboundary(const CechCochain& F) const {
  std::map<int, LaurentPoly> out;
  for (const auto& r : cov_.nerve) {
    LaurentPoly val = restrictToRecord(cov_, F, r, false);
    val -= restrictToRecord(cov_, F, r, true) * twist_.at(r.id);
    out[r.id] = val;
  }
  return out;
}

namespace {

// unknown column layout of one exponent block
struct Column {
  int chart;
  enum Kind { Smooth, NodeC, NodeGx, NodeGy } kind;
  int exp;  // signed exponent for Smooth; +e for NodeGx/NodeGy
};

}  // namespace

struct CechSystem::Block {
  int e = 0;
  std::vector<Column> cols;
  Eigen::MatrixXcd A;   // delta^0 rows: per record x per sign
  Eigen::VectorXcd b;   // rhs (zero when absent)
  Eigen::MatrixXcd D1;  // delta^1 rows from triples
  std::map<std::pair<int, int>, int> rowOf;  // (recordId, sign exponent) -> row
  int colIndex(int chart, Column::Kind kind, int exp) const {
    for (size_t i = 0; i < cols.size(); ++i)
      if (cols[i].chart == chart && cols[i].kind == kind && cols[i].exp == exp) return int(i);
    return -1;
  }
};

CechSystem::Block CechSystem::assembleBlock(int e, const std::map<int, LaurentPoly>* rhs) const {
  Block blk;
  blk.e = e;
  for (const auto& c : cov_.charts) {
    if (c.kind == ChartKind::SmoothDisk) {
      if (e == 0)
        blk.cols.push_back({c.id, Column::Smooth, 0});
      else {
        blk.cols.push_back({c.id, Column::Smooth, e});
        if (!c.trueDisk) blk.cols.push_back({c.id, Column::Smooth, -e});
      }
    } else {
      if (e == 0)
        blk.cols.push_back({c.id, Column::NodeC, 0});
      else {
        blk.cols.push_back({c.id, Column::NodeGx, e});
        blk.cols.push_back({c.id, Column::NodeGy, e});
      }
    }
  }
  std::vector<int> signs = e == 0 ? std::vector<int>{0} : std::vector<int>{e, -e};
  int nRows = int(cov_.nerve.size() * signs.size());
  blk.A = Eigen::MatrixXcd::Zero(nRows, long(blk.cols.size()));
  blk.b = Eigen::VectorXcd::Zero(nRows);
  int row = 0;
  for (const auto& r : cov_.nerve) {
    cplx lam = twist_.at(r.id);
    const ChartRec& ck = cov_.chart(r.k);
    for (int s : signs) {
      blk.rowOf[{r.id, s}] = row;
      int cj = blk.colIndex(r.j, Column::Smooth, s);
      if (cj >= 0) blk.A(row, cj) += 1.0;
      if (ck.kind == ChartKind::SmoothDisk) {
        int m = r.eps * s;  // source exponent on chart k feeding z_j^s
        int colk = blk.colIndex(r.k, Column::Smooth, m);
        if (colk >= 0) blk.A(row, colk) -= lam * cpowInt(r.scale, m);
      } else {
        if (s == 0) {
          int colk = blk.colIndex(r.k, Column::NodeC, 0);
          if (colk >= 0) blk.A(row, colk) -= lam;
        } else {
          int m = r.eps * s;
          if (m >= 1) {
            Column::Kind kind = r.branch == NodeBranch::X ? Column::NodeGx : Column::NodeGy;
            int colk = blk.colIndex(r.k, kind, m);
            if (colk >= 0) blk.A(row, colk) -= lam * cpowInt(r.scale, m);
          }
        }
      }
      if (rhs) {
        auto it = rhs->find(r.id);
        if (it != rhs->end()) blk.b(row) = it->second.coeff(s);
      }
      ++row;
    }
  }
  // delta^1 rows: alpha_jl - alpha_jk - lambda_jk alpha_kl(transport) = 0
  blk.D1 = Eigen::MatrixXcd::Zero(long(cov_.triples.size() * signs.size()),
                                  long(cov_.nerve.size() * signs.size()));
  auto c1Index = [&](int rid, int s) { return blk.rowOf.at({rid, s}); };
  int trow = 0;
  for (const auto& t : cov_.triples) {
    const OverlapRec& rjk = cov_.overlap(t.rec_jk);
    cplx lamjk = twist_.at(rjk.id);
    for (int s : signs) {
      blk.D1(trow, c1Index(t.rec_jl, s)) += 1.0;
      blk.D1(trow, c1Index(t.rec_jk, s)) -= 1.0;
      int m = rjk.eps * s;
      blk.D1(trow, c1Index(t.rec_kl, m)) -= lamjk * cpowInt(rjk.scale, m);
      ++trow;
    }
  }
  return blk;
}

CechSolveResult CechSystem::solve(const std::map<int, LaurentPoly>& rhs,
                                  const CechOptions& opts) const {
  CechSolveResult res;
  std::set<int> active{0};
  for (const auto& [rid, poly] : rhs) {
    (void)rid;
    if (poly.isZero()) continue;
    for (int e = poly.lowest(); e <= poly.highest(); ++e)
      if (poly.coeff(e) != cplx(0.0)) active.insert(std::abs(e));
    res.rhsNorm += 0.0;
  }
  double rhs2 = 0.0;
  for (const auto& [rid, poly] : rhs) {
    (void)rid;
    for (int e = poly.lowest(); e <= poly.highest(); ++e) rhs2 += std::norm(poly.coeff(e));
  }
  res.rhsNorm = std::sqrt(rhs2);

  double resid2 = 0.0;
  for (int e : active) {
    if (e > opts.maxExp)
      throw domain_error("Cech solve: rhs exponent " + std::to_string(e) + " beyond cap");
    Block blk = assembleBlock(e, &rhs);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(blk.A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(opts.svdTol);
    Eigen::VectorXcd x = svd.solve(blk.b);
    int rank = int(svd.rank());
    int kdim = int(blk.A.cols()) - rank;
    res.kernelDim += kdim;
    resid2 += (blk.A * x - blk.b).squaredNorm();

    if (e == 0 && kdim >= 1) {
      // gauge pin: zero the z^0 / C coefficient at the pinned chart
      Eigen::JacobiSVD<Eigen::MatrixXcd> full(blk.A, Eigen::ComputeFullV);
      full.setThreshold(opts.svdTol);
      int pin = opts.pinChart;
      if (pin < 0) {
        pin = INT_MAX;
        for (const auto& c : cov_.charts) pin = std::min(pin, c.id);
      }
      int pinCol = -1;
      for (size_t i = 0; i < blk.cols.size(); ++i)
        if (blk.cols[i].chart == pin) pinCol = int(i);
      if (pinCol >= 0) {
        for (int kv = rank; kv < int(blk.A.cols()); ++kv) {
          Eigen::VectorXcd v = full.matrixV().col(kv);
          if (std::abs(v(pinCol)) > 1e-8) {
            x -= (x(pinCol) / v(pinCol)) * v;
            res.pinned = true;
            break;
          }
        }
      }
    }

    for (size_t i = 0; i < blk.cols.size(); ++i) {
      const Column& col = blk.cols[i];
      cplx v = x(long(i));
      if (v == cplx(0.0)) continue;
      switch (col.kind) {
        case Column::Smooth: {
          LaurentPoly& F = res.cochain.smooth[col.chart];
          F.setCoeff(col.exp, F.coeff(col.exp) + v);
          break;
        }
        case Column::NodeC:
          res.cochain.nodeConst[col.chart] += v;
          break;
        case Column::NodeGx: {
          LaurentPoly& G = res.cochain.nodeGx[col.chart];
          G.setCoeff(col.exp, G.coeff(col.exp) + v);
          break;
        }
        case Column::NodeGy: {
          LaurentPoly& G = res.cochain.nodeGy[col.chart];
          G.setCoeff(col.exp, G.coeff(col.exp) + v);
          break;
        }
      }
    }
  }
  // make node charts present in the maps even when their parts are zero
  for (const auto& c : cov_.charts)
    if (c.kind == ChartKind::NodeChart && !res.cochain.nodeConst.count(c.id))
      res.cochain.nodeConst[c.id] = 0.0;
  res.residual = std::sqrt(resid2);
  res.cochainNorm = res.cochain.supNorm(cov_);
  return res;
}

std::pair<int, int> CechSystem::bruteCohomologyBlock(int e, double rankTol) const {
  Block blk = assembleBlock(e, nullptr);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr0(blk.A);
  qr0.setThreshold(rankTol);
  int rank0 = int(qr0.rank());
  int h0 = int(blk.A.cols()) - rank0;
  int rank1 = 0;
  if (blk.D1.rows() > 0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr1(blk.D1);
    qr1.setThreshold(rankTol);
    rank1 = int(qr1.rank());
  }
  int h1 = int(blk.A.rows()) - rank1 - rank0;
  return {h0, h1};
}

std::pair<int, int> CechSystem::bruteCohomology(int maxExp, double rankTol) const {
  int h0 = 0, h1 = 0;
  for (int e = 0; e <= maxExp; ++e) {
    auto [a, b] = bruteCohomologyBlock(e, rankTol);
    h0 += a;
    h1 += b;
  }
  return {h0, h1};
}

std::pair<int, int> CechSystem::bruteConstantCohomology(double rankTol) const {
  return bruteCohomologyBlock(0, rankTol);
}

}  // namespace ueda
