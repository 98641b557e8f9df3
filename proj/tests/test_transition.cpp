#include <doctest.h>

#include <random>

#include "ueda/transition.hpp"

using namespace ueda;

TEST_CASE("product model has all expansion coefficients zero") {
  auto [curve, cov] = standardCycleCovering(2);
  (void)curve;
  FlatCocycle t = cycleCocycle(cov, std::polar(1.0, 0.9));
  TransitionSystem sys = productModel(cov, t, 10);
  for (const auto& r : cov.nerve)
    for (int m = 2; m <= 10; ++m) CHECK(sys.expandCoeff(r.id, m).isZero());
  CHECK(sys.orderResidual(10) == 0.0);
}

TEST_CASE("order-1 normalization of the product model holds exactly") {
  auto [curve, cov] = standardCycleCovering(3);
  (void)curve;
  FlatCocycle t = cycleCocycle(cov, cplx(1.8));
  TransitionSystem sys = productModel(cov, t, 8);
  for (const auto& r : cov.nerve) {
    LaurentPoly lin = sys.jets.at(r.id).defining.coeff(1) * t.value(r.id);
    CHECK((lin - LaurentPoly::constant(1.0)).maxAbsCoeff() < 1e-15);
  }
}

TEST_CASE("planted coefficient is read back by expand") {
  auto [curve, cov] = standardCycleCovering(1);
  (void)curve;
  FlatCocycle t = trivialCocycle(cov);
  TransitionSystem sys = productModel(cov, t, 8);
  int rid = defaultPlantRecord(cov);
  LaurentPoly d = LaurentPoly::monomial(1.0, 1);  // f_2 = z_j
  plantDefect(sys, rid, d, 1);
  CHECK((sys.expandCoeff(rid, 2) - d).maxAbsCoeff() < 1e-15);
  for (int m = 3; m <= 8; ++m) CHECK(sys.expandCoeff(rid, m).isZero(1e-15));
  // node-chart product structure is preserved by the plant
  const RecordJets& rj = sys.jets.at(rid);
  WJet prod = rj.first * rj.second;
  for (int m = 0; m <= 8; ++m) CHECK((prod.coeff(m) - rj.defining.coeff(m)).maxAbsCoeff() < 1e-13);
}

TEST_CASE("expansion coefficients match a numeric evaluation/fit oracle") {
  auto [curve, cov] = standardCycleCovering(1);
  (void)curve;
  std::mt19937_64 rng(42);
  FlatCocycle t = cycleCocycle(cov, std::polar(1.0, 1.3));
  TransitionSystem sys = randomOrderNSystem(cov, t, 1, 7, rng, 0.4);
  const int M = 5;
  for (const auto& r : cov.nerve) {
    cplx tr = t.value(r.id);
    const WJet& def = sys.jets.at(r.id).defining;
    double rmid = std::sqrt(r.annulus.r_inner * r.annulus.r_outer);
    for (int zi = 0; zi < 20; ++zi) {
      cplx z = std::polar(rmid, 2.0 * kPi * zi / 20.0);
      // Vandermonde fit of w -> t_r * w_k(z, w) on a small w-grid
      const int grid = M + 2;
      std::vector<cplx> ws(grid), vals(grid);
      for (int g = 0; g < grid; ++g) {
        ws[size_t(g)] = std::polar(0.05 + 0.01 * g, 0.4 * g);
        vals[size_t(g)] = def.eval(z, ws[size_t(g)]) * tr;
      }
      // solve for polynomial coefficients by Newton's divided differences is
      // overkill; use direct Gaussian elimination on the Vandermonde system
      std::vector<std::vector<cplx>> A(grid, std::vector<cplx>(grid));
      for (int row = 0; row < grid; ++row) {
        cplx p = 1.0;
        for (int colIdx = 0; colIdx < grid; ++colIdx) {
          A[size_t(row)][size_t(colIdx)] = p;
          p *= ws[size_t(row)];
        }
      }
      std::vector<cplx> b = vals;
      for (int col = 0; col < grid; ++col) {
        int piv = col;
        for (int row = col; row < grid; ++row)
          if (std::abs(A[size_t(row)][size_t(col)]) > std::abs(A[size_t(piv)][size_t(col)])) piv = row;
        std::swap(A[size_t(col)], A[size_t(piv)]);
        std::swap(b[size_t(col)], b[size_t(piv)]);
        for (int row = col + 1; row < grid; ++row) {
          cplx f = A[size_t(row)][size_t(col)] / A[size_t(col)][size_t(col)];
          for (int c2 = col; c2 < grid; ++c2) A[size_t(row)][size_t(c2)] -= f * A[size_t(col)][size_t(c2)];
          b[size_t(row)] -= f * b[size_t(col)];
        }
      }
      std::vector<cplx> coef(grid);
      for (int row = grid - 1; row >= 0; --row) {
        cplx s = b[size_t(row)];
        for (int c2 = row + 1; c2 < grid; ++c2) s -= A[size_t(row)][size_t(c2)] * coef[size_t(c2)];
        coef[size_t(row)] = s / A[size_t(row)][size_t(row)];
      }
      for (int m = 2; m <= M; ++m) {
        cplx expect = sys.expandCoeff(r.id, m).eval(z);
        CHECK(std::abs(coef[size_t(m)] - expect) < 1e-9 * std::max(1.0, std::abs(expect)));
      }
    }
  }
}

TEST_CASE("random order-n systems keep order and triple consistency") {
  std::mt19937_64 rng(7);
  CycleCoveringOptions opts;
  opts.withTripleOverlaps = true;
  for (int N : {1, 2}) {
    auto [curve, cov] = standardCycleCovering(N, opts);
    (void)curve;
    FlatCocycle t = cycleCocycle(cov, std::polar(1.0, 0.77));
    for (int n : {1, 2, 3}) {
      TransitionSystem sys = randomOrderNSystem(cov, t, n, 9, rng, 0.3);
      CHECK(sys.orderResidual(n) < 1e-13);
      CHECK(sys.tripleConsistencyResidual(7) < 1e-10);
      bool someDefect = false;
      for (const auto& r : cov.nerve)
        if (!sys.expandCoeff(r.id, n + 1).isZero(1e-12)) someDefect = true;
      CHECK(someDefect);
    }
  }
}

TEST_CASE("normalizeOrder1: already normalized system is unchanged") {
  auto [curve, cov] = standardCycleCovering(2);
  (void)curve;
  FlatCocycle t = cycleCocycle(cov, std::polar(1.0, 0.2));
  TransitionSystem sys = productModel(cov, t, 8);
  TransitionSystem norm = normalizeOrder1(sys);
  for (const auto& r : cov.nerve) {
    CHECK(std::abs(norm.t.value(r.id) - t.value(r.id)) < 1e-12);
    WJet diff = norm.jets.at(r.id).defining - sys.jets.at(r.id).defining;
    CHECK(diff.maxAbsCoeff() < 1e-12);
  }
}

TEST_CASE("normalizeOrder1 absorbs constant rescalings into t") {
  auto [curve, cov] = standardCycleCovering(2);
  (void)curve;
  FlatCocycle t = cycleCocycle(cov, std::polar(1.0, 0.9));
  TransitionSystem sys = productModel(cov, t, 8);
  std::map<int, LaurentPoly> units;
  std::map<int, cplx> nodeC;
  std::map<int, LaurentPoly> ux, uy;
  std::map<int, cplx> e;
  for (const auto& c : cov.charts) {
    if (c.kind == ChartKind::SmoothDisk) {
      cplx val = std::polar(1.0 + 0.1 * c.id, 0.3 * c.id);
      e[c.id] = val;
      units[c.id] = LaurentPoly::constant(val);
    } else {
      e[c.id] = 1.0;
    }
  }
  TransitionSystem raw = rescaleDefining(sys, units, nodeC, ux, uy);
  TransitionSystem norm = normalizeOrder1(raw);
  for (const auto& r : cov.nerve) {
    // defining functions were divided by e_j, so t_jk picks up e_j/e_k
    cplx expect = t.value(r.id) * e.at(r.j) / e.at(r.k);
    CHECK(std::abs(norm.t.value(r.id) - expect) < 1e-10);
    LaurentPoly lin = norm.jets.at(r.id).defining.coeff(1) * norm.t.value(r.id);
    CHECK((lin - LaurentPoly::constant(1.0)).maxAbsCoeff() < 1e-10);
  }
}

TEST_CASE("normalizeOrder1 handles a node-chart unit rescale u(x)") {
  auto [curve, cov] = standardCycleCovering(1);
  (void)curve;
  FlatCocycle t = trivialCocycle(cov);
  TransitionSystem sys = productModel(cov, t, 8);
  std::map<int, LaurentPoly> units;
  std::map<int, cplx> nodeC;
  std::map<int, LaurentPoly> ux, uy;
  for (const auto& c : cov.charts) {
    if (c.kind == ChartKind::NodeChart) {
      LaurentPoly u;
      u.setCoeff(1, 0.25);  // x' = x / (1 + 0.25 x)
      ux[c.id] = u;
      nodeC[c.id] = 1.0;
    }
  }
  TransitionSystem raw = rescaleDefining(sys, units, nodeC, ux, uy);
  // the raw system now has z-dependent linear coefficients on node records
  bool sawUnit = false;
  for (const auto& r : cov.nerve) {
    LaurentPoly lin = raw.jets.at(r.id).defining.coeff(1) * raw.t.value(r.id);
    if ((lin - LaurentPoly::constant(1.0)).maxAbsCoeff() > 1e-9) sawUnit = true;
  }
  CHECK(sawUnit);
  TransitionSystem norm = normalizeOrder1(raw);
  for (const auto& r : cov.nerve) {
    LaurentPoly lin = norm.jets.at(r.id).defining.coeff(1) * norm.t.value(r.id);
    CHECK((lin - LaurentPoly::constant(1.0)).supNormBound(r.annulus) < 1e-8);
    // node charts keep the product structure
    const ChartRec& ck = cov.chart(r.k);
    if (ck.kind == ChartKind::NodeChart) {
      const RecordJets& rj = norm.jets.at(r.id);
      WJet prod = rj.first * rj.second;
      for (int m = 0; m <= 8; ++m)
        CHECK((prod.coeff(m) - rj.defining.coeff(m)).maxAbsCoeff() < 1e-10);
    }
  }
}

TEST_CASE("vanishing linear coefficient is rejected") {
  auto [curve, cov] = standardCycleCovering(1);
  (void)curve;
  TransitionSystem sys = productModel(cov, trivialCocycle(cov), 6);
  int rid = cov.nerve.front().id;
  sys.jets.at(rid).defining.setCoeff(1, LaurentPoly());
  CHECK_THROWS_AS(normalizeOrder1(sys), domain_error);
}

TEST_CASE("refineSystem inherits jets and stays consistent") {
  auto [curve, cov] = standardCycleCovering(2);
  (void)curve;
  std::mt19937_64 rng(3);
  FlatCocycle t = cycleCocycle(cov, std::polar(1.0, 0.5));
  TransitionSystem sys = randomOrderNSystem(cov, t, 2, 8, rng, 0.3);
  TransitionSystem ref = refineSystem(sys, 1);
  CHECK(ref.cov.nerve.size() == cov.nerve.size() + 1);
  CHECK(ref.orderResidual(2) < 1e-12);
}
