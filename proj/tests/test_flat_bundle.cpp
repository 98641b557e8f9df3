#include <doctest.h>

#include <cmath>
#include <random>

#include "ueda/cech.hpp"
#include "ueda/flat_bundle.hpp"

using namespace ueda;

namespace {

// brute-force redistribution oracle: minimize max_r |1 - t'_r| over gauge
// phases by iterated grid refinement
double gridDistanceOracle(const Covering& cov, const FlatCocycle& L) {
  std::vector<int> chartIds;
  for (const auto& c : cov.charts) chartIds.push_back(c.id);
  int n = int(chartIds.size());
  std::vector<double> phase(size_t(n), 0.0);
  auto objective = [&]() {
    double worst = 0.0;
    for (const auto& r : cov.nerve) {
      int ij = 0, ik = 0;
      for (int i = 0; i < n; ++i) {
        if (chartIds[size_t(i)] == r.j) ij = i;
        if (chartIds[size_t(i)] == r.k) ik = i;
      }
      cplx t = L.value(r.id) * std::polar(1.0, phase[size_t(ij)] - phase[size_t(ik)]);
      worst = std::max(worst, std::abs(cplx(1.0) - t));
    }
    return worst;
  };
  double step = 1.0;
  double best = objective();
  for (int round = 0; round < 60; ++round) {
    for (int i = 1; i < n; ++i) {  // phase 0 pinned
      double p0 = phase[size_t(i)];
      double bestLocal = best;
      double bestPhase = p0;
      for (int s = -6; s <= 6; ++s) {
        phase[size_t(i)] = p0 + s * step;
        double v = objective();
        if (v < bestLocal) {
          bestLocal = v;
          bestPhase = phase[size_t(i)];
        }
      }
      phase[size_t(i)] = bestPhase;
      best = bestLocal;
    }
    step *= 0.62;
  }
  return best;
}

}  // namespace

TEST_CASE("distance of the trivial bundle is zero") {
  auto [curve, cov] = standardCycleCovering(2);
  (void)curve;
  CHECK(distance(cov, trivialCocycle(cov)) == doctest::Approx(0.0));
}

TEST_CASE("balanced distance on a 3-edge cycle nerve: holonomy exp(2 pi i/3)") {
  auto [curve, cov] = standardCycleCovering(1);
  (void)curve;
  CHECK(cycleEdgeBudget(cov) == 3);
  FlatCocycle L = cycleCocycle(cov, std::polar(1.0, 2.0 * kPi / 3.0), ExactAngle::fromFraction(1, 3));
  double d = distance(cov, L);
  CHECK(d == doctest::Approx(std::abs(cplx(1.0) - std::polar(1.0, 2.0 * kPi / 9.0))));
  CHECK(gridDistanceOracle(cov, L) == doctest::Approx(d).epsilon(2e-3));
}

TEST_CASE("balanced distance over M = 4 edges: holonomy -1") {
  // a 4-edge cycle nerve: split one smooth chart of the self-node model
  auto [curve, cov] = standardCycleCovering(1);
  (void)curve;
  Covering four = refineSmoothChart(cov, 1);
  CHECK(four.nerve.size() == 4);
  CHECK(cycleEdgeBudget(four) == 4);
  FlatCocycle L = cycleCocycle(four, cplx(-1.0), ExactAngle::fromFraction(1, 2));
  double d = distance(four, L);
  CHECK(d == doctest::Approx(std::abs(cplx(1.0) - std::polar(1.0, kPi / 4.0))));
  CHECK(gridDistanceOracle(four, L) == doctest::Approx(d).epsilon(2e-3));
}

TEST_CASE("distance rejects non-flat input") {
  auto [curve, cov] = standardCycleCovering(2);
  (void)curve;
  FlatCocycle L = cycleCocycle(cov, cplx(2.0));
  CHECK_THROWS_AS(distance(cov, L), domain_error);
}

TEST_CASE("distance is coboundary invariant") {
  auto [curve, cov] = standardCycleCovering(3);
  (void)curve;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(0.0, 2.0 * kPi);
  FlatCocycle L = cycleCocycle(cov, std::polar(1.0, 1.1), ExactAngle::fromRational(mpq_class(11, 63)));
  double d0 = distance(cov, L);
  for (int trial = 0; trial < 10; ++trial) {
    std::map<int, cplx> gauge;
    for (const auto& c : cov.charts) gauge[c.id] = std::polar(1.0, uni(rng));
    FlatCocycle M = coboundaryRescale(cov, L, gauge);
    CHECK(distance(cov, M) == doctest::Approx(d0).epsilon(1e-12));
  }
}

TEST_CASE("power acts edgewise and on holonomy") {
  auto [curve, cov] = standardCycleCovering(2);
  (void)curve;
  cplx tau = std::polar(1.0, 0.7);
  FlatCocycle L = cycleCocycle(cov, tau);
  FlatCocycle L0 = power(L, 0);
  for (const auto& r : cov.nerve) CHECK(std::abs(L0.value(r.id) - cplx(1.0)) < 1e-15);
  FlatCocycle L1 = power(L, 1);
  for (const auto& r : cov.nerve) CHECK(std::abs(L1.value(r.id) - L.value(r.id)) < 1e-15);
  // multiply around the cycle explicitly
  for (int n : {2, 5, -3}) {
    FlatCocycle Ln = power(L, n);
    CHECK(std::abs(holonomy(cov, Ln) - cpowInt(tau, n)) < 1e-13);
  }
}

TEST_CASE("holonomy: trivial, single scaled edge, planted recovery") {
  auto [curve, cov] = standardCycleCovering(3);
  (void)curve;
  CHECK(std::abs(holonomy(cov, trivialCocycle(cov)) - cplx(1.0)) < 1e-15);
  double alpha = 1.7;
  FlatCocycle La = cycleCocycle(cov, alpha);
  CHECK(std::abs(holonomy(cov, La) - cplx(alpha)) < 1e-14);

  std::mt19937_64 rng(99);
  cplx tau = std::polar(1.0, -2.2);
  for (int trial = 0; trial < 20; ++trial) {
    FlatCocycle L = randomUnitaryCocycle(cov, tau, rng);
    CHECK(std::abs(holonomy(cov, L) - tau) < 1e-14);
  }
}

TEST_CASE("holonomy is multiplicative under edgewise products") {
  auto [curve, cov] = standardCycleCovering(2);
  (void)curve;
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    FlatCocycle a = randomUnitaryCocycle(cov, std::polar(1.0, 0.3 + trial), rng);
    FlatCocycle b = randomUnitaryCocycle(cov, std::polar(1.0, 1.9 - trial), rng);
    cplx lhs = holonomy(cov, tensor(a, b));
    cplx rhs = holonomy(cov, a) * holonomy(cov, b);
    CHECK(std::abs(lhs - rhs) < 1e-13);
  }
}

TEST_CASE("normal form reproduces edge values with unitary tau") {
  auto [curve, cov] = standardCycleCovering(2);
  (void)curve;
  FlatCocycle L = cycleCocycle(cov, cplx(2.5));  // non-unitary holonomy
  NormalForm nf = normalForm(cov, L);
  for (const auto& r : cov.nerve) {
    CHECK(std::abs(std::abs(nf.tau.at(r.id)) - 1.0) < 1e-12);
    int nj = cov.normChartOf(r.j, NodeBranch::None);
    int nk = cov.chart(r.k).kind == ChartKind::SmoothDisk
                 ? cov.normChartOf(r.k, NodeBranch::None)
                 : cov.normChartOf(r.k, r.branch);
    cplx recon = nf.tau.at(r.id) * nf.a.at(nk) / nf.a.at(nj);
    CHECK(std::abs(recon - L.value(r.id)) < 1e-12);
  }
  // smooth-only charts keep a = 1 for canonically built cocycles
  for (const auto& n : cov.normalization)
    if (n.branch == NodeBranch::None) CHECK(std::abs(nf.a.at(n.id) - cplx(1.0)) < 1e-12);
}

TEST_CASE("flatFlag distinguishes unitary holonomy") {
  auto [curve, cov] = standardCycleCovering(2);
  (void)curve;
  CHECK(flatFlag(cov, cycleCocycle(cov, std::polar(1.0, 0.4))));
  CHECK_FALSE(flatFlag(cov, cycleCocycle(cov, cplx(1.3))));
}

TEST_CASE("tree cocycles are all flat (P0 = P on trees)") {
  auto [curve, cov] = standardChainCovering(3);
  (void)curve;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> uni(0.2, 2.0);
  FlatCocycle L = trivialCocycle(cov);
  for (const auto& r : cov.nerve) L.values[r.id] = std::polar(uni(rng), uni(rng));
  L.angle = std::nullopt;
  CHECK(flatFlag(cov, L));  // no cycles: every cocycle is a coboundary
  CHECK(distance(cov, L) == doctest::Approx(0.0));
}

TEST_CASE("classify: exact torsion for root-of-unity orders up to 1000") {
  auto [curve, cov] = standardCycleCovering(1);
  (void)curve;
  for (long m : {1L, 2L, 5L, 7L, 360L, 997L, 1000L}) {
    FlatCocycle L = cycleCocycle(cov, ExactAngle::fromFraction(1, m).unitValue(),
                                 ExactAngle::fromFraction(1, m));
    BundleClassification c = classify(cov, L);
    CHECK(c.verdict == BundleClassification::Verdict::Torsion);
    CHECK(c.torsionOrder == m);
  }
  // primitive fifth root stated exactly
  FlatCocycle L5 = cycleCocycle(cov, ExactAngle::fromFraction(2, 5).unitValue(),
                                ExactAngle::fromFraction(2, 5));
  CHECK(classify(cov, L5).torsionOrder == 5);
}

TEST_CASE("classify: golden ratio passes E1, truncated Liouville fails with a witness") {
  auto [curve, cov] = standardCycleCovering(1);
  (void)curve;
  ClassifyParams params;
  params.depth = 10000;

  FlatCocycle golden = cycleCocycle(cov, std::polar(1.0, 2.0 * kPi * goldenRatioAngle()));
  golden.angle = std::nullopt;
  BundleClassification cg = classify(cov, golden);
  CHECK(cg.verdict == BundleClassification::Verdict::E1);
  CHECK(cg.fitC2 < 2.0);

  mpq_class lio = liouvilleTruncated(4);
  FlatCocycle bad = cycleCocycle(cov, ExactAngle::fromRational(lio).unitValue(),
                                 ExactAngle::fromRational(lio));
  BundleClassification cb = classify(cov, bad, params);
  CHECK(cb.verdict == BundleClassification::Verdict::NotE1UpTo);
  // the worst burst sits at the 10^{3!} denominator
  CHECK(cb.witness == mpz_class(1000000));
  CHECK(cb.witnessValue > cb.witnessBound);
}

TEST_CASE("classify is coboundary invariant (verdict level)") {
  auto [curve, cov] = standardCycleCovering(2);
  (void)curve;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uni(0.0, 2.0 * kPi);
  ExactAngle a = ExactAngle::fromFraction(1, 7);
  FlatCocycle L = cycleCocycle(cov, a.unitValue(), a);
  BundleClassification base = classify(cov, L);
  for (int t = 0; t < 5; ++t) {
    std::map<int, cplx> gauge;
    for (const auto& c : cov.charts) gauge[c.id] = std::polar(1.0, uni(rng));
    FlatCocycle M = coboundaryRescale(cov, L, gauge);
    M.angle = a;
    BundleClassification c2 = classify(cov, M);
    CHECK(c2.verdict == base.verdict);
    CHECK(c2.torsionOrder == base.torsionOrder);
  }
}

TEST_CASE("cohomology dims: formula matches spec examples") {
  auto [c3, v3] = standardCycleCovering(3);
  (void)c3;
  CohomologyDims t = cohomologyDims(v3, trivialCocycle(v3));
  CHECK(t.h0Constant == 1);
  CHECK(t.h1Constant == 1);
  CHECK(*t.h0Structure == 1);
  CHECK(*t.h1Structure == 1);

  FlatCocycle tw = cycleCocycle(v3, std::polar(1.0, 0.9));
  CohomologyDims w = cohomologyDims(v3, tw);
  CHECK(w.h0Constant == 0);
  CHECK(w.h1Constant == 0);
  CHECK(*w.h1Structure == 0);

  auto [c2, v2] = standardChainCovering(2);
  (void)c2;
  CohomologyDims tree = cohomologyDims(v2, trivialCocycle(v2));
  CHECK(tree.h0Constant == 1);
  CHECK(tree.h1Constant == 0);
  CHECK(*tree.h1Structure == 0);
}

TEST_CASE("bundle JSON round-trip") {
  auto [curve, cov] = standardCycleCovering(2);
  (void)curve;
  FlatCocycle L = cycleCocycle(cov, ExactAngle::fromFraction(3, 11).unitValue(),
                               ExactAngle::fromFraction(3, 11));
  ojson j = bundleToJson(cov, L);
  FlatCocycle back = bundleFromJson(cov, j);
  for (const auto& r : cov.nerve) CHECK(std::abs(back.value(r.id) - L.value(r.id)) < 1e-16);
  CHECK(back.angle.has_value());
  CHECK(back.angle->turns == L.angle->turns);
  CHECK(bundleToJson(cov, back).dump() == j.dump());
}
