#include "ueda/curve.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "ueda/report.hpp"

namespace ueda {

const ComponentRec& NodalCurve::component(int id) const {
  for (const auto& c : components)
    if (c.id == id) return c;
  throw domain_error("unknown component id " + std::to_string(id));
}

void NodalCurve::validate() const {
  if (components.empty()) throw domain_error("curve has no components");
  std::set<int> ids;
  for (const auto& c : components) {
    if (!ids.insert(c.id).second) throw domain_error("duplicate component id");
    if (c.genus != 0 && c.genus != 1) throw domain_error("component genus must be 0 or 1");
  }
  // marked points on each component must be pairwise distinct
  std::map<int, std::vector<BranchRef>> marks;
  for (const auto& n : nodes) {
    for (const BranchRef& b : {n.a, n.b}) {
      if (!ids.count(b.component)) throw domain_error("node references unknown component");
      for (const auto& other : marks[b.component]) {
        if (other.atInfinity == b.atInfinity &&
            (b.atInfinity || std::abs(other.point - b.point) < 1e-12))
          throw domain_error("coincident marked points on component " +
                             std::to_string(b.component));
      }
      marks[b.component].push_back(b);
    }
  }
}

DualGraph buildDualGraph(const NodalCurve& curve) {
  curve.validate();
  DualGraph g;
  for (const auto& c : curve.components) g.vertices.push_back(c.id);
  for (const auto& n : curve.nodes) g.edges.emplace_back(n.a.component, n.b.component);
  g.eulerNumber = int(g.vertices.size()) - int(g.edges.size());

  // connectivity by union-find over component ids
  std::map<int, int> parent;
  for (int v : g.vertices) parent[v] = v;
  std::function<int(int)> find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (auto [a, b] : g.edges) parent[find(a)] = find(b);
  std::set<int> roots;
  for (int v : g.vertices) roots.insert(find(v));
  g.connected = roots.size() == 1;
  if (!g.connected) throw domain_error("curve is disconnected");

  g.isTree = g.connected && g.eulerNumber == 1;
  std::map<int, int> degree;
  for (auto [a, b] : g.edges) {
    degree[a]++;
    degree[b]++;
  }
  bool allDeg2 = true;
  for (int v : g.vertices)
    if (degree[v] != 2) allDeg2 = false;
  g.isCycle = g.connected && allDeg2 && g.eulerNumber == 0;
  return g;
}

const ChartRec& Covering::chart(int id) const {
  for (const auto& c : charts)
    if (c.id == id) return c;
  throw domain_error("unknown chart id " + std::to_string(id));
}

const OverlapRec& Covering::overlap(int id) const {
  for (const auto& r : nerve)
    if (r.id == id) return r;
  throw domain_error("unknown overlap id " + std::to_string(id));
}

std::vector<int> Covering::recordsAt(int chartId) const {
  std::vector<int> out;
  for (const auto& r : nerve)
    if (r.j == chartId || r.k == chartId) out.push_back(r.id);
  return out;
}

int Covering::normChartOf(int chartId, NodeBranch branch) const {
  for (const auto& n : normalization)
    if (n.fromChart == chartId && n.branch == branch) return n.id;
  throw domain_error("no normalization chart for chart " + std::to_string(chartId));
}

void Covering::validate() const {
  curve.validate();
  for (const auto& r : nerve) {
    if (r.annulus.empty()) throw domain_error("empty overlap annulus");
    const ChartRec& cj = chart(r.j);
    const ChartRec& ck = chart(r.k);
    if (cj.kind == ChartKind::NodeChart && ck.kind == ChartKind::NodeChart)
      throw domain_error("node charts must not overlap each other");
    if (ck.kind == ChartKind::NodeChart && r.branch == NodeBranch::None)
      throw domain_error("overlap with a node chart must name a branch");
  }
  // each genus-0 component of a canonical covering carries >= 2 smooth charts
  std::map<int, int> smoothCount;
  for (const auto& c : charts)
    if (c.kind == ChartKind::SmoothDisk)
      for (int comp : c.components) smoothCount[comp]++;
  for (const auto& comp : curve.components)
    if (comp.genus == 0 && smoothCount[comp.id] < 2)
      throw domain_error("genus-0 component with fewer than two smoothDisk charts");
}

static NodalCurve makeCycleCurve(int N, bool closed) {
  NodalCurve curve;
  for (int i = 0; i < N; ++i) curve.components.push_back({i, 0, std::nullopt});
  int nNodes = closed ? N : N - 1;
  for (int v = 0; v < nNodes; ++v) {
    // node v joins component (v-1 mod N) at zeta=inf to component v at zeta=0;
    // in the open chain, node v joins components v and v+1
    NodeRec n;
    n.id = v;
    if (closed) {
      n.a = {(v + N - 1) % N, 0.0, true};
      n.b = {v, 0.0, false};
    } else {
      n.a = {v, 0.0, true};
      n.b = {v + 1, 0.0, false};
    }
    curve.nodes.push_back(n);
  }
  return curve;
}

// chart ids: K_v = 3v, A_v = 3v+1, B_v = 3v+2
static std::pair<NodalCurve, Covering> buildLinearModelCovering(int N, bool closed,
                                                                const CycleCoveringOptions& opts) {
  if (N < 1) throw domain_error("component count must be positive");
  if (!closed && N < 2) throw domain_error("chain needs at least 2 components");
  CycleRadii rad = opts.radii;
  if (opts.withTripleOverlaps) rad.nodeY = std::max(rad.nodeY, 1.0 / (rad.aOuter * 0.925));

  NodalCurve curve = makeCycleCurve(N, closed);
  Covering cov;
  cov.curve = curve;
  int nNodes = int(curve.nodes.size());

  for (int v = 0; v < N; ++v) {
    if (v < nNodes) {
      ChartRec K;
      K.id = 3 * v;
      K.kind = ChartKind::NodeChart;
      const NodeRec& nd = curve.nodes[size_t(v)];
      K.components = {nd.b.component, nd.a.component};  // x-side component, y-side component
      K.node = v;
      K.coordinate = "node" + std::to_string(v);
      K.xRadius = rad.nodeX;
      K.yRadius = rad.nodeY;
      cov.charts.push_back(K);
    }
    ChartRec A;
    A.id = 3 * v + 1;
    A.kind = ChartKind::SmoothDisk;
    A.components = {v};
    A.coordinate = "zeta" + std::to_string(v);
    A.domain = {rad.aInner, rad.aOuter};
    cov.charts.push_back(A);

    ChartRec B;
    B.id = 3 * v + 2;
    B.kind = ChartKind::SmoothDisk;
    B.components = {v};
    B.coordinate = "1/zeta" + std::to_string(v);
    B.domain = {1.0 / rad.bOuter, 1.0 / rad.bInner};
    cov.charts.push_back(B);
  }

  // chain ends are capped by true disks so every component stays covered
  int capLo = -1, capHi = -1;
  if (!closed) {
    ChartRec d0;
    d0.id = 3 * N;
    d0.kind = ChartKind::SmoothDisk;
    d0.components = {0};
    d0.coordinate = "zeta0";
    d0.domain = {0.0, rad.nodeX};
    d0.trueDisk = true;
    cov.charts.push_back(d0);
    capLo = d0.id;
    ChartRec dI;
    dI.id = 3 * N + 1;
    dI.kind = ChartKind::SmoothDisk;
    dI.components = {N - 1};
    dI.coordinate = "1/zeta" + std::to_string(N - 1);
    dI.domain = {0.0, rad.nodeY};
    dI.trueDisk = true;
    cov.charts.push_back(dI);
    capHi = dI.id;
  }

  int rid = 0, tid = 0;
  for (int v = 0; v < N; ++v) {
    int A = 3 * v + 1, B = 3 * v + 2;
    bool hasPrevNode = closed || v > 0;
    bool hasNextNode = closed || v < N - 1;
    // chain: node v joins components v (at inf) and v+1 (at 0), so component
    // v's zeta=0 node is v-1 and its zeta=inf node is v
    int Kprev = closed ? 3 * v : (v > 0 ? 3 * (v - 1) : -1);
    int Knext = closed ? 3 * ((v + 1) % N) : (v < N - 1 ? 3 * v : -1);

    if (!closed && v == 0) {
      OverlapRec r;  // A_0 with the zeta=0 cap; same coordinate
      r.id = rid++;
      r.j = A;
      r.k = capLo;
      r.annulus = {rad.aInner, rad.nodeX};
      cov.nerve.push_back(r);
    }
    if (!closed && v == N - 1) {
      OverlapRec r;  // B_{N-1} with the 1/zeta cap; same coordinate
      r.id = rid++;
      r.j = B;
      r.k = capHi;
      r.annulus = {1.0 / rad.bOuter, rad.nodeY};
      cov.nerve.push_back(r);
    }
    if (hasPrevNode) {
      OverlapRec r;  // A_v with K at zeta=0, x-branch (x = zeta_v)
      r.id = rid++;
      r.j = A;
      r.k = Kprev;
      r.annulus = {rad.aInner, rad.nodeX};
      r.scale = 1.0;
      r.eps = 1;
      r.branch = NodeBranch::X;
      cov.nerve.push_back(r);
    }
    {
      OverlapRec r;  // A_v with B_v: z_B = 1/z_A
      r.id = rid++;
      r.j = A;
      r.k = B;
      r.annulus = {rad.bInner, rad.aOuter};
      r.scale = 1.0;
      r.eps = -1;
      r.branch = NodeBranch::None;
      cov.nerve.push_back(r);
    }
    if (hasNextNode) {
      OverlapRec r;  // B_v with next node chart, y-branch (y = 1/zeta_v = z_B)
      r.id = rid++;
      r.j = B;
      r.k = Knext;
      r.annulus = {1.0 / rad.bOuter, rad.nodeY};
      r.scale = 1.0;
      r.eps = 1;
      r.branch = NodeBranch::Y;
      cov.nerve.push_back(r);
      if (opts.withTripleOverlaps && 1.0 / rad.nodeY < rad.aOuter) {
        OverlapRec q;  // A_v with next node chart, y-branch (y = 1/z_A)
        q.id = rid++;
        q.j = A;
        q.k = Knext;
        q.annulus = {1.0 / rad.nodeY, rad.aOuter};
        q.scale = 1.0;
        q.eps = -1;
        q.branch = NodeBranch::Y;
        cov.nerve.push_back(q);
        TripleRec t;  // charts (A_v, B_v, Knext)
        t.id = tid++;
        t.rec_jk = r.id - 1;  // (A,B)
        t.rec_jl = q.id;      // (A,K')
        t.rec_kl = r.id;      // (B,K')
        t.annulus = q.annulus;
        cov.triples.push_back(t);
      }
    }
  }

  int nid = 0;
  for (const auto& c : cov.charts) {
    if (c.kind == ChartKind::SmoothDisk) {
      cov.normalization.push_back({nid++, c.id, NodeBranch::None, c.components[0]});
    } else {
      cov.normalization.push_back({nid++, c.id, NodeBranch::X, c.components[0]});
      cov.normalization.push_back({nid++, c.id, NodeBranch::Y, c.components[1]});
    }
  }
  cov.validate();
  return {curve, cov};
}

std::pair<NodalCurve, Covering> standardCycleCovering(int N, const CycleCoveringOptions& opts) {
  return buildLinearModelCovering(N, true, opts);
}

std::pair<NodalCurve, Covering> standardChainCovering(int N, const CycleCoveringOptions& opts) {
  return buildLinearModelCovering(N, false, opts);
}

Covering refineSmoothChart(const Covering& cov, int chartId, std::pair<int, int>* newIds) {
  const ChartRec& old = cov.chart(chartId);
  if (old.kind != ChartKind::SmoothDisk) throw domain_error("refine: chart is not a smoothDisk");
  double rm = std::sqrt(old.domain.r_inner * old.domain.r_outer);
  double spread = 1.35;
  Covering out = cov;
  int maxId = 0;
  for (const auto& c : out.charts) maxId = std::max(maxId, c.id);
  ChartRec lo = old, hi = old;
  lo.id = maxId + 1;
  lo.domain = {old.domain.r_inner, rm * spread};
  hi.id = maxId + 2;
  hi.domain = {rm / spread, old.domain.r_outer};
  out.charts.erase(std::remove_if(out.charts.begin(), out.charts.end(),
                                  [&](const ChartRec& c) { return c.id == chartId; }),
                   out.charts.end());
  out.charts.push_back(lo);
  out.charts.push_back(hi);

  int maxRid = 0;
  for (const auto& r : out.nerve) maxRid = std::max(maxRid, r.id);
  auto widthOf = [](const Annulus& a) { return a.empty() ? 0.0 : a.r_outer / a.r_inner; };
  for (auto& r : out.nerve) {
    if (r.j == chartId) {
      Annulus inLo = r.annulus.intersect(lo.domain), inHi = r.annulus.intersect(hi.domain);
      bool useLo = widthOf(inLo) >= widthOf(inHi);
      r.j = useLo ? lo.id : hi.id;
      r.annulus = useLo ? inLo : inHi;
    }
    if (r.k == chartId) {
      // the record annulus lives in z_j; map the halves' moduli through
      // |z_k| = |scale| |z_j|^eps to clip exactly
      double s = std::abs(r.scale);
      auto pullback = [&](const Annulus& dom) {
        double u, v;
        if (r.eps == 1) {
          u = dom.r_inner / s;
          v = dom.r_outer / s;
        } else {
          u = s / dom.r_outer;
          v = s / dom.r_inner;
        }
        return r.annulus.intersect({u, v});
      };
      Annulus inLo = pullback(lo.domain), inHi = pullback(hi.domain);
      bool useLo = widthOf(inLo) >= widthOf(inHi);
      r.k = useLo ? lo.id : hi.id;
      r.annulus = useLo ? inLo : inHi;
    }
    if (r.annulus.empty()) throw domain_error("refine: record annulus fell outside split");
  }
  OverlapRec mid;  // the two halves share the coordinate: identity transition
  mid.id = maxRid + 1;
  mid.j = lo.id;
  mid.k = hi.id;
  mid.annulus = {rm / spread, rm * spread};
  mid.scale = 1.0;
  mid.eps = 1;
  mid.branch = NodeBranch::None;
  out.nerve.push_back(mid);

  int nid = 0;
  out.normalization.clear();
  for (const auto& c : out.charts) {
    if (c.kind == ChartKind::SmoothDisk)
      out.normalization.push_back({nid++, c.id, NodeBranch::None, c.components[0]});
    else {
      out.normalization.push_back({nid++, c.id, NodeBranch::X, c.components[0]});
      out.normalization.push_back({nid++, c.id, NodeBranch::Y, c.components[1]});
    }
  }
  if (newIds) *newIds = {lo.id, hi.id};
  out.validate();
  return out;
}

static const char* kindName(ChartKind k) {
  return k == ChartKind::SmoothDisk ? "smoothDisk" : "nodeChart";
}
static const char* branchName(NodeBranch b) {
  return b == NodeBranch::None ? "none" : (b == NodeBranch::X ? "x" : "y");
}
static NodeBranch branchFromName(const std::string& s) {
  if (s == "none") return NodeBranch::None;
  if (s == "x") return NodeBranch::X;
  if (s == "y") return NodeBranch::Y;
  throw domain_error("bad branch name " + s);
}

nlohmann::ordered_json coveringToJson(const Covering& cov) {
  ojson j;
  j["schema"] = "curve-config v1";
  j["components"] = ojson::array();
  for (const auto& c : cov.curve.components) {
    ojson e{{"id", c.id}, {"genus", c.genus}};
    if (c.planeDegree) e["degree"] = *c.planeDegree;
    j["components"].push_back(e);
  }
  j["nodes"] = ojson::array();
  for (const auto& n : cov.curve.nodes) {
    auto br = [](const BranchRef& b) {
      ojson e{{"component", b.component}};
      if (b.atInfinity)
        e["point"] = "inf";
      else
        e["point"] = jsonComplex(b.point);
      return e;
    };
    j["nodes"].push_back(ojson{{"id", n.id}, {"branches", ojson::array({br(n.a), br(n.b)})}});
  }
  j["charts"] = ojson::array();
  for (const auto& c : cov.charts) {
    ojson e{{"id", c.id},
            {"kind", kindName(c.kind)},
            {"components", c.components},
            {"coordinate", c.coordinate}};
    if (c.kind == ChartKind::SmoothDisk) {
      e["domain"] = jsonAnnulus(c.domain);
      e["trueDisk"] = c.trueDisk;
    } else {
      e["node"] = c.node;
      e["xRadius"] = fmtReal(c.xRadius);
      e["yRadius"] = fmtReal(c.yRadius);
    }
    j["charts"].push_back(e);
  }
  j["nerve"] = ojson::array();
  for (const auto& r : cov.nerve) {
    j["nerve"].push_back(ojson{{"id", r.id},
                               {"j", r.j},
                               {"k", r.k},
                               {"annulus", jsonAnnulus(r.annulus)},
                               {"scale", jsonComplex(r.scale)},
                               {"eps", r.eps},
                               {"branch", branchName(r.branch)}});
  }
  j["triples"] = ojson::array();
  for (const auto& t : cov.triples) {
    j["triples"].push_back(ojson{{"id", t.id},
                                 {"recJK", t.rec_jk},
                                 {"recJL", t.rec_jl},
                                 {"recKL", t.rec_kl},
                                 {"annulus", jsonAnnulus(t.annulus)}});
  }
  return j;
}

Covering coveringFromJson(const nlohmann::ordered_json& j) {
  if (j.at("schema").get<std::string>() != "curve-config v1")
    throw domain_error("expected schema curve-config v1");
  Covering cov;
  for (const auto& e : j.at("components")) {
    ComponentRec c;
    c.id = e.at("id").get<int>();
    c.genus = e.at("genus").get<int>();
    if (e.contains("degree")) c.planeDegree = e.at("degree").get<int>();
    cov.curve.components.push_back(c);
  }
  for (const auto& e : j.at("nodes")) {
    NodeRec n;
    n.id = e.at("id").get<int>();
    auto parseBr = [](const ojson& b) {
      BranchRef r;
      r.component = b.at("component").get<int>();
      if (b.at("point").is_string() && b.at("point").get<std::string>() == "inf")
        r.atInfinity = true;
      else
        r.point = complexFromJson(b.at("point"));
      return r;
    };
    n.a = parseBr(e.at("branches")[0]);
    n.b = parseBr(e.at("branches")[1]);
    cov.curve.nodes.push_back(n);
  }
  for (const auto& e : j.at("charts")) {
    ChartRec c;
    c.id = e.at("id").get<int>();
    c.kind = e.at("kind").get<std::string>() == "smoothDisk" ? ChartKind::SmoothDisk
                                                             : ChartKind::NodeChart;
    c.components = e.at("components").get<std::vector<int>>();
    c.coordinate = e.at("coordinate").get<std::string>();
    if (c.kind == ChartKind::SmoothDisk) {
      c.domain = annulusFromJson(e.at("domain"));
      if (e.contains("trueDisk")) c.trueDisk = e.at("trueDisk").get<bool>();
    } else {
      c.node = e.at("node").get<int>();
      c.xRadius = parseReal(e.at("xRadius").get<std::string>());
      c.yRadius = parseReal(e.at("yRadius").get<std::string>());
    }
    cov.charts.push_back(c);
  }
  for (const auto& e : j.at("nerve")) {
    OverlapRec r;
    r.id = e.at("id").get<int>();
    r.j = e.at("j").get<int>();
    r.k = e.at("k").get<int>();
    r.annulus = annulusFromJson(e.at("annulus"));
    r.scale = complexFromJson(e.at("scale"));
    r.eps = e.at("eps").get<int>();
    r.branch = branchFromName(e.at("branch").get<std::string>());
    cov.nerve.push_back(r);
  }
  if (j.contains("triples"))
    for (const auto& e : j.at("triples")) {
      TripleRec t;
      t.id = e.at("id").get<int>();
      t.rec_jk = e.at("recJK").get<int>();
      t.rec_jl = e.at("recJL").get<int>();
      t.rec_kl = e.at("recKL").get<int>();
      t.annulus = annulusFromJson(e.at("annulus"));
      cov.triples.push_back(t);
    }
  int nid = 0;
  for (const auto& c : cov.charts) {
    if (c.kind == ChartKind::SmoothDisk)
      cov.normalization.push_back({nid++, c.id, NodeBranch::None, c.components[0]});
    else {
      cov.normalization.push_back({nid++, c.id, NodeBranch::X, c.components[0]});
      cov.normalization.push_back({nid++, c.id, NodeBranch::Y, c.components[1]});
    }
  }
  cov.validate();
  return cov;
}

}  // namespace ueda
