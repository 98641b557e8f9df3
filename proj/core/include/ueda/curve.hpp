#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ueda/scalar.hpp"

namespace ueda {

struct ComponentRec {
  int id = 0;
  int genus = 0;  // 0 or 1; genus 1 admitted for classification only
  std::optional<int> planeDegree;
};

struct BranchRef {
  int component = 0;
  cplx point = 0.0;        // marked point in the component coordinate
  bool atInfinity = false;
};

struct NodeRec {
  int id = 0;
  BranchRef a, b;
  bool selfNode() const { return a.component == b.component; }
};

struct NodalCurve {
  std::vector<ComponentRec> components;
  std::vector<NodeRec> nodes;

  const ComponentRec& component(int id) const;
  // throws domain_error on duplicate marked points, bad references,
  // disconnectedness when required, etc.
  void validate() const;
};

struct DualGraph {
  std::vector<int> vertices;                // component ids
  std::vector<std::pair<int, int>> edges;   // (component, component) per node
  bool connected = false;
  bool isTree = false;
  bool isCycle = false;
  int eulerNumber = 0;  // |V| - |E|
};

DualGraph buildDualGraph(const NodalCurve& curve);

enum class ChartKind { SmoothDisk, NodeChart };
enum class NodeBranch { None, X, Y };

struct ChartRec {
  int id = 0;
  ChartKind kind = ChartKind::SmoothDisk;
  std::vector<int> components;  // owning component(s)
  int node = -1;                // node id for node charts
  std::string coordinate;       // label, e.g. "zeta0" or "1/zeta0"; ("x","y") pair implied for node charts
  Annulus domain;               // smooth chart base annulus
  double xRadius = 0.0;         // node chart branch radii
  double yRadius = 0.0;
  // true disks contain their center; holomorphic cochains on them carry no
  // negative Laurent exponents
  bool trueDisk = false;
};

struct OverlapRec {
  int id = 0;
  int j = 0;  // base chart of the stored orientation (smooth in canonical coverings)
  int k = 0;
  Annulus annulus;  // in the base chart coordinate z_j
  cplx scale = 1.0;
  int eps = 1;  // curve-level transition z_k = scale * z_j^eps
  NodeBranch branch = NodeBranch::None;  // branch of chart k if k is a node chart
};

// 2-simplex of the nerve: three overlap records pairing charts (j,k),(j,l),(k,l)
struct TripleRec {
  int id = 0;
  int rec_jk = 0, rec_jl = 0, rec_kl = 0;
  Annulus annulus;  // in z_j
};

struct NormalizationChart {
  int id = 0;
  int fromChart = 0;
  NodeBranch branch = NodeBranch::None;  // which piece of a node chart
  int component = 0;
};

struct Covering {
  NodalCurve curve;
  std::vector<ChartRec> charts;
  std::vector<OverlapRec> nerve;
  std::vector<TripleRec> triples;
  std::vector<NormalizationChart> normalization;

  const ChartRec& chart(int id) const;
  const OverlapRec& overlap(int id) const;
  int chartCount() const { return int(charts.size()); }
  std::vector<int> recordsAt(int chartId) const;
  // normalization chart id carrying a given side of a record's overlap
  int normChartOf(int chartId, NodeBranch branch) const;
  void validate() const;
};

struct CycleRadii {
  double nodeX = 0.4;
  double nodeY = 0.4;
  double aInner = 0.25;
  double aOuter = 1.2;
  double bInner = 0.8;   // in the component coordinate zeta
  double bOuter = 3.2;
};

struct CycleCoveringOptions {
  CycleRadii radii;
  bool withTripleOverlaps = false;  // widens node y-branches to 0.9 and adds A-K' records
};

// Cycle of N rational components (N = 1 gives the one-component self-node
// model): N node charts + 2N smoothDisk charts, monomial base transitions.
std::pair<NodalCurve, Covering> standardCycleCovering(int N, const CycleCoveringOptions& opts = {});

// Chain (tree dual graph) of N rational components, same chart layout.
std::pair<NodalCurve, Covering> standardChainCovering(int N, const CycleCoveringOptions& opts = {});

// Split one smoothDisk chart into two overlapping annuli (same coordinate).
// Returns the refined covering and the two new chart ids.
Covering refineSmoothChart(const Covering& cov, int chartId, std::pair<int, int>* newIds = nullptr);

// "curve-config v1" (de)serialization; round-trips bit-exactly on canonical form.
nlohmann::ordered_json coveringToJson(const Covering& cov);
Covering coveringFromJson(const nlohmann::ordered_json& j);

}  // namespace ueda
