#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dataedron/multiset.hpp"

namespace dataedron {

using VertexId = std::string;
using EdgeId = std::string;

struct HbEdge {
  EdgeId id;
  Multiset members;
};

// A hyperbag-graph: a vertex universe and an ordered family of multiset
// hb-edges over it. Two edges may carry equal multisets under distinct ids.
class HbGraph {
 public:
  HbGraph() = default;
  explicit HbGraph(std::set<VertexId> vertices) : vertices_(std::move(vertices)) {}

  void add_vertex(const VertexId& v) { vertices_.insert(v); }
  // Throws InvalidArgument on a duplicate id or a support vertex outside V.
  void add_edge(EdgeId id, Multiset members);

  const std::set<VertexId>& vertices() const noexcept { return vertices_; }
  const std::vector<HbEdge>& edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool has_edge(const EdgeId& id) const noexcept { return index_.count(id) != 0; }
  const Multiset& edge(const EdgeId& id) const;

  // Every edge is binary (multiplicities all 1).
  bool is_hypergraph() const noexcept;

  friend bool operator==(const HbGraph& a, const HbGraph& b);

 private:
  std::set<VertexId> vertices_;
  std::vector<HbEdge> edges_;
  std::map<EdgeId, std::size_t> index_;
};

class WeightedHbGraph {
 public:
  WeightedHbGraph() = default;
  // weights must cover exactly the edge ids of base, each > 0.
  WeightedHbGraph(HbGraph base, std::map<EdgeId, double> weights);

  const HbGraph& base() const noexcept { return base_; }
  const std::map<EdgeId, double>& weights() const noexcept { return weights_; }
  double weight(const EdgeId& id) const;

 private:
  HbGraph base_;
  std::map<EdgeId, double> weights_;
};

struct SupportHypergraph {
  HbGraph hypergraph;
  // original edge id -> id of the hyperedge carrying its support
  std::map<EdgeId, EdgeId> edge_map;
};

// Replaces every hb-edge by its support. Edges with equal supports collapse
// onto the first of them in insertion order.
SupportHypergraph support_hypergraph(const HbGraph& h);

// Blocks of vertices linked through shared hb-edge supports, sorted.
std::vector<std::set<VertexId>> connected_components(const HbGraph& h);

struct LayoutLink {
  VertexId vertex;
  EdgeId edge;
  double multiplicity;
  double thickness;
};

struct ExtraNodeLayout {
  std::set<VertexId> vertex_nodes;
  std::vector<EdgeId> extra_nodes;
  std::vector<LayoutLink> links;
};

// Bipartite drawing with one extra node per hb-edge. Link thickness maps the
// global multiplicity range of h affinely onto [t_min, t_max].
ExtraNodeLayout extra_node_layout(const HbGraph& h, double t_min, double t_max);

nlohmann::json to_json(const HbGraph& h);
nlohmann::json to_json(const WeightedHbGraph& h);
nlohmann::json to_json(const ExtraNodeLayout& layout);
HbGraph hbgraph_from_json(const nlohmann::json& j);

// Graphviz rendering: extra nodes as squares, vertices as circles.
std::string to_dot(const ExtraNodeLayout& layout, const std::string& name = "hbgraph");

}  // namespace dataedron
