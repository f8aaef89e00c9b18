#include "dataedron/hbgraph.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

#include "dataedron/error.hpp"
#include "dataedron/union_find.hpp"

namespace dataedron {

void HbGraph::add_edge(EdgeId id, Multiset members) {
  if (index_.count(id)) throw InvalidArgument("duplicate hb-edge id '" + id + "'");
  for (const auto& [x, m] : members)
    if (!vertices_.count(x)) throw InvalidArgument("hb-edge '" + id + "' uses unknown vertex '" + x + "'");
  index_.emplace(id, edges_.size());
  edges_.push_back({std::move(id), std::move(members)});
}

const Multiset& HbGraph::edge(const EdgeId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw InvalidArgument("unknown hb-edge '" + id + "'");
  return edges_[it->second].members;
}

bool HbGraph::is_hypergraph() const noexcept {
  return std::all_of(edges_.begin(), edges_.end(), [](const HbEdge& e) {
    return std::all_of(e.members.begin(), e.members.end(), [](const auto& kv) { return kv.second == 1.0; });
  });
}

bool operator==(const HbGraph& a, const HbGraph& b) {
  if (a.vertices_ != b.vertices_ || a.edges_.size() != b.edges_.size()) return false;
  for (std::size_t i = 0; i < a.edges_.size(); ++i)
    if (a.edges_[i].id != b.edges_[i].id || !(a.edges_[i].members == b.edges_[i].members)) return false;
  return true;
}

WeightedHbGraph::WeightedHbGraph(HbGraph base, std::map<EdgeId, double> weights)
    : base_(std::move(base)), weights_(std::move(weights)) {
  if (weights_.size() != base_.edge_count()) throw InvalidArgument("weights must cover exactly the hb-edges");
  for (const auto& e : base_.edges()) {
    auto it = weights_.find(e.id);
    if (it == weights_.end()) throw InvalidArgument("missing weight for hb-edge '" + e.id + "'");
    if (!(it->second > 0.0)) throw InvalidArgument("weight of hb-edge '" + e.id + "' must be > 0");
  }
}

double WeightedHbGraph::weight(const EdgeId& id) const {
  auto it = weights_.find(id);
  if (it == weights_.end()) throw InvalidArgument("unknown hb-edge '" + id + "'");
  return it->second;
}

SupportHypergraph support_hypergraph(const HbGraph& h) {
  SupportHypergraph out{HbGraph(h.vertices()), {}};
  std::map<std::set<VertexId>, EdgeId> seen;
  for (const auto& e : h.edges()) {
    auto supp = e.members.support();
    auto [it, fresh] = seen.emplace(supp, e.id);
    if (fresh) out.hypergraph.add_edge(e.id, Multiset::counting(supp));
    out.edge_map.emplace(e.id, it->second);
  }
  return out;
}

std::vector<std::set<VertexId>> connected_components(const HbGraph& h) {
  const std::vector<VertexId> order(h.vertices().begin(), h.vertices().end());
  std::map<VertexId, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i) pos.emplace(order[i], i);

  UnionFind uf(order.size());
  for (const auto& e : h.edges()) {
    auto it = e.members.begin();
    if (it == e.members.end()) continue;
    const std::size_t first = pos.at(it->first);
    for (++it; it != e.members.end(); ++it) uf.unite(first, pos.at(it->first));
  }

  std::map<std::size_t, std::set<VertexId>> blocks;
  for (std::size_t i = 0; i < order.size(); ++i) blocks[uf.find(i)].insert(order[i]);
  std::vector<std::set<VertexId>> out;
  out.reserve(blocks.size());
  for (auto& [root, block] : blocks) out.push_back(std::move(block));
  std::sort(out.begin(), out.end());
  return out;
}

ExtraNodeLayout extra_node_layout(const HbGraph& h, double t_min, double t_max) {
  if (!(t_min > 0.0)) throw InvalidArgument("t_min must be > 0");
  if (t_min > t_max) throw InvalidArgument("t_min must not exceed t_max");

  std::vector<const HbEdge*> sorted;
  for (const auto& e : h.edges()) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(), [](const HbEdge* a, const HbEdge* b) { return a->id < b->id; });

  double m_min = std::numeric_limits<double>::infinity();
  double m_max = -m_min;
  for (const HbEdge* e : sorted)
    for (const auto& [x, m] : e->members) {
      m_min = std::min(m_min, m);
      m_max = std::max(m_max, m);
    }

  ExtraNodeLayout layout;
  layout.vertex_nodes = h.vertices();
  for (const HbEdge* e : sorted) {
    layout.extra_nodes.push_back(e->id);
    for (const auto& [x, m] : e->members) {
      const double t = m_max == m_min ? (t_min + t_max) / 2.0
                                      : t_min + (m - m_min) * (t_max - t_min) / (m_max - m_min);
      layout.links.push_back({x, e->id, m, t});
    }
  }
  return layout;
}

namespace {

nlohmann::json sorted_edges_json(const HbGraph& h) {
  std::vector<const HbEdge*> sorted;
  for (const auto& e : h.edges()) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(), [](const HbEdge* a, const HbEdge* b) { return a->id < b->id; });
  nlohmann::json edges = nlohmann::json::array();
  for (const HbEdge* e : sorted) edges.push_back({{"id", e->id}, {"entries", entries_to_json(e->members)}});
  return edges;
}

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

nlohmann::json to_json(const HbGraph& h) {
  return {{"vertices", h.vertices()}, {"edges", sorted_edges_json(h)}};
}

nlohmann::json to_json(const WeightedHbGraph& h) {
  nlohmann::json j = to_json(h.base());
  j["weights"] = h.weights();
  return j;
}

HbGraph hbgraph_from_json(const nlohmann::json& j) {
  HbGraph h(j.at("vertices").get<std::set<VertexId>>());
  for (const auto& e : j.at("edges")) h.add_edge(e.at("id").get<EdgeId>(), multiset_from_entries_json(e.at("entries")));
  return h;
}

nlohmann::json to_json(const ExtraNodeLayout& layout) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& v : layout.vertex_nodes) nodes.push_back({{"id", "v:" + v}, {"label", v}, {"kind", "vertex"}});
  for (const auto& e : layout.extra_nodes) nodes.push_back({{"id", "e:" + e}, {"label", e}, {"kind", "extra"}});
  nlohmann::json links = nlohmann::json::array();
  for (const auto& l : layout.links)
    links.push_back({{"source", "v:" + l.vertex},
                     {"target", "e:" + l.edge},
                     {"multiplicity", l.multiplicity},
                     {"thickness", l.thickness}});
  return {{"nodes", nodes}, {"links", links}};
}

std::string to_dot(const ExtraNodeLayout& layout, const std::string& name) {
  std::ostringstream os;
  os << "graph " << dot_quote(name) << " {\n";
  for (const auto& v : layout.vertex_nodes)
    os << "  " << dot_quote("v:" + v) << " [shape=circle, label=" << dot_quote(v) << "];\n";
  for (const auto& e : layout.extra_nodes)
    os << "  " << dot_quote("e:" + e) << " [shape=square, label=" << dot_quote(e) << "];\n";
  for (const auto& l : layout.links) {
    char width[32];
    std::snprintf(width, sizeof width, "%.4g", l.thickness);
    os << "  " << dot_quote("v:" + l.vertex) << " -- " << dot_quote("e:" + l.edge) << " [penwidth=" << width << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace dataedron
