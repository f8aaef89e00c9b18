#include "dataedron/facet.hpp"

#include <algorithm>

#include "dataedron/error.hpp"

namespace dataedron {

namespace {

const Multiset kEmpty{};

void require_type(const Corpus& corpus, const TypeName& t) {
  if (!corpus.has_type(t)) throw InvalidArgument("unknown type '" + t + "'");
}

// Co-occurrence multisets e_{alpha,s} over the fixed R_s.
Multiset cooccurrence(const Corpus& corpus, const std::set<EntityId>& refs, const TypeName& alpha) {
  Multiset::Entries sum;
  for (const auto& r : refs)
    for (const auto& [x, m] : corpus.at(r).attribute(alpha)) sum[x] += m;
  return Multiset(std::move(sum));
}

}  // namespace

const Multiset& PhysicalEntity::attribute(const TypeName& type) const {
  auto it = attributes.find(type);
  return it == attributes.end() ? kEmpty : it->second;
}

Corpus::Corpus(TypeSet types, std::vector<PhysicalEntity> entities)
    : types_(std::move(types)), entities_(std::move(entities)) {
  for (std::size_t i = 0; i < entities_.size(); ++i) {
    const auto& e = entities_[i];
    if (!index_.emplace(e.reference, i).second) throw InvalidArgument("duplicate reference '" + e.reference + "'");
    for (const auto& [t, ms] : e.attributes)
      if (!types_.count(t)) throw InvalidArgument("entity '" + e.reference + "' has undeclared type '" + t + "'");
  }
}

const PhysicalEntity& Corpus::at(const EntityId& r) const {
  auto it = index_.find(r);
  if (it == index_.end()) throw InvalidArgument("unknown reference '" + r + "'");
  return entities_[it->second];
}

std::vector<EntityId> Corpus::references() const {
  std::vector<EntityId> out;
  out.reserve(entities_.size());
  for (const auto& e : entities_) out.push_back(e.reference);
  return out;
}

std::set<EntityId> ReducedFacet::references_of(const EdgeId& edge) const {
  std::set<EntityId> out;
  auto it = classes.find(edge);
  if (it == classes.end()) throw InvalidArgument("unknown hb-edge '" + edge + "'");
  for (const auto& s : it->second) {
    const auto& rs = refs_of.at(s);
    out.insert(rs.begin(), rs.end());
  }
  return out;
}

SigmaRho sigma_rho(const Corpus& corpus, const SearchSet& search, const TypeName& rho) {
  require_type(corpus, rho);
  SigmaRho out;
  for (const auto& r : search)
    for (const auto& [s, m] : corpus.at(r).attribute(rho)) {
      out.sigma.insert(s);
      out.refs_of[s].insert(r);
    }
  return out;
}

RawFacet raw_facet(const Corpus& corpus, const SearchSet& search, const TypeName& alpha, const TypeName& rho) {
  require_type(corpus, alpha);
  require_type(corpus, rho);
  if (alpha == rho) throw InvalidArgument("facet type must differ from the reference type");

  auto [sigma, refs_of] = sigma_rho(corpus, search, rho);
  RawFacet raw{alpha, rho, {}, std::move(sigma), std::move(refs_of), {}, {}};

  std::set<VertexId> vertices;
  for (const auto& r : search) {
    const auto& entity = corpus.at(r);
    for (const auto& [x, m] : entity.attribute(alpha)) vertices.insert(x);
    if (entity.attribute(rho).empty()) raw.orphans.insert(r);
  }
  raw.hbgraph = HbGraph(std::move(vertices));
  for (const auto& s : raw.sigma) {
    Multiset e = cooccurrence(corpus, raw.refs_of.at(s), alpha);
    if (e.empty()) raw.empty_edges.insert(s);
    raw.hbgraph.add_edge(s, std::move(e));
  }
  return raw;
}

ReducedFacet reduce_facet(const RawFacet& raw) {
  std::map<Multiset, std::set<RefValue>> groups;
  for (const auto& e : raw.hbgraph.edges()) groups[e.members].insert(e.id);

  // Representative id is the smallest s of the class; iterate classes in
  // that order so the edge family is deterministic.
  std::map<RefValue, const std::pair<const Multiset, std::set<RefValue>>*> by_rep;
  for (const auto& g : groups) by_rep.emplace(*g.second.begin(), &g);

  HbGraph h(raw.hbgraph.vertices());
  std::map<EdgeId, double> weights;
  std::map<EdgeId, std::set<RefValue>> classes;
  for (const auto& [rep, group] : by_rep) {
    h.add_edge(rep, group->first);
    weights.emplace(rep, static_cast<double>(group->second.size()));
    classes.emplace(rep, group->second);
  }
  return {raw.alpha, raw.rho, WeightedHbGraph(std::move(h), std::move(weights)), std::move(classes), raw.refs_of,
          raw.orphans};
}

NavigationResult navigate(const Corpus& corpus, const ReducedFacet& facet, const std::set<VertexId>& selection,
                          const TypeName& target) {
  if (selection.empty()) throw InvalidArgument("selection is empty");
  const auto& vertices = facet.whbgraph.base().vertices();
  for (const auto& v : selection)
    if (!vertices.count(v)) throw InvalidArgument("selected vertex '" + v + "' is not in the facet");
  require_type(corpus, target);
  if (target == facet.rho) throw InvalidArgument("target type must differ from the reference type");

  NavigationResult out;
  for (const auto& e : facet.whbgraph.base().edges()) {
    const bool meets = std::any_of(e.members.begin(), e.members.end(),
                                   [&](const auto& kv) { return selection.count(kv.first) != 0; });
    if (!meets) continue;
    const auto& cls = facet.classes.at(e.id);
    out.selected_values.insert(cls.begin(), cls.end());
  }

  RawFacet raw{target, facet.rho, {}, out.selected_values, {}, {}, {}};
  for (const auto& s : out.selected_values) {
    const auto& rs = facet.refs_of.at(s);
    raw.refs_of.emplace(s, rs);
    out.sub_search.insert(rs.begin(), rs.end());
  }

  std::set<VertexId> target_vertices;
  for (const auto& r : out.sub_search)
    for (const auto& [x, m] : corpus.at(r).attribute(target)) target_vertices.insert(x);
  raw.hbgraph = HbGraph(std::move(target_vertices));
  for (const auto& s : raw.sigma) {
    Multiset e = cooccurrence(corpus, raw.refs_of.at(s), target);
    if (e.empty()) raw.empty_edges.insert(s);
    raw.hbgraph.add_edge(s, std::move(e));
  }
  out.facet = reduce_facet(raw);
  return out;
}

WeightedHbGraph reference_facet(const Corpus& corpus, const SearchSet& search, const TypeName& rho) {
  const auto sr = sigma_rho(corpus, search, rho);
  HbGraph h(sr.sigma);
  std::map<EdgeId, double> weights;
  for (const auto& s : sr.sigma) {
    h.add_edge(s, Multiset{{s, static_cast<double>(sr.refs_of.at(s).size())}});
    weights.emplace(s, 1.0);
  }
  return WeightedHbGraph(std::move(h), std::move(weights));
}

namespace {

nlohmann::json refs_json(const RefsOf& refs) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [s, rs] : refs) j[s] = rs;
  return j;
}

}  // namespace

nlohmann::json to_json(const ReducedFacet& facet) {
  nlohmann::json classes = nlohmann::json::object();
  for (const auto& [e, cls] : facet.classes) classes[e] = cls;
  return {{"alpha", facet.alpha},
          {"rho", facet.rho},
          {"hbgraph", to_json(facet.whbgraph.base())},
          {"weights", facet.whbgraph.weights()},
          {"classes", classes},
          {"refs", refs_json(facet.refs_of)}};
}

nlohmann::json reference_facet_json(const WeightedHbGraph& ref, const SigmaRho& sr, const TypeName& rho) {
  nlohmann::json classes = nlohmann::json::object();
  for (const auto& s : sr.sigma) classes[s] = std::vector<RefValue>{s};
  return {{"alpha", rho},
          {"rho", rho},
          {"hbgraph", to_json(ref.base())},
          {"weights", ref.weights()},
          {"classes", classes},
          {"refs", refs_json(sr.refs_of)}};
}

nlohmann::json to_json(const PhysicalEntity& e) {
  nlohmann::json attrs = nlohmann::json::object();
  for (const auto& [t, ms] : e.attributes) attrs[t] = entries_to_json(ms);
  return {{"ref", e.reference}, {"attributes", attrs}};
}

PhysicalEntity entity_from_json(const nlohmann::json& j) {
  PhysicalEntity e{j.at("ref").get<EntityId>(), {}};
  for (const auto& [t, ms] : j.at("attributes").items()) e.attributes.emplace(t, multiset_from_entries_json(ms));
  return e;
}

nlohmann::json to_json(const Corpus& c) {
  nlohmann::json ents = nlohmann::json::array();
  for (const auto& e : c.entities()) ents.push_back(to_json(e));
  return {{"types", c.types()}, {"entities", ents}};
}

Corpus corpus_from_json(const nlohmann::json& j) {
  std::vector<PhysicalEntity> ents;
  for (const auto& e : j.at("entities")) ents.push_back(entity_from_json(e));
  return Corpus(j.at("types").get<TypeSet>(), std::move(ents));
}

}  // namespace dataedron
