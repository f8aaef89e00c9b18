#include "dataedron/schema.hpp"

#include <algorithm>
#include <iterator>
#include <map>

#include "dataedron/error.hpp"
#include "dataedron/union_find.hpp"

namespace dataedron {

SchemaHypergraph::SchemaHypergraph(TypeSet types, std::vector<TypeSet> edges) : types_(std::move(types)) {
  for (auto& e : edges) {
    if (e.empty()) throw InvalidArgument("schema hyperedges must be non-empty");
    for (const auto& t : e)
      if (!types_.count(t)) throw InvalidArgument("schema hyperedge uses unknown type '" + t + "'");
    edges_.insert(std::move(e));
  }
}

SchemaHypergraph extract_schema(const SchemaHypergraph& extended, const TypeSet& keep) {
  for (const auto& t : keep)
    if (!extended.types().count(t)) throw InvalidArgument("unknown type '" + t + "'");
  std::vector<TypeSet> edges;
  for (const auto& e : extended.edges()) {
    TypeSet cut;
    std::set_intersection(e.begin(), e.end(), keep.begin(), keep.end(), std::inserter(cut, cut.end()));
    if (!cut.empty()) edges.push_back(std::move(cut));
  }
  return SchemaHypergraph(keep, std::move(edges));
}

SchemaHypergraph reachability(const SchemaHypergraph& extracted) {
  const std::vector<TypeName> order(extracted.types().begin(), extracted.types().end());
  std::map<TypeName, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i) pos.emplace(order[i], i);

  UnionFind uf(order.size());
  for (const auto& e : extracted.edges())
    for (const auto& t : e) uf.unite(pos.at(*e.begin()), pos.at(t));

  std::map<std::size_t, TypeSet> blocks;
  for (std::size_t i = 0; i < order.size(); ++i) blocks[uf.find(i)].insert(order[i]);
  std::vector<TypeSet> edges;
  for (auto& [root, block] : blocks) edges.push_back(std::move(block));
  return SchemaHypergraph(extracted.types(), std::move(edges));
}

NavigationContext::NavigationContext(TypeSet reachable, TypeSet candidates, TypeName current)
    : reachable_(std::move(reachable)), candidates_(std::move(candidates)), reference_(std::move(current)) {
  if (candidates_.empty()) throw InvalidArgument("reference candidates must be non-empty");
  for (const auto& c : candidates_)
    if (!reachable_.count(c)) throw InvalidArgument("reference candidate '" + c + "' is not in the reachability hyperedge");
  if (!candidates_.count(reference_)) throw InvalidArgument("'" + reference_ + "' is not a reference candidate");
  if (reachable_.size() < 2) throw InvalidArgument("no visualisation type left once '" + reference_ + "' is the reference");
}

TypeSet navigation_hyperedge(const NavigationContext& ctx) {
  TypeSet out = ctx.reachable();
  out.erase(ctx.reference());
  if (out.empty()) throw InvalidArgument("navigation hyperedge is empty");
  return out;
}

NavigationContext SchemaConfig::context_for(const TypeName& reference) const {
  if (!reference_candidates.count(reference)) throw InvalidArgument("'" + reference + "' is not a reference candidate");
  const SchemaHypergraph reach = reachability(schema);
  for (const auto& e : reach.edges()) {
    if (!e.count(reference)) continue;
    TypeSet cands;
    std::set_intersection(reference_candidates.begin(), reference_candidates.end(), e.begin(), e.end(),
                          std::inserter(cands, cands.end()));
    return NavigationContext(e, std::move(cands), reference);
  }
  throw InvalidArgument("unknown type '" + reference + "'");
}

SchemaConfig schema_config_from_json(const nlohmann::json& j) {
  auto types = j.at("types").get<TypeSet>();
  auto edges = j.at("edges").get<std::vector<TypeSet>>();
  SchemaConfig cfg{SchemaHypergraph(std::move(types), std::move(edges)), j.at("reference_candidates").get<TypeSet>()};
  if (cfg.reference_candidates.empty()) throw InvalidArgument("schema must declare at least one reference candidate");
  for (const auto& r : cfg.reference_candidates)
    if (!cfg.schema.types().count(r)) throw InvalidArgument("reference candidate '" + r + "' is not a declared type");
  return cfg;
}

nlohmann::json to_json(const SchemaConfig& config) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : config.schema.edges()) edges.push_back(e);
  return {{"types", config.schema.types()}, {"edges", edges}, {"reference_candidates", config.reference_candidates}};
}

SchemaConfig arxiv_schema() {
  using namespace types;
  TypeSet all{kPubId, kAuthors, kKeywords, kCategories};
  return {SchemaHypergraph(all, {all}), {kPubId, kKeywords, kCategories}};
}

}  // namespace dataedron
