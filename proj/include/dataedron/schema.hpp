#pragma once

#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace dataedron {

using TypeName = std::string;
using TypeSet = std::set<TypeName>;

// Hypergraph over metadata type names. Hyperedges are kept as a set: no
// empty and no duplicate hyperedges.
class SchemaHypergraph {
 public:
  SchemaHypergraph() = default;
  // Throws InvalidArgument when an edge is empty or mentions an unknown type.
  SchemaHypergraph(TypeSet types, std::vector<TypeSet> edges);

  const TypeSet& types() const noexcept { return types_; }
  const std::set<TypeSet>& edges() const noexcept { return edges_; }

  friend bool operator==(const SchemaHypergraph&, const SchemaHypergraph&) = default;

 private:
  TypeSet types_;
  std::set<TypeSet> edges_;
};

// Keeps only the types in `keep`; edges are intersected with it and empty
// intersections dropped.
SchemaHypergraph extract_schema(const SchemaHypergraph& extended, const TypeSet& keep);

// One hyperedge per connected component.
SchemaHypergraph reachability(const SchemaHypergraph& extracted);

// A single connected component means every type is reachable from any other.
inline bool is_ideal(const SchemaHypergraph& reach) { return reach.edges().size() == 1; }

class NavigationContext {
 public:
  // Requires current ∈ candidates ⊆ reachable and reachable \ {current} non-empty.
  NavigationContext(TypeSet reachable, TypeSet candidates, TypeName current);

  const TypeSet& reachable() const noexcept { return reachable_; }
  const TypeSet& candidates() const noexcept { return candidates_; }
  const TypeName& reference() const noexcept { return reference_; }

 private:
  TypeSet reachable_;
  TypeSet candidates_;
  TypeName reference_;
};

// Visualisation types available with a fixed single reference: e_r \ {rho}.
TypeSet navigation_hyperedge(const NavigationContext& ctx);

// Declared schema: {"types": [...], "edges": [[...], ...], "reference_candidates": [...]}.
struct SchemaConfig {
  SchemaHypergraph schema;
  TypeSet reference_candidates;

  // Builds the navigation context for `reference`: the reachability hyperedge
  // holding it, restricted candidates, and the chosen reference.
  NavigationContext context_for(const TypeName& reference) const;
};

SchemaConfig schema_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SchemaConfig& config);

// {pubid, authors, keywords, categories} in one hyperedge, references
// {pubid, keywords, categories}.
SchemaConfig arxiv_schema();

namespace types {
inline const TypeName kPubId = "pubid";
inline const TypeName kAuthors = "authors";
inline const TypeName kKeywords = "keywords";
inline const TypeName kCategories = "categories";
}  // namespace types

}  // namespace dataedron
