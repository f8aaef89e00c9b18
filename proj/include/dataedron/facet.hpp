#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dataedron/hbgraph.hpp"
#include "dataedron/multiset.hpp"
#include "dataedron/schema.hpp"

namespace dataedron {

using EntityId = std::string;
using RefValue = std::string;  // an instance s of the reference type

// A physical entity: its reference and one attribute multiset per type.
struct PhysicalEntity {
  EntityId reference;
  std::map<TypeName, Multiset> attributes;

  // Empty multiset when the entity carries nothing of that type.
  const Multiset& attribute(const TypeName& type) const;
};

// Immutable set of entities sharing a declared type set.
class Corpus {
 public:
  Corpus() = default;
  // Throws on duplicate references or attributes of undeclared types.
  Corpus(TypeSet types, std::vector<PhysicalEntity> entities);

  const TypeSet& types() const noexcept { return types_; }
  const std::vector<PhysicalEntity>& entities() const noexcept { return entities_; }
  bool has_type(const TypeName& t) const noexcept { return types_.count(t) != 0; }
  const PhysicalEntity& at(const EntityId& r) const;
  bool contains(const EntityId& r) const noexcept { return index_.count(r) != 0; }
  // All references in insertion order.
  std::vector<EntityId> references() const;

 private:
  TypeSet types_;
  std::vector<PhysicalEntity> entities_;
  std::map<EntityId, std::size_t> index_;
};

using SearchSet = std::vector<EntityId>;  // ordered, duplicate-free
using RefsOf = std::map<RefValue, std::set<EntityId>>;

struct SigmaRho {
  std::set<RefValue> sigma;
  RefsOf refs_of;  // s -> R_s, never empty
};

// Co-occurrences of `alpha` relative to each instance of `rho` in the search.
struct RawFacet {
  TypeName alpha;
  TypeName rho;
  HbGraph hbgraph;  // one edge per s, edge id = s
  std::set<RefValue> sigma;
  RefsOf refs_of;
  std::set<EntityId> orphans;       // entities in the search with empty A_{rho,r}
  std::set<EdgeId> empty_edges;     // s whose co-occurrence multiset is empty
};

// Raw facet with mset-equal hb-edges merged. Each merged edge is keyed by
// the smallest s of its class and weighted by the class size.
struct ReducedFacet {
  TypeName alpha;
  TypeName rho;
  WeightedHbGraph whbgraph;
  std::map<EdgeId, std::set<RefValue>> classes;
  RefsOf refs_of;
  std::set<EntityId> orphans;

  // References behind one reduced edge: union of R_s over its class.
  std::set<EntityId> references_of(const EdgeId& edge) const;
};

struct NavigationResult {
  ReducedFacet facet;
  std::set<RefValue> selected_values;  // reference values whose edges meet the selection
  std::set<EntityId> sub_search;       // S_A
};

SigmaRho sigma_rho(const Corpus& corpus, const SearchSet& search, const TypeName& rho);

RawFacet raw_facet(const Corpus& corpus, const SearchSet& search, const TypeName& alpha, const TypeName& rho);

ReducedFacet reduce_facet(const RawFacet& raw);

// Edges of `facet` meeting `selection` pick the reference values whose fixed
// R_s (from the original search) give the target co-occurrences of type
// `target`.
NavigationResult navigate(const Corpus& corpus, const ReducedFacet& facet, const std::set<VertexId>& selection,
                          const TypeName& target);

// One hb-edge {s : |R_s|} per reference value.
WeightedHbGraph reference_facet(const Corpus& corpus, const SearchSet& search, const TypeName& rho);

// Facet JSON: alpha, rho, hbgraph, weights, classes, refs.
nlohmann::json to_json(const ReducedFacet& facet);
// Reference facet in the same shape, with singleton classes.
nlohmann::json reference_facet_json(const WeightedHbGraph& ref, const SigmaRho& sr, const TypeName& rho);

nlohmann::json to_json(const PhysicalEntity& e);
PhysicalEntity entity_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Corpus& c);
Corpus corpus_from_json(const nlohmann::json& j);

}  // namespace dataedron
