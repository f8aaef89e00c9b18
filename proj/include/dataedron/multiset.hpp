#pragma once

#include <initializer_list>
#include <map>
#include <set>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

namespace dataedron {

using ElementId = std::string;

// A multiset over string elements with finite non-negative real multiplicities.
//
// The universe is implicit: any element not stored has multiplicity 0. Zero
// entries are dropped on construction so that structural equality of the
// entry map is extensional equality of the multisets. Instances are
// immutable once built.
class Multiset {
 public:
  using Entries = std::map<ElementId, double>;
  using const_iterator = Entries::const_iterator;

  Multiset() = default;
  // Throws InvalidArgument on negative, NaN or infinite multiplicities.
  explicit Multiset(Entries entries);
  Multiset(std::initializer_list<std::pair<const ElementId, double>> entries);

  // Every element of `elements` gets multiplicity 1 per occurrence.
  static Multiset counting(std::initializer_list<ElementId> elements);
  template <typename Range>
  static Multiset counting(const Range& elements) {
    Entries e;
    for (const auto& x : elements) e[ElementId(x)] += 1.0;
    return Multiset(std::move(e));
  }

  double multiplicity(const ElementId& x) const noexcept;
  std::set<ElementId> support() const;
  bool contains(const ElementId& x) const noexcept { return entries_.count(x) != 0; }
  bool is_natural() const noexcept;
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t support_size() const noexcept { return entries_.size(); }
  double max_multiplicity() const noexcept;

  const Entries& entries() const noexcept { return entries_; }
  const_iterator begin() const noexcept { return entries_.begin(); }
  const_iterator end() const noexcept { return entries_.end(); }

  friend bool operator==(const Multiset& a, const Multiset& b) { return a.entries_ == b.entries_; }
  friend bool operator<(const Multiset& a, const Multiset& b) { return a.entries_ < b.entries_; }

 private:
  Entries entries_;
};

// m_C(x) = m_A(x) + m_B(x)
Multiset additive_union(const Multiset& a, const Multiset& b);

template <typename Range>
Multiset additive_union_all(const Range& family) {
  Multiset::Entries sum;
  for (const Multiset& m : family)
    for (const auto& [x, k] : m) sum[x] += k;
  return Multiset(std::move(sum));
}

inline double multiplicity(const Multiset& ms, const ElementId& x) { return ms.multiplicity(x); }
inline std::set<ElementId> support(const Multiset& ms) { return ms.support(); }
inline bool is_natural(const Multiset& ms) { return ms.is_natural(); }
inline bool mset_equal(const Multiset& a, const Multiset& b) { return a == b; }

// {"entries": {"x": 2, ...}}
nlohmann::json to_json(const Multiset& ms);
Multiset multiset_from_json(const nlohmann::json& j);

// Bare entry map {"x": 2, ...}, used inside larger documents.
nlohmann::json entries_to_json(const Multiset& ms);
Multiset multiset_from_entries_json(const nlohmann::json& j);

}  // namespace dataedron
