#include "dataedron/multiset.hpp"

#include <algorithm>
#include <cmath>

#include "dataedron/error.hpp"

namespace dataedron {

Multiset::Multiset(Entries entries) : entries_(std::move(entries)) {
  for (auto it = entries_.begin(); it != entries_.end();) {
    const double m = it->second;
    if (!std::isfinite(m) || m < 0.0)
      throw InvalidArgument("multiplicity of '" + it->first + "' must be finite and non-negative");
    if (m == 0.0)
      it = entries_.erase(it);
    else
      ++it;
  }
}

Multiset::Multiset(std::initializer_list<std::pair<const ElementId, double>> entries)
    : Multiset(Entries(entries)) {}

Multiset Multiset::counting(std::initializer_list<ElementId> elements) {
  Entries e;
  for (const auto& x : elements) e[x] += 1.0;
  return Multiset(std::move(e));
}

double Multiset::multiplicity(const ElementId& x) const noexcept {
  auto it = entries_.find(x);
  return it == entries_.end() ? 0.0 : it->second;
}

std::set<ElementId> Multiset::support() const {
  std::set<ElementId> s;
  for (const auto& [x, m] : entries_) s.insert(s.end(), x);
  return s;
}

bool Multiset::is_natural() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const auto& e) { return std::trunc(e.second) == e.second; });
}

double Multiset::max_multiplicity() const noexcept {
  double best = 0.0;
  for (const auto& [x, m] : entries_) best = std::max(best, m);
  return best;
}

Multiset additive_union(const Multiset& a, const Multiset& b) {
  Multiset::Entries sum = a.entries();
  for (const auto& [x, m] : b) sum[x] += m;
  return Multiset(std::move(sum));
}

nlohmann::json entries_to_json(const Multiset& ms) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [x, m] : ms) j[x] = m;
  return j;
}

Multiset multiset_from_entries_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("multiset entries must be a JSON object");
  Multiset::Entries e;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) throw InvalidArgument("multiplicity of '" + k + "' is not a number");
    const double m = v.get<double>();
    if (m <= 0.0) throw InvalidArgument("multiplicity of '" + k + "' must be > 0");
    e[k] = m;
  }
  return Multiset(std::move(e));
}

nlohmann::json to_json(const Multiset& ms) { return {{"entries", entries_to_json(ms)}}; }

Multiset multiset_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("entries")) throw InvalidArgument("multiset JSON needs an 'entries' object");
  return multiset_from_entries_json(j.at("entries"));
}

}  // namespace dataedron
