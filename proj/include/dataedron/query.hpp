#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dataedron/hbgraph.hpp"
#include "dataedron/multiset.hpp"

namespace dataedron {

// Immutable boolean query tree. Copies share structure.
class Query {
 public:
  enum class Kind { kTerm, kPhrase, kAnd, kOr, kNot, kGroup };

  // Term words must be non-empty, free of whitespace, quotes and parentheses,
  // and not one of the operator keywords. Throws InvalidArgument otherwise.
  static Query term(std::string word);
  static Query phrase(std::vector<std::string> words);
  static Query conj(Query left, Query right);
  static Query disj(Query left, Query right);
  static Query negate(Query operand);
  static Query group(Query child);

  Kind kind() const noexcept;
  const std::string& word() const;                  // kTerm
  const std::vector<std::string>& words() const;    // kPhrase
  const Query& left() const;                        // kAnd, kOr
  const Query& right() const;                       // kAnd, kOr
  const Query& operand() const;                     // kNot, kGroup

  friend bool operator==(const Query& a, const Query& b);

 private:
  struct Node;
  explicit Query(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// OR binds loosest, then AND, then unary NOT. Operators are uppercase,
// double quotes delimit phrases, adjacent operands need an explicit operator.
Query parse_query(std::string_view input);

// Fully parenthesized canonical text, e.g. "(a AND (b OR c))".
std::string print(const Query& q);

// Removes Group nodes.
Query normalize(const Query& q);

enum class CombineOp { kAnd, kOr, kAndNot };
Query combine(const Query& current, CombineOp op, const Query& addition);

// Upstream search_query syntax: all:term, binary AND/OR/ANDNOT. A NOT is only
// expressible as one side of an AND.
std::string to_external_query(const Query& q);

// Term and phrase occurrence counts; phrases count as their space-joined text.
Multiset term_occurrences(const Query& q);

struct HistoryEntry {
  EdgeId id;
  std::int64_t ts = 0;  // seconds since epoch
  std::string query;    // canonical form
  Multiset entries;
};

// Executed queries as hb-edges over their terms.
class QueryHistory {
 public:
  QueryHistory() = default;
  explicit QueryHistory(std::vector<HistoryEntry> entries);

  const std::vector<HistoryEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  HbGraph hbgraph() const;

 private:
  std::vector<HistoryEntry> entries_;
};

QueryHistory history_append(const QueryHistory& h, const Query& q, std::int64_t ts);
// Concatenation; colliding ids from h2 get the smallest free "#k" suffix.
QueryHistory history_merge(const QueryHistory& h1, const QueryHistory& h2);

// One {"id","ts","query","entries"} object per line.
std::string to_jsonl(const QueryHistory& h);
QueryHistory history_from_jsonl(std::string_view text);

nlohmann::json to_json(const HistoryEntry& e);
HistoryEntry history_entry_from_json(const nlohmann::json& j);
// {"queries": [...], "hbgraph": {...}}
nlohmann::json to_json(const QueryHistory& h);

}  // namespace dataedron
