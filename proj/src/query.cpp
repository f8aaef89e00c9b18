#include "dataedron/query.hpp"

#include <cctype>
#include <set>
#include <sstream>

#include "dataedron/error.hpp"

namespace dataedron {

struct Query::Node {
  Kind kind;
  std::string word;
  std::vector<std::string> words;
  std::vector<Query> children;
};

namespace {

bool is_keyword(std::string_view w) { return w == "AND" || w == "OR" || w == "NOT"; }

bool is_word_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != '"';
}

void check_word(const std::string& w) {
  if (w.empty()) throw InvalidArgument("query words must be non-empty");
  for (char c : w)
    if (!is_word_char(c)) throw InvalidArgument("query word '" + w + "' contains a reserved character");
}

}  // namespace

Query Query::term(std::string word) {
  check_word(word);
  if (is_keyword(word)) throw InvalidArgument("'" + word + "' is an operator, not a term");
  return Query(std::make_shared<const Node>(Node{Kind::kTerm, std::move(word), {}, {}}));
}

Query Query::phrase(std::vector<std::string> words) {
  if (words.empty()) throw InvalidArgument("phrase must contain at least one word");
  for (const auto& w : words) check_word(w);
  return Query(std::make_shared<const Node>(Node{Kind::kPhrase, {}, std::move(words), {}}));
}

Query Query::conj(Query left, Query right) {
  return Query(std::make_shared<const Node>(Node{Kind::kAnd, {}, {}, {std::move(left), std::move(right)}}));
}

Query Query::disj(Query left, Query right) {
  return Query(std::make_shared<const Node>(Node{Kind::kOr, {}, {}, {std::move(left), std::move(right)}}));
}

Query Query::negate(Query operand) {
  return Query(std::make_shared<const Node>(Node{Kind::kNot, {}, {}, {std::move(operand)}}));
}

Query Query::group(Query child) {
  return Query(std::make_shared<const Node>(Node{Kind::kGroup, {}, {}, {std::move(child)}}));
}

Query::Kind Query::kind() const noexcept { return node_->kind; }

const std::string& Query::word() const {
  if (node_->kind != Kind::kTerm) throw InvalidArgument("not a term");
  return node_->word;
}

const std::vector<std::string>& Query::words() const {
  if (node_->kind != Kind::kPhrase) throw InvalidArgument("not a phrase");
  return node_->words;
}

const Query& Query::left() const {
  if (node_->children.size() != 2) throw InvalidArgument("not a binary node");
  return node_->children[0];
}

const Query& Query::right() const {
  if (node_->children.size() != 2) throw InvalidArgument("not a binary node");
  return node_->children[1];
}

const Query& Query::operand() const {
  if (node_->children.size() != 1) throw InvalidArgument("not a unary node");
  return node_->children[0];
}

bool operator==(const Query& a, const Query& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.word == y.word && x.words == y.words && x.children == y.children;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Tok {
  enum Type { kWord, kPhrase, kAnd, kOr, kNot, kLParen, kRParen, kEnd } type;
  std::size_t pos;
  std::string text;
  std::vector<std::string> words;
};

std::vector<Tok> lex(std::string_view in) {
  std::vector<Tok> out;
  std::size_t i = 0;
  while (i < in.size()) {
    const char c = in[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(') {
      out.push_back({Tok::kLParen, i++, "(", {}});
    } else if (c == ')') {
      out.push_back({Tok::kRParen, i++, ")", {}});
    } else if (c == '"') {
      const std::size_t start = i;
      const std::size_t close = in.find('"', i + 1);
      if (close == std::string_view::npos) throw QueryParseError("unterminated quote", start);
      std::vector<std::string> words;
      std::istringstream ws{std::string(in.substr(i + 1, close - i - 1))};
      for (std::string w; ws >> w;) {
        for (char wc : w)
          if (wc == '(' || wc == ')') throw QueryParseError("parenthesis inside phrase", start);
        words.push_back(std::move(w));
      }
      if (words.empty()) throw QueryParseError("empty phrase", start);
      out.push_back({Tok::kPhrase, start, std::string(in.substr(start, close - start + 1)), std::move(words)});
      i = close + 1;
    } else {
      const std::size_t start = i;
      while (i < in.size() && is_word_char(in[i])) ++i;
      std::string w(in.substr(start, i - start));
      Tok::Type t = w == "AND" ? Tok::kAnd : w == "OR" ? Tok::kOr : w == "NOT" ? Tok::kNot : Tok::kWord;
      out.push_back({t, start, std::move(w), {}});
    }
  }
  out.push_back({Tok::kEnd, in.size(), "", {}});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Tok> toks) : toks_(std::move(toks)) {}

  Query parse_all() {
    if (peek().type == Tok::kEnd) throw QueryParseError("empty query", 0);
    Query q = parse_or();
    const Tok& t = peek();
    switch (t.type) {
      case Tok::kEnd:
        return q;
      case Tok::kRParen:
        throw QueryParseError("unbalanced parenthesis", t.pos);
      default:
        throw QueryParseError("missing operator before '" + t.text + "'", t.pos);
    }
  }

 private:
  const Tok& peek() const { return toks_[i_]; }
  const Tok& next() { return toks_[i_++]; }

  Query parse_or() {
    Query q = parse_and();
    while (peek().type == Tok::kOr) {
      next();
      q = Query::disj(std::move(q), parse_and());
    }
    return q;
  }

  Query parse_and() {
    Query q = parse_unary();
    while (peek().type == Tok::kAnd) {
      next();
      q = Query::conj(std::move(q), parse_unary());
    }
    return q;
  }

  Query parse_unary() {
    if (peek().type == Tok::kNot) {
      next();
      return Query::negate(parse_unary());
    }
    return parse_primary();
  }

  Query parse_primary() {
    const Tok& t = next();
    switch (t.type) {
      case Tok::kWord:
        return Query::term(t.text);
      case Tok::kPhrase:
        return Query::phrase(t.words);
      case Tok::kLParen: {
        Query inner = parse_or();
        const Tok& close = peek();
        if (close.type == Tok::kRParen) {
          next();
          return Query::group(std::move(inner));
        }
        if (close.type == Tok::kEnd) throw QueryParseError("unbalanced parenthesis", t.pos);
        throw QueryParseError("missing operator before '" + close.text + "'", close.pos);
      }
      case Tok::kRParen:
        throw QueryParseError("unbalanced parenthesis", t.pos);
      case Tok::kEnd: {
        const Tok& prev = toks_[i_ - 2];
        if (prev.type == Tok::kLParen) throw QueryParseError("unbalanced parenthesis", prev.pos);
        throw QueryParseError("dangling operator '" + prev.text + "'", t.pos);
      }
      default:
        throw QueryParseError("dangling operator '" + t.text + "'", t.pos);
    }
  }

  std::vector<Tok> toks_;
  std::size_t i_ = 0;
};

}  // namespace

Query parse_query(std::string_view input) { return Parser(lex(input)).parse_all(); }

// ---------------------------------------------------------------------------
// Printing and rewriting

std::string print(const Query& q) {
  switch (q.kind()) {
    case Query::Kind::kTerm:
      return q.word();
    case Query::Kind::kPhrase: {
      std::string s = "\"";
      for (std::size_t i = 0; i < q.words().size(); ++i) s += (i ? " " : "") + q.words()[i];
      return s + "\"";
    }
    case Query::Kind::kAnd:
      return "(" + print(q.left()) + " AND " + print(q.right()) + ")";
    case Query::Kind::kOr:
      return "(" + print(q.left()) + " OR " + print(q.right()) + ")";
    case Query::Kind::kNot:
      return "(NOT " + print(q.operand()) + ")";
    case Query::Kind::kGroup:
      return print(q.operand());
  }
  return {};
}

Query normalize(const Query& q) {
  switch (q.kind()) {
    case Query::Kind::kGroup:
      return normalize(q.operand());
    case Query::Kind::kAnd:
      return Query::conj(normalize(q.left()), normalize(q.right()));
    case Query::Kind::kOr:
      return Query::disj(normalize(q.left()), normalize(q.right()));
    case Query::Kind::kNot:
      return Query::negate(normalize(q.operand()));
    default:
      return q;
  }
}

Query combine(const Query& current, CombineOp op, const Query& addition) {
  switch (op) {
    case CombineOp::kAnd:
      return Query::conj(current, addition);
    case CombineOp::kOr:
      return Query::disj(current, addition);
    case CombineOp::kAndNot:
      return Query::conj(current, Query::negate(addition));
  }
  throw InvalidArgument("unknown combine operator");
}

namespace {

std::string percent_encode(std::string_view w) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : w) {
    if (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 0xF];
    }
  }
  return out;
}

std::string external(const Query& q) {
  switch (q.kind()) {
    case Query::Kind::kTerm:
      return "all:" + percent_encode(q.word());
    case Query::Kind::kPhrase: {
      std::string s = "all:%22";
      for (std::size_t i = 0; i < q.words().size(); ++i) s += (i ? "+" : "") + percent_encode(q.words()[i]);
      return s + "%22";
    }
    case Query::Kind::kAnd: {
      const bool lneg = q.left().kind() == Query::Kind::kNot;
      const bool rneg = q.right().kind() == Query::Kind::kNot;
      if (lneg && rneg) throw UnsupportedQuery("unsupported NOT on both sides of AND in " + print(q));
      if (rneg) return "(" + external(q.left()) + " ANDNOT " + external(q.right().operand()) + ")";
      if (lneg) return "(" + external(q.right()) + " ANDNOT " + external(q.left().operand()) + ")";
      return "(" + external(q.left()) + " AND " + external(q.right()) + ")";
    }
    case Query::Kind::kOr:
      for (const Query* side : {&q.left(), &q.right()})
        if (side->kind() == Query::Kind::kNot) throw UnsupportedQuery("unsupported NOT inside OR: " + print(*side));
      return "(" + external(q.left()) + " OR " + external(q.right()) + ")";
    case Query::Kind::kNot:
      throw UnsupportedQuery("unsupported nested NOT: " + print(q));
    case Query::Kind::kGroup:
      return external(q.operand());
  }
  return {};
}

void count_terms(const Query& q, Multiset::Entries& acc) {
  switch (q.kind()) {
    case Query::Kind::kTerm:
      acc[q.word()] += 1.0;
      return;
    case Query::Kind::kPhrase: {
      std::string s;
      for (std::size_t i = 0; i < q.words().size(); ++i) s += (i ? " " : "") + q.words()[i];
      acc[s] += 1.0;
      return;
    }
    case Query::Kind::kAnd:
    case Query::Kind::kOr:
      count_terms(q.left(), acc);
      count_terms(q.right(), acc);
      return;
    default:
      count_terms(q.operand(), acc);
  }
}

}  // namespace

std::string to_external_query(const Query& q) {
  const Query n = normalize(q);
  if (n.kind() == Query::Kind::kNot) throw UnsupportedQuery("unsupported top-level NOT: " + print(n));
  return external(n);
}

Multiset term_occurrences(const Query& q) {
  Multiset::Entries acc;
  count_terms(q, acc);
  return Multiset(std::move(acc));
}

// ---------------------------------------------------------------------------
// History

QueryHistory::QueryHistory(std::vector<HistoryEntry> entries) : entries_(std::move(entries)) {
  std::set<EdgeId> ids;
  for (const auto& e : entries_)
    if (!ids.insert(e.id).second) throw InvalidArgument("duplicate history id '" + e.id + "'");
}

HbGraph QueryHistory::hbgraph() const {
  std::set<VertexId> vertices;
  for (const auto& e : entries_)
    for (const auto& [t, m] : e.entries) vertices.insert(t);
  HbGraph h(std::move(vertices));
  for (const auto& e : entries_) h.add_edge(e.id, e.entries);
  return h;
}

namespace {

EdgeId free_id(const EdgeId& base, const std::set<EdgeId>& taken) {
  if (!taken.count(base)) return base;
  for (std::size_t k = 1;; ++k) {
    EdgeId candidate = base + "#" + std::to_string(k);
    if (!taken.count(candidate)) return candidate;
  }
}

}  // namespace

QueryHistory history_append(const QueryHistory& h, const Query& q, std::int64_t ts) {
  std::set<EdgeId> taken;
  for (const auto& e : h.entries()) taken.insert(e.id);
  auto entries = h.entries();
  entries.push_back({free_id("q" + std::to_string(ts), taken), ts, print(q), term_occurrences(q)});
  return QueryHistory(std::move(entries));
}

QueryHistory history_merge(const QueryHistory& h1, const QueryHistory& h2) {
  std::set<EdgeId> taken;
  auto entries = h1.entries();
  for (const auto& e : entries) taken.insert(e.id);
  for (auto e : h2.entries()) {
    e.id = free_id(e.id, taken);
    taken.insert(e.id);
    entries.push_back(std::move(e));
  }
  return QueryHistory(std::move(entries));
}

nlohmann::json to_json(const HistoryEntry& e) {
  return {{"id", e.id}, {"ts", e.ts}, {"query", e.query}, {"entries", entries_to_json(e.entries)}};
}

HistoryEntry history_entry_from_json(const nlohmann::json& j) {
  return {j.at("id").get<EdgeId>(), j.at("ts").get<std::int64_t>(), j.at("query").get<std::string>(),
          multiset_from_entries_json(j.at("entries"))};
}

std::string to_jsonl(const QueryHistory& h) {
  std::string out;
  for (const auto& e : h.entries()) out += to_json(e).dump() + "\n";
  return out;
}

QueryHistory history_from_jsonl(std::string_view text) {
  std::vector<HistoryEntry> entries;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    entries.push_back(history_entry_from_json(nlohmann::json::parse(line)));
  }
  return QueryHistory(std::move(entries));
}

nlohmann::json to_json(const QueryHistory& h) {
  nlohmann::json queries = nlohmann::json::array();
  for (const auto& e : h.entries()) queries.push_back(to_json(e));
  nlohmann::json g = to_json(h.hbgraph());
  // history edges keep execution order rather than id order
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : h.entries()) edges.push_back({{"id", e.id}, {"entries", entries_to_json(e.entries)}});
  g["edges"] = edges;
  return {{"queries", queries}, {"hbgraph", g}};
}

}  // namespace dataedron
