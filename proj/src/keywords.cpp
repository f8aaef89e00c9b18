#include "dataedron/keywords.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dataedron/error.hpp"
#include "lexicon_data.hpp"

namespace dataedron {

namespace {

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    std::size_t start = 0;
    while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start]))) ++start;
    if (start < line.size() && line[start] != '#') out.push_back(line.substr(start));
  }
  return out;
}

std::vector<std::string> parse_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_lines(in);
}

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

const std::map<std::string, std::string, std::less<>>& irregular_plurals() {
  static const std::map<std::string, std::string, std::less<>> m{
      {"children", "child"},     {"people", "person"},         {"men", "man"},
      {"women", "woman"},        {"indices", "index"},         {"matrices", "matrix"},
      {"vertices", "vertex"},    {"analyses", "analysis"},     {"hypotheses", "hypothesis"},
      {"theses", "thesis"},      {"criteria", "criterion"},    {"phenomena", "phenomenon"},
      {"feet", "foot"},          {"mice", "mouse"},            {"appendices", "appendix"},
      {"bases", "basis"},        {"axes", "axis"},             {"syntheses", "synthesis"},
  };
  return m;
}

enum class Tag { kNone, kDeterminer, kSubject, kStop, kAdjective, kAdverb, kVerb, kNoun, kOther };

struct Token {
  std::string word;
  bool clause_break_before = false;
};

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c == '-' || c == '\'' || c >= 0x80; }

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  bool pending_break = true;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (!is_word_byte(c)) {
      if (!std::isspace(c)) pending_break = true;
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_word_byte(static_cast<unsigned char>(text[j]))) ++j;
    std::string w(text.substr(i, j - i));
    i = j;
    if (ends_with(w, "'s")) w.resize(w.size() - 2);
    while (!w.empty() && (w.back() == '-' || w.back() == '\'')) w.pop_back();
    while (!w.empty() && (w.front() == '-' || w.front() == '\'')) w.erase(w.begin());
    if (w.empty()) continue;
    for (auto& ch : w) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    out.push_back({std::move(w), pending_break});
    pending_break = false;
  }
  return out;
}

bool has_adjective_suffix(const std::string& w, const Lexicon& lex) {
  return std::any_of(lex.adjective_suffixes.begin(), lex.adjective_suffixes.end(),
                     [&](const std::string& suf) { return w.size() > suf.size() + 2 && ends_with(w, suf); });
}

bool is_verb_form(const std::string& w) {
  if (w.size() > 4 && ends_with(w, "ed") && !ends_with(w, "eed")) return true;
  for (const char* suf : {"ize", "ise", "izes", "ises", "ized", "ised", "ify", "ifies"})
    if (w.size() > std::string_view(suf).size() + 2 && ends_with(w, suf)) return true;
  return false;
}

}  // namespace

const Lexicon& Lexicon::defaults() {
  static const Lexicon lex = [] {
    Lexicon l;
    l.stopwords = as_set(parse_list(lexicon_data::kStopwords));
    l.determiners = as_set(parse_list(lexicon_data::kDeterminers));
    l.subjects = as_set(parse_list(lexicon_data::kSubjects));
    l.verbs = as_set(parse_list(lexicon_data::kVerbs));
    l.adjectives = as_set(parse_list(lexicon_data::kAdjectives));
    l.nouns = as_set(parse_list(lexicon_data::kNouns));
    l.adjective_suffixes = parse_list(lexicon_data::kAdjectiveSuffixes);
    l.uninflected = as_set(parse_list(lexicon_data::kUninflected));
    return l;
  }();
  return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& dir) {
  Lexicon l = defaults();
  auto read = [&](const char* name, auto& target) {
    std::ifstream in(dir / name);
    if (!in) return;
    auto lines = read_lines(in);
    if constexpr (std::is_same_v<std::decay_t<decltype(target)>, std::vector<std::string>>)
      target = std::move(lines);
    else
      target = as_set(lines);
  };
  read("stopwords.txt", l.stopwords);
  read("determiners.txt", l.determiners);
  read("subjects.txt", l.subjects);
  read("verbs.txt", l.verbs);
  read("adjectives.txt", l.adjectives);
  read("nouns.txt", l.nouns);
  read("adjective_suffixes.txt", l.adjective_suffixes);
  read("uninflected.txt", l.uninflected);
  return l;
}

std::string singularize(std::string_view word, const Lexicon& lex) {
  std::string w(word);
  if (lex.uninflected.count(w)) return w;
  if (auto it = irregular_plurals().find(word); it != irregular_plurals().end()) return it->second;
  if (w.size() > 4 && ends_with(w, "ies")) return w.substr(0, w.size() - 3) + "y";
  for (const char* suf : {"sses", "xes", "ches", "shes", "zzes"})
    if (ends_with(w, suf)) return w.substr(0, w.size() - 2);
  for (const char* suf : {"ss", "us", "is", "ous"})
    if (ends_with(w, suf)) return w;
  if (w.size() > 3 && ends_with(w, "s")) return w.substr(0, w.size() - 1);
  return w;
}

std::vector<std::string> extract_nouns(std::string_view text, const Lexicon& lex) {
  const auto tokens = tokenize(text);
  std::vector<std::string> nouns;
  Tag prev = Tag::kNone;
  bool prev_plural = false;
  std::string prev_word;

  for (const auto& tok : tokens) {
    if (tok.clause_break_before) {
      prev = Tag::kNone;
      prev_plural = false;
      prev_word.clear();
    }
    const std::string& w = tok.word;
    const std::string lemma = singularize(w, lex);
    const bool plural = lemma != w;
    const bool noun_context = prev == Tag::kDeterminer || prev == Tag::kAdjective;
    Tag tag;

    if (lex.determiners.count(w)) {
      tag = Tag::kDeterminer;
    } else if (lex.subjects.count(w)) {
      tag = Tag::kSubject;
    } else if (lex.stopwords.count(w)) {
      tag = Tag::kStop;
    } else if (w.size() < 2 || std::any_of(w.begin(), w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      tag = Tag::kOther;
    } else if (lex.nouns.count(w) || lex.nouns.count(lemma)) {
      tag = Tag::kNoun;
    } else if (lex.adjectives.count(w)) {
      tag = Tag::kAdjective;
    } else if (w.size() > 4 && ends_with(w, "ly")) {
      tag = Tag::kAdverb;
    } else if (is_verb_form(w)) {
      tag = Tag::kVerb;
    } else if (has_adjective_suffix(w, lex)) {
      tag = Tag::kAdjective;
    } else if (prev == Tag::kSubject || (prev_word == "to" && lex.verbs.count(w))) {
      tag = Tag::kVerb;
    } else if (lex.verbs.count(w) || (plural && lex.verbs.count(lemma))) {
      tag = noun_context ? Tag::kNoun : Tag::kVerb;
    } else if (prev == Tag::kNoun && prev_plural && !plural) {
      // plural subject followed by a bare form: verb agreement
      tag = Tag::kVerb;
    } else {
      tag = Tag::kNoun;
    }

    if (tag == Tag::kNoun) nouns.push_back(lemma);
    prev = tag;
    prev_plural = tag == Tag::kNoun && plural;
    prev_word = w;
  }
  return nouns;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    while (!cur.empty() && cur.back() == ' ') cur.pop_back();
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty() && cur.back() != ' ') cur += ' ';
      continue;
    }
    cur += c;
    if ((c == '.' || c == '!' || c == '?') &&
        (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1]))))
      flush();
  }
  flush();
  return out;
}

double round_score(double x) { return std::round(x * 1e9) / 1e9; }

std::vector<ScoredTerms> tf_idf_from_nouns(const std::vector<NounDocument>& corpus) {
  if (corpus.empty()) throw InvalidArgument("tf-idf needs a non-empty corpus");
  std::map<std::string, std::size_t> df;
  std::vector<std::map<std::string, std::size_t>> counts(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (const auto& t : corpus[i].nouns) ++counts[i][t];
    for (const auto& [t, c] : counts[i]) ++df[t];
  }

  const double n = static_cast<double>(corpus.size());
  std::vector<ScoredTerms> out;
  out.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    ScoredTerms st{corpus[i].id, {}};
    const double total = static_cast<double>(corpus[i].nouns.size());
    for (const auto& [t, c] : counts[i]) {
      const double tf = static_cast<double>(c) / total;
      const double idf = std::log(n / static_cast<double>(df.at(t)));
      st.scores.emplace(t, round_score(tf * idf));
    }
    out.push_back(std::move(st));
  }
  return out;
}

std::vector<ScoredTerms> tf_idf(const std::vector<Document>& corpus, const Lexicon& lex) {
  std::vector<NounDocument> nouns;
  nouns.reserve(corpus.size());
  for (const auto& d : corpus) nouns.push_back({d.id, extract_nouns(d.text, lex)});
  return tf_idf_from_nouns(nouns);
}

Multiset top_w(const ScoredTerms& scored, std::size_t w) {
  if (w == 0) throw InvalidArgument("w must be >= 1");
  std::vector<std::pair<std::string, double>> ranked;
  for (const auto& [t, s] : scored.scores)
    if (s > 0.0) ranked.emplace_back(t, s);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (ranked.size() > w) ranked.resize(w);
  return Multiset(Multiset::Entries(ranked.begin(), ranked.end()));
}

HbGraph keyword_hbgraph(const std::vector<Document>& corpus, std::size_t w, const Lexicon& lex) {
  if (w == 0) throw InvalidArgument("w must be >= 1");
  if (corpus.empty()) return {};
  std::vector<std::pair<std::string, Multiset>> edges;
  std::set<VertexId> vertices;
  for (const auto& st : tf_idf(corpus, lex)) {
    Multiset kept = top_w(st, w);
    for (const auto& [t, m] : kept) vertices.insert(t);
    edges.emplace_back(st.id, std::move(kept));
  }
  HbGraph h(std::move(vertices));
  for (auto& [id, e] : edges) h.add_edge(id, std::move(e));
  return h;
}

}  // namespace dataedron
