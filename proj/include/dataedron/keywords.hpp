#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dataedron/hbgraph.hpp"
#include "dataedron/multiset.hpp"

namespace dataedron {

// Word lists driving the heuristic noun tagger. Each list is a plain-text
// file with one lowercase token per line.
struct Lexicon {
  std::set<std::string> stopwords;           // neutral function words
  std::set<std::string> determiners;         // the next word reads as a noun phrase
  std::set<std::string> subjects;            // pronouns and modals: the next word reads as a verb
  std::set<std::string> verbs;               // base forms
  std::set<std::string> adjectives;
  std::set<std::string> nouns;               // exceptions to the suffix rules
  std::vector<std::string> adjective_suffixes;
  std::set<std::string> uninflected;         // plural-looking words kept as is

  // Built-in lists, identical to the files shipped under data/.
  static const Lexicon& defaults();
  // Reads <dir>/<list>.txt for every list present; absent files keep the default.
  static Lexicon load(const std::filesystem::path& dir);
};

// Plural to singular; the word itself when no rule applies.
std::string singularize(std::string_view word, const Lexicon& lex = Lexicon::defaults());

// Lowercased, singularized noun tokens in text order, with repetition.
std::vector<std::string> extract_nouns(std::string_view text, const Lexicon& lex = Lexicon::defaults());

// Sentences split on . ! ? with whitespace collapsed.
std::vector<std::string> split_sentences(std::string_view text);

struct Document {
  std::string id;
  std::string text;
};

struct ScoredTerms {
  std::string id;
  std::map<std::string, double> scores;
};

// Relative term frequency times ln(N / df), rounded to 9 decimals.
// Throws InvalidArgument on an empty corpus.
std::vector<ScoredTerms> tf_idf(const std::vector<Document>& corpus, const Lexicon& lex = Lexicon::defaults());

struct NounDocument {
  std::string id;
  std::vector<std::string> nouns;
};
std::vector<ScoredTerms> tf_idf_from_nouns(const std::vector<NounDocument>& corpus);

double round_score(double x);

// Highest w scores as a multiset; ties go to the lexicographically smaller
// term and zero scores are dropped.
Multiset top_w(const ScoredTerms& scored, std::size_t w);

// One hb-edge per document (edge id = document id) over the kept nouns.
HbGraph keyword_hbgraph(const std::vector<Document>& corpus, std::size_t w, const Lexicon& lex = Lexicon::defaults());

}  // namespace dataedron
