#include "dataedron/arxiv.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <thread>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <httplib.h>

namespace dataedron::arxiv {

namespace pt = boost::property_tree;

namespace {

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
    } else {
      if (space) out += ' ';
      space = false;
      out += c;
    }
  }
  return out;
}

std::string canonical_id(std::string raw) {
  raw = collapse_whitespace(raw);
  if (auto pos = raw.find("/abs/"); pos != std::string::npos) raw = raw.substr(pos + 5);
  auto v = raw.rfind('v');
  if (v != std::string::npos && v + 1 < raw.size() && v > 0 &&
      std::all_of(raw.begin() + static_cast<std::ptrdiff_t>(v) + 1, raw.end(),
                  [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    raw.resize(v);
  return raw;
}

std::string encode_search_query(const std::string& q) {
  std::string out;
  for (char c : q) {
    if (c == ' ')
      out += '+';
    else if (c == '(')
      out += "%28";
    else if (c == ')')
      out += "%29";
    else
      out += c;
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool mentions(const std::string& sentence, const std::string& term) {
  if (term.empty()) return false;
  auto is_alnum = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
  for (std::size_t pos = sentence.find(term); pos != std::string::npos; pos = sentence.find(term, pos + 1)) {
    const bool left = pos == 0 || !is_alnum(sentence[pos - 1]);
    const std::size_t end = pos + term.size();
    const bool right = end == sentence.size() || !is_alnum(sentence[end]);
    if (left && right) return true;
  }
  return false;
}

}  // namespace

ParsedFeed parse_feed(std::string_view atom) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(atom)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw UpstreamError(std::string("malformed feed: ") + e.what());
  }
  auto feed = tree.get_child_optional("feed");
  if (!feed) throw UpstreamError("malformed feed: no <feed> root");

  ParsedFeed out;
  std::set<std::string> seen;
  for (const auto& [tag, node] : *feed) {
    if (tag != "entry") continue;
    Entry e;
    const std::string raw_id = node.get<std::string>("id", "");
    if (raw_id.find("/api/errors") != std::string::npos)
      throw UpstreamError("upstream error: " + collapse_whitespace(node.get<std::string>("summary", "")));
    e.id = canonical_id(raw_id);
    if (e.id.empty() || !seen.insert(e.id).second) {
      ++out.skipped;
      continue;
    }
    e.title = collapse_whitespace(node.get<std::string>("title", ""));
    e.abstract = collapse_whitespace(node.get<std::string>("summary", ""));
    e.published = collapse_whitespace(node.get<std::string>("published", ""));
    for (const auto& [child_tag, child] : node) {
      if (child_tag == "author") {
        e.authors.push_back(collapse_whitespace(child.get<std::string>("name", "")));
      } else if (child_tag == "category") {
        auto term = child.get<std::string>("<xmlattr>.term", "");
        if (!term.empty()) e.categories.push_back(std::move(term));
      } else if (child_tag == "link") {
        const auto rel = child.get<std::string>("<xmlattr>.rel", "");
        const auto title = child.get<std::string>("<xmlattr>.title", "");
        const auto href = child.get<std::string>("<xmlattr>.href", "");
        if (title == "pdf")
          e.pdf_url = href;
        else if (rel == "alternate")
          e.abs_url = href;
      }
    }
    out.entries.push_back(std::move(e));
  }
  return out;
}

std::string query_target(const std::string& external_query, std::size_t max_results) {
  return std::string(kApiPath) + "?search_query=" + encode_search_query(external_query) +
         "&start=0&max_results=" + std::to_string(max_results);
}

void SystemClock::sleep_until(time_point t) { std::this_thread::sleep_until(t); }

Clock::time_point RateLimiter::acquire() {
  if (last_) clock_.sleep_until(*last_ + spacing_);
  last_ = clock_.now();
  return *last_;
}

Response HttpTransport::get(const std::string& target) {
  httplib::Client cli(host_);
  cli.set_follow_location(true);
  cli.set_connection_timeout(10);
  cli.set_read_timeout(30);
  auto res = cli.Get(target);
  if (!res) throw NetworkError("request to " + host_ + " failed: " + httplib::to_string(res.error()));
  return {res->status, res->body};
}

std::string FixtureTransport::slug_for(const std::string& external_query) {
  std::string s = encode_search_query(external_query);
  for (auto& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  return s;
}

Response FixtureTransport::get(const std::string& target) {
  const std::string key = "search_query=";
  std::string query;
  if (auto pos = target.find(key); pos != std::string::npos) {
    query = target.substr(pos + key.size());
    query = query.substr(0, query.find('&'));
  }
  for (auto& c : query)
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  for (const auto& candidate : {dir_ / (query + ".xml"), dir_ / "default.xml"}) {
    std::ifstream in(candidate, std::ios::binary);
    if (!in) continue;
    std::ostringstream body;
    body << in.rdbuf();
    return {200, body.str()};
  }
  return {404, ""};
}

Client::Client(std::shared_ptr<Transport> transport, std::shared_ptr<Clock> clock, std::chrono::milliseconds spacing)
    : transport_(std::move(transport)), clock_(std::move(clock)), limiter_(*clock_, spacing) {}

std::vector<Entry> Client::fetch(const std::string& external_query, std::size_t n) {
  if (n == 0) throw InvalidArgument("max_results must be >= 1");
  std::lock_guard lock(mu_);
  const std::string target = query_target(external_query, n);
  constexpr int kRetries = 3;
  Response res;
  for (int attempt = 0;; ++attempt) {
    log_.push_back(limiter_.acquire());
    try {
      res = transport_->get(target);
      break;
    } catch (const NetworkError&) {
      if (attempt == kRetries) throw;
      clock_->sleep_until(clock_->now() + std::chrono::seconds(1 << attempt));
    }
  }
  if (res.status != 200) throw UpstreamError("upstream answered HTTP " + std::to_string(res.status));
  auto feed = parse_feed(res.body);
  if (feed.entries.size() > n) feed.entries.resize(n);
  return std::move(feed.entries);
}

std::vector<PhysicalEntity> to_entities(const std::vector<Entry>& entries, std::size_t w, const Lexicon& lex) {
  if (w == 0) throw InvalidArgument("w must be >= 1");
  std::vector<PhysicalEntity> out;
  if (entries.empty()) return out;

  std::vector<Document> docs;
  docs.reserve(entries.size());
  for (const auto& e : entries) docs.push_back({e.id, e.abstract});
  const auto scored = tf_idf(docs, lex);

  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    PhysicalEntity ent{e.id, {}};
    ent.attributes.emplace(types::kPubId, Multiset{{e.id, 1.0}});
    ent.attributes.emplace(types::kAuthors, Multiset::counting(e.authors));
    ent.attributes.emplace(types::kCategories, Multiset::counting(e.categories));
    ent.attributes.emplace(types::kKeywords, top_w(scored[i], w));
    out.push_back(std::move(ent));
  }
  return out;
}

Corpus to_corpus(const std::vector<Entry>& entries, std::size_t w, const Lexicon& lex) {
  return Corpus(arxiv_schema().schema.types(), to_entities(entries, w, lex));
}

std::string context_sentence(std::string_view abstract, const std::vector<std::string>& query_terms) {
  const auto sentences = split_sentences(abstract);
  if (sentences.empty()) return {};
  for (const auto& s : sentences) {
    const std::string ls = lower(s);
    for (const auto& t : query_terms)
      if (mentions(ls, lower(t))) return s;
  }
  return sentences.front();
}

nlohmann::json to_json(const Entry& e) {
  return {{"id", e.id},           {"title", e.title},         {"abstract", e.abstract},
          {"authors", e.authors}, {"categories", e.categories}, {"abs_url", e.abs_url},
          {"pdf_url", e.pdf_url}, {"published", e.published}};
}

Entry entry_from_json(const nlohmann::json& j) {
  Entry e;
  e.id = j.at("id").get<std::string>();
  e.title = j.value("title", "");
  e.abstract = j.value("abstract", "");
  e.authors = j.value("authors", std::vector<std::string>{});
  e.categories = j.value("categories", std::vector<std::string>{});
  e.abs_url = j.value("abs_url", "");
  e.pdf_url = j.value("pdf_url", "");
  e.published = j.value("published", "");
  return e;
}

}  // namespace dataedron::arxiv
