#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dataedron/error.hpp"
#include "dataedron/facet.hpp"
#include "dataedron/keywords.hpp"

namespace dataedron::arxiv {

inline constexpr const char* kApiHost = "http://export.arxiv.org";
inline constexpr const char* kApiPath = "/api/query";

struct Entry {
  std::string id;  // e.g. "2101.00001v2" becomes "2101.00001"
  std::string title;
  std::string abstract;
  std::vector<std::string> authors;
  std::vector<std::string> categories;
  std::string abs_url;
  std::string pdf_url;
  std::string published;
};

struct ParsedFeed {
  std::vector<Entry> entries;
  std::size_t skipped = 0;  // entries without an id
};

// Atom feed of the export API. Throws UpstreamError on malformed XML.
ParsedFeed parse_feed(std::string_view atom);

// Path and query string for the export API, search_query already encoded.
std::string query_target(const std::string& external_query, std::size_t max_results);

class Clock {
 public:
  using time_point = std::chrono::steady_clock::time_point;
  virtual ~Clock() = default;
  virtual time_point now() = 0;
  virtual void sleep_until(time_point t) = 0;
};

class SystemClock final : public Clock {
 public:
  time_point now() override { return std::chrono::steady_clock::now(); }
  void sleep_until(time_point t) override;
};

// Deterministic clock: sleeping advances time instantly.
class ManualClock final : public Clock {
 public:
  time_point now() override { return now_; }
  void sleep_until(time_point t) override {
    if (t > now_) now_ = t;
  }
  void advance(std::chrono::milliseconds d) { now_ += d; }

 private:
  time_point now_{};
};

// Guarantees consecutive acquire() calls return at least `spacing` apart.
class RateLimiter {
 public:
  RateLimiter(Clock& clock, std::chrono::milliseconds spacing) : clock_(clock), spacing_(spacing) {}
  Clock::time_point acquire();

 private:
  Clock& clock_;
  std::chrono::milliseconds spacing_;
  std::optional<Clock::time_point> last_;
};

// Transport-level failure (no HTTP response at all); retried by Client.
class NetworkError : public UpstreamError {
 public:
  using UpstreamError::UpstreamError;
};

struct Response {
  int status = 0;
  std::string body;
};

// Performs a GET on the export API. Throws NetworkError when nothing came back.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual Response get(const std::string& target) = 0;
};

class HttpTransport final : public Transport {
 public:
  explicit HttpTransport(std::string host = kApiHost) : host_(std::move(host)) {}
  Response get(const std::string& target) override;

 private:
  std::string host_;
};

// Serves recorded feeds from a directory: <dir>/<slug>.xml where slug is the
// URL-encoded search_query with every non-alphanumeric byte replaced by '_',
// falling back to <dir>/default.xml. A missing fixture answers 404.
class FixtureTransport final : public Transport {
 public:
  explicit FixtureTransport(std::filesystem::path dir) : dir_(std::move(dir)) {}
  Response get(const std::string& target) override;

  static std::string slug_for(const std::string& external_query);

 private:
  std::filesystem::path dir_;
};

class Client {
 public:
  Client(std::shared_ptr<Transport> transport, std::shared_ptr<Clock> clock,
         std::chrono::milliseconds spacing = std::chrono::seconds(3));

  // First n entries of the feed for `external_query`, in feed order.
  // Network failures are retried 3 times with 1s, 2s, 4s backoff.
  std::vector<Entry> fetch(const std::string& external_query, std::size_t n);

  const std::vector<Clock::time_point>& request_log() const noexcept { return log_; }

 private:
  std::shared_ptr<Transport> transport_;
  std::shared_ptr<Clock> clock_;
  RateLimiter limiter_;
  std::vector<Clock::time_point> log_;
  std::mutex mu_;  // one outstanding request per client
};

// pubid {id:1}, authors one count per listing, categories {code:1},
// keywords the top-w tf-idf nouns computed over the whole batch.
std::vector<PhysicalEntity> to_entities(const std::vector<Entry>& entries, std::size_t w,
                                        const Lexicon& lex = Lexicon::defaults());

// Corpus with the Arxiv type set.
Corpus to_corpus(const std::vector<Entry>& entries, std::size_t w, const Lexicon& lex = Lexicon::defaults());

// First abstract sentence mentioning a query term (case-insensitive), else
// the first sentence.
std::string context_sentence(std::string_view abstract, const std::vector<std::string>& query_terms);

nlohmann::json to_json(const Entry& e);
Entry entry_from_json(const nlohmann::json& j);

}  // namespace dataedron::arxiv
