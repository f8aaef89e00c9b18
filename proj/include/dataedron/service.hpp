#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dataedron/arxiv.hpp"
#include "dataedron/facet.hpp"
#include "dataedron/query.hpp"
#include "dataedron/schema.hpp"

namespace httplib {
class Server;
}

namespace dataedron {

struct SearchParams {
  std::size_t n = 50;
  std::size_t w = 10;
};

inline constexpr std::size_t kMaxResults = 200;
inline constexpr std::size_t kMaxTopWords = 50;

struct Session {
  std::string id;
  std::int64_t created = 0;
  std::int64_t updated = 0;
  SearchParams params;
  TypeName rho;
  SchemaConfig schema;
  std::string query;  // canonical form of the last search
  Corpus corpus;
  SearchSet search;
  std::vector<arxiv::Entry> entries;
  QueryHistory history;
};

// Everything but the history, which lives in its own JSON-lines file.
nlohmann::json to_json(const Session& s);
Session session_from_json(const nlohmann::json& j, QueryHistory history);

// One <id>.json plus <id>.history.jsonl per session under a directory.
class SessionStore {
 public:
  explicit SessionStore(std::filesystem::path dir);

  void save(const Session& s) const;
  std::optional<Session> load(const std::string& id) const;
  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
};

struct ServiceResponse {
  int status = 200;
  nlohmann::json body;
};

struct ServiceOptions {
  std::filesystem::path data_dir;
  std::shared_ptr<arxiv::Transport> transport;  // HTTP by default
  std::shared_ptr<arxiv::Clock> clock;          // system clock by default
  std::chrono::milliseconds request_spacing = std::chrono::seconds(3);
  std::function<std::int64_t()> wall_clock;     // epoch seconds; system time by default
  std::function<std::string()> id_source;       // random hex ids by default
};

// Session-backed search, facet, navigation and history operations. Every
// method returns an HTTP status and a JSON body; none of them throws for
// client errors.
class Service {
 public:
  explicit Service(ServiceOptions options);

  ServiceResponse search(const nlohmann::json& body);
  ServiceResponse session(const std::string& sid);
  ServiceResponse facet(const std::string& sid, const TypeName& alpha);
  ServiceResponse layout(const std::string& sid, const TypeName& alpha, double t_min = 1.0, double t_max = 8.0);
  ServiceResponse navigate(const nlohmann::json& body);
  ServiceResponse history(const std::string& sid);
  ServiceResponse merge_history(const nlohmann::json& body);

  // Registers a session built elsewhere (imported corpus, fixtures) and persists it.
  std::string create_session(Session s);

  // Routes: POST /search, GET /session/{sid}, GET /facet/{sid}/{alpha},
  // GET /layout/{sid}/{alpha}, POST /navigate, GET /history/{sid},
  // POST /history/merge.
  void bind(httplib::Server& server);

  const SessionStore& store() const noexcept { return store_; }

 private:
  struct Slot {
    std::shared_mutex mu;
    Session session;
  };

  std::shared_ptr<Slot> find(const std::string& sid);
  std::string fresh_id();

  ServiceOptions options_;
  SessionStore store_;
  arxiv::Client client_;
  std::mutex registry_mu_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
};

// Reduced facet, or the reference facet when alpha is the session reference.
// Throws InvalidArgument when alpha is not navigable from the session.
nlohmann::json session_facet_json(const Session& s, const TypeName& alpha);
ReducedFacet session_facet(const Session& s, const TypeName& alpha);

}  // namespace dataedron
