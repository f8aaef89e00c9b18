#include "dataedron/service.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <httplib.h>

#include "dataedron/error.hpp"

namespace dataedron {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json error_body(const std::string& message) { return {{"error", message}}; }

ServiceResponse fail(int status, const std::string& message) { return {status, error_body(message)}; }

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_atomic(const fs::path& p, const std::string& data) {
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << data;
  }
  fs::rename(tmp, p);
}

bool valid_session_id(const std::string& sid) {
  return !sid.empty() && std::all_of(sid.begin(), sid.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
  });
}

std::vector<std::string> query_words(const Query& q) {
  std::vector<std::string> out;
  for (const auto& [t, m] : term_occurrences(q)) out.push_back(t);
  return out;
}

json entries_summary(const Session& s) {
  std::vector<std::string> terms;
  if (!s.query.empty()) {
    try {
      terms = query_words(parse_query(s.query));
    } catch (const Error&) {
    }
  }
  json out = json::array();
  for (const auto& e : s.entries)
    out.push_back({{"id", e.id},
                   {"title", e.title},
                   {"authors", e.authors},
                   {"categories", e.categories},
                   {"abs_url", e.abs_url},
                   {"pdf_url", e.pdf_url},
                   {"published", e.published},
                   {"context", arxiv::context_sentence(e.abstract, terms)}});
  return out;
}

// Reference facet presented as a reduced facet with singleton classes, so it
// can be navigated from like any other facet.
ReducedFacet reference_as_reduced(const Session& s) {
  const auto sr = sigma_rho(s.corpus, s.search, s.rho);
  WeightedHbGraph ref = reference_facet(s.corpus, s.search, s.rho);
  std::map<EdgeId, std::set<RefValue>> classes;
  for (const auto& v : sr.sigma) classes[v] = {v};
  return {s.rho, s.rho, std::move(ref), std::move(classes), sr.refs_of, {}};
}

void check_navigable(const Session& s, const TypeName& alpha) {
  if (alpha == s.rho) return;
  const auto nav = navigation_hyperedge(s.schema.context_for(s.rho));
  if (!nav.count(alpha)) throw InvalidArgument("type '" + alpha + "' is not navigable with reference '" + s.rho + "'");
}

std::size_t size_param(const json& body, const char* key, std::size_t dflt, std::size_t max) {
  if (!body.contains(key) || body[key].is_null()) return dflt;
  const auto& v = body[key];
  if (!v.is_number_integer()) throw InvalidArgument(std::string(key) + " must be an integer");
  const auto x = v.get<std::int64_t>();
  if (x < 1 || static_cast<std::size_t>(x) > max)
    throw InvalidArgument(std::string(key) + " must be in [1, " + std::to_string(max) + "]");
  return static_cast<std::size_t>(x);
}

}  // namespace

ReducedFacet session_facet(const Session& s, const TypeName& alpha) {
  check_navigable(s, alpha);
  if (alpha == s.rho) return reference_as_reduced(s);
  return reduce_facet(raw_facet(s.corpus, s.search, alpha, s.rho));
}

json session_facet_json(const Session& s, const TypeName& alpha) {
  check_navigable(s, alpha);
  if (alpha == s.rho)
    return reference_facet_json(reference_facet(s.corpus, s.search, s.rho), sigma_rho(s.corpus, s.search, s.rho), s.rho);
  return to_json(reduce_facet(raw_facet(s.corpus, s.search, alpha, s.rho)));
}

json to_json(const Session& s) {
  json entries = json::array();
  for (const auto& e : s.entries) entries.push_back(arxiv::to_json(e));
  return {{"id", s.id},
          {"created", s.created},
          {"updated", s.updated},
          {"params", {{"n", s.params.n}, {"w", s.params.w}}},
          {"rho", s.rho},
          {"schema", to_json(s.schema)},
          {"query", s.query},
          {"search", s.search},
          {"corpus", to_json(s.corpus)},
          {"entries", entries}};
}

Session session_from_json(const json& j, QueryHistory history) {
  Session s;
  s.id = j.at("id").get<std::string>();
  s.created = j.value("created", std::int64_t{0});
  s.updated = j.value("updated", std::int64_t{0});
  if (j.contains("params")) {
    s.params.n = j["params"].value("n", s.params.n);
    s.params.w = j["params"].value("w", s.params.w);
  }
  s.rho = j.at("rho").get<TypeName>();
  s.schema = schema_config_from_json(j.at("schema"));
  s.query = j.value("query", "");
  s.corpus = corpus_from_json(j.at("corpus"));
  s.search = j.at("search").get<SearchSet>();
  for (const auto& r : s.search)
    if (!s.corpus.contains(r)) throw InvalidArgument("search references unknown entity '" + r + "'");
  for (const auto& e : j.value("entries", json::array())) s.entries.push_back(arxiv::entry_from_json(e));
  s.history = std::move(history);
  s.schema.context_for(s.rho);
  return s;
}

SessionStore::SessionStore(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

void SessionStore::save(const Session& s) const {
  write_atomic(dir_ / (s.id + ".json"), to_json(s).dump(2) + "\n");
  write_atomic(dir_ / (s.id + ".history.jsonl"), to_jsonl(s.history));
}

std::optional<Session> SessionStore::load(const std::string& id) const {
  if (!valid_session_id(id)) return std::nullopt;
  const fs::path main = dir_ / (id + ".json");
  if (!fs::exists(main)) return std::nullopt;
  const fs::path hist = dir_ / (id + ".history.jsonl");
  QueryHistory history = fs::exists(hist) ? history_from_jsonl(read_file(hist)) : QueryHistory{};
  return session_from_json(json::parse(read_file(main)), std::move(history));
}

namespace {

ServiceOptions with_defaults(ServiceOptions o) {
  if (!o.transport) o.transport = std::make_shared<arxiv::HttpTransport>();
  if (!o.clock) o.clock = std::make_shared<arxiv::SystemClock>();
  if (!o.wall_clock)
    o.wall_clock = [] {
      return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
          .count();
    };
  if (!o.id_source)
    o.id_source = [] {
      static std::mutex mu;
      static std::mt19937_64 rng{std::random_device{}()};
      std::lock_guard lock(mu);
      char buf[17];
      std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
      return std::string(buf);
    };
  return o;
}

}  // namespace

Service::Service(ServiceOptions options)
    : options_(with_defaults(std::move(options))),
      store_(options_.data_dir),
      client_(options_.transport, options_.clock, options_.request_spacing) {}

std::shared_ptr<Service::Slot> Service::find(const std::string& sid) {
  std::lock_guard lock(registry_mu_);
  if (auto it = sessions_.find(sid); it != sessions_.end()) return it->second;
  auto loaded = store_.load(sid);
  if (!loaded) return nullptr;
  auto slot = std::make_shared<Slot>();
  slot->session = std::move(*loaded);
  sessions_.emplace(sid, slot);
  return slot;
}

std::string Service::fresh_id() {
  for (;;) {
    std::string id = options_.id_source();
    std::lock_guard lock(registry_mu_);
    if (!sessions_.count(id) && !fs::exists(store_.dir() / (id + ".json"))) return id;
  }
}

std::string Service::create_session(Session s) {
  if (s.id.empty()) s.id = fresh_id();
  if (!valid_session_id(s.id)) throw InvalidArgument("invalid session id '" + s.id + "'");
  s.schema.context_for(s.rho);
  store_.save(s);
  auto slot = std::make_shared<Slot>();
  slot->session = std::move(s);
  std::lock_guard lock(registry_mu_);
  sessions_[slot->session.id] = slot;
  return slot->session.id;
}

ServiceResponse Service::search(const json& body) {
  if (!body.is_object() || !body.contains("query") || !body["query"].is_string())
    return fail(422, "body must contain a string 'query'");
  const std::string text = body["query"].get<std::string>();

  std::optional<Query> q;
  std::string external;
  try {
    q = parse_query(text);
    external = to_external_query(*q);
  } catch (const QueryParseError& e) {
    return {400, {{"error", e.message()}, {"offset", e.offset()}}};
  } catch (const UnsupportedQuery& e) {
    return fail(400, e.what());
  }

  SearchParams params;
  TypeName rho = types::kPubId;
  const SchemaConfig schema = arxiv_schema();
  try {
    params.n = size_param(body, "n", params.n, kMaxResults);
    params.w = size_param(body, "w", params.w, kMaxTopWords);
    if (body.contains("rho") && !body["rho"].is_null()) {
      if (!body["rho"].is_string()) throw InvalidArgument("rho must be a string");
      rho = body["rho"].get<TypeName>();
    }
    schema.context_for(rho);
  } catch (const Error& e) {
    return fail(422, e.what());
  }

  std::shared_ptr<Slot> existing;
  if (body.contains("sid") && body["sid"].is_string()) {
    existing = find(body["sid"].get<std::string>());
    if (!existing) return fail(404, "unknown session");
  }

  std::vector<arxiv::Entry> entries;
  try {
    entries = client_.fetch(external, params.n);
  } catch (const UpstreamError& e) {
    return fail(502, e.what());
  }

  Session fresh;
  fresh.params = params;
  fresh.rho = rho;
  fresh.schema = schema;
  fresh.query = print(*q);
  fresh.corpus = arxiv::to_corpus(entries, params.w);
  fresh.search = fresh.corpus.references();
  fresh.entries = std::move(entries);
  const auto now = options_.wall_clock();
  fresh.updated = now;

  std::string sid;
  if (existing) {
    std::unique_lock lock(existing->mu);
    Session& s = existing->session;
    fresh.id = s.id;
    fresh.created = s.created;
    fresh.history = history_append(s.history, *q, now);
    s = std::move(fresh);
    store_.save(s);
    sid = s.id;
  } else {
    fresh.created = now;
    fresh.history = history_append({}, *q, now);
    sid = create_session(std::move(fresh));
  }

  auto slot = find(sid);
  std::shared_lock lock(slot->mu);
  return {200, {{"session_id", sid}, {"query", slot->session.query}, {"entries", entries_summary(slot->session)}}};
}

ServiceResponse Service::session(const std::string& sid) {
  auto slot = find(sid);
  if (!slot) return fail(404, "unknown session");
  std::shared_lock lock(slot->mu);
  const Session& s = slot->session;
  json nav = json::array();
  for (const auto& t : navigation_hyperedge(s.schema.context_for(s.rho))) nav.push_back(t);
  return {200,
          {{"session_id", s.id},
           {"query", s.query},
           {"rho", s.rho},
           {"params", {{"n", s.params.n}, {"w", s.params.w}}},
           {"navigation", nav},
           {"entries", entries_summary(s)}}};
}

ServiceResponse Service::facet(const std::string& sid, const TypeName& alpha) {
  auto slot = find(sid);
  if (!slot) return fail(404, "unknown session");
  std::shared_lock lock(slot->mu);
  try {
    return {200, session_facet_json(slot->session, alpha)};
  } catch (const Error& e) {
    return fail(422, e.what());
  }
}

ServiceResponse Service::layout(const std::string& sid, const TypeName& alpha, double t_min, double t_max) {
  auto slot = find(sid);
  if (!slot) return fail(404, "unknown session");
  std::shared_lock lock(slot->mu);
  try {
    const ReducedFacet f = session_facet(slot->session, alpha);
    json j = to_json(extra_node_layout(f.whbgraph.base(), t_min, t_max));
    j["alpha"] = alpha;
    j["rho"] = slot->session.rho;
    return {200, j};
  } catch (const Error& e) {
    return fail(422, e.what());
  }
}

ServiceResponse Service::navigate(const json& body) {
  if (!body.is_object()) return fail(422, "body must be a JSON object");
  for (const char* key : {"sid", "alpha", "target_alpha"})
    if (!body.contains(key) || !body[key].is_string()) return fail(422, std::string("missing string '") + key + "'");
  if (!body.contains("selection") || !body["selection"].is_array()) return fail(422, "missing array 'selection'");

  auto slot = find(body["sid"].get<std::string>());
  if (!slot) return fail(404, "unknown session");
  std::shared_lock lock(slot->mu);
  const Session& s = slot->session;
  try {
    std::set<VertexId> selection;
    for (const auto& v : body["selection"]) {
      if (!v.is_string()) throw InvalidArgument("selection entries must be strings");
      selection.insert(v.get<VertexId>());
    }
    const auto alpha = body["alpha"].get<TypeName>();
    const auto target = body["target_alpha"].get<TypeName>();
    check_navigable(s, target);
    const auto result = dataedron::navigate(s.corpus, session_facet(s, alpha), selection, target);
    json j = to_json(result.facet);
    j["S_A"] = result.sub_search;
    return {200, j};
  } catch (const Error& e) {
    return fail(422, e.what());
  }
}

ServiceResponse Service::history(const std::string& sid) {
  auto slot = find(sid);
  if (!slot) return fail(404, "unknown session");
  std::shared_lock lock(slot->mu);
  return {200, to_json(slot->session.history)};
}

ServiceResponse Service::merge_history(const json& body) {
  if (!body.is_object() || !body.contains("sid") || !body["sid"].is_string() || !body.contains("other_sid") ||
      !body["other_sid"].is_string())
    return fail(422, "body must contain string 'sid' and 'other_sid'");
  auto target = find(body["sid"].get<std::string>());
  auto other = find(body["other_sid"].get<std::string>());
  if (!target || !other) return fail(404, "unknown session");

  QueryHistory merged;
  if (target == other) {
    std::unique_lock lock(target->mu);
    merged = history_merge(target->session.history, target->session.history);
    target->session.history = merged;
    target->session.updated = options_.wall_clock();
    store_.save(target->session);
  } else {
    // lock both sessions in id order
    std::unique_lock<std::shared_mutex> target_lock(target->mu, std::defer_lock);
    std::shared_lock<std::shared_mutex> other_lock(other->mu, std::defer_lock);
    if (body["sid"].get<std::string>() < body["other_sid"].get<std::string>()) {
      target_lock.lock();
      other_lock.lock();
    } else {
      other_lock.lock();
      target_lock.lock();
    }
    merged = history_merge(target->session.history, other->session.history);
    target->session.history = merged;
    target->session.updated = options_.wall_clock();
    store_.save(target->session);
  }
  return {200, to_json(merged)};
}

void Service::bind(httplib::Server& server) {
  auto reply = [](httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json; charset=utf-8");
  };
  auto parse_body = [](const httplib::Request& req) -> std::optional<json> {
    try {
      return json::parse(req.body);
    } catch (const json::parse_error&) {
      return std::nullopt;
    }
  };

  server.Post("/search", [=, this](const httplib::Request& req, httplib::Response& res) {
    auto body = parse_body(req);
    reply(res, body ? search(*body) : fail(400, "invalid JSON body"));
  });
  server.Get(R"(/session/([^/]+))", [=, this](const httplib::Request& req, httplib::Response& res) {
    reply(res, session(req.matches[1]));
  });
  server.Get(R"(/facet/([^/]+)/([^/]+))", [=, this](const httplib::Request& req, httplib::Response& res) {
    reply(res, facet(req.matches[1], req.matches[2]));
  });
  server.Get(R"(/layout/([^/]+)/([^/]+))", [=, this](const httplib::Request& req, httplib::Response& res) {
    double t_min = 1.0, t_max = 8.0;
    try {
      if (req.has_param("t_min")) t_min = std::stod(req.get_param_value("t_min"));
      if (req.has_param("t_max")) t_max = std::stod(req.get_param_value("t_max"));
    } catch (const std::exception&) {
      return reply(res, fail(422, "t_min and t_max must be numbers"));
    }
    reply(res, layout(req.matches[1], req.matches[2], t_min, t_max));
  });
  server.Post("/navigate", [=, this](const httplib::Request& req, httplib::Response& res) {
    auto body = parse_body(req);
    reply(res, body ? navigate(*body) : fail(400, "invalid JSON body"));
  });
  server.Get(R"(/history/([^/]+))", [=, this](const httplib::Request& req, httplib::Response& res) {
    reply(res, history(req.matches[1]));
  });
  server.Post("/history/merge", [=, this](const httplib::Request& req, httplib::Response& res) {
    auto body = parse_body(req);
    reply(res, body ? merge_history(*body) : fail(400, "invalid JSON body"));
  });
}

}  // namespace dataedron
