// One line per acceptance criterion: PASS or FAIL, the criterion, and the
// measured evidence. Exits non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "dataedron/arxiv.hpp"
#include "dataedron/error.hpp"
#include "dataedron/facet.hpp"
#include "dataedron/keywords.hpp"
#include "dataedron/query.hpp"
#include "dataedron/service.hpp"
#include "oracle.hpp"

namespace fs = std::filesystem;
using namespace dataedron;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

Multiset random_mset(std::mt19937_64& rng) {
  static const double mults[] = {0.25, 0.5, 1.0, 2.0, 3.0};
  std::uniform_int_distribution<int> size(0, 5), elem(0, 7), mult(0, 4);
  Multiset::Entries e;
  for (int i = size(rng); i > 0; --i) e["x" + std::to_string(elem(rng))] += mults[mult(rng)];
  return Multiset(e);
}

Outcome multiset_algebra() {
  std::mt19937_64 rng(1);
  const auto start = std::chrono::steady_clock::now();
  int failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_mset(rng), b = random_mset(rng), c = random_mset(rng);
    failures += !(additive_union(a, b) == additive_union(b, a));
    failures += !(additive_union(additive_union(a, b), c) == additive_union(a, additive_union(b, c)));
    failures += !(additive_union(a, Multiset()) == a);
    auto su = a.support();
    for (const auto& x : b.support()) su.insert(x);
    failures += !(additive_union(a, b).support() == su);
    failures += !additive_union(Multiset::counting(a.support()), Multiset::counting(b.support())).is_natural();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {failures == 0 && secs < 1.0,
          "1000 cases, " + std::to_string(failures) + " law violations, " + std::to_string(secs) + "s"};
}

Outcome support_laws() {
  HbGraph h1({"a", "b"});
  h1.add_edge("e1", {{"a", 2}, {"b", 1}});
  h1.add_edge("e2", {{"a", 1}, {"b", 5}});
  HbGraph h2({"a", "b"});
  h2.add_edge("e1", {{"a", 7}, {"b", 0.5}});
  const auto s1 = support_hypergraph(h1), s1b = support_hypergraph(h1), s2 = support_hypergraph(h2);
  const bool deterministic = to_json(s1.hypergraph) == to_json(s1b.hypergraph) && s1.edge_map == s1b.edge_map;
  const bool collapse = s1.hypergraph.edge_count() == 1 && s1.edge_map.at("e1") == s1.edge_map.at("e2");
  const bool witness = !(h1 == h2) && s1.hypergraph == s2.hypergraph &&
                       s2.hypergraph.edge("e1") == Multiset({{"a", 1}, {"b", 1}});
  return {deterministic && collapse && witness, "deterministic=" + std::to_string(deterministic) +
                                                    " collapse=" + std::to_string(collapse) +
                                                    " non-injective witness=" + std::to_string(witness)};
}

Outcome facet_oracle() {
  std::mt19937_64 rng(42);
  int corpora = 0, facets = 0, mismatches = 0, weight_violations = 0;
  for (; corpora < 600; ++corpora) {
    const auto w = oracle::random_world(rng);
    const auto c = oracle::to_corpus(w);
    const auto search = oracle::random_search(w, rng);
    for (const auto& alpha : w.types)
      for (const auto& rho : w.types) {
        if (alpha == rho) continue;
        ++facets;
        const auto want = oracle::raw(w, search, alpha, rho);
        const auto raw = raw_facet(c, search, alpha, rho);
        bool ok = raw.hbgraph.vertices() == want.vertices && raw.refs_of == want.refs &&
                  raw.hbgraph.edge_count() == want.edges.size();
        for (const auto& [s, e] : want.edges) ok = ok && raw.hbgraph.has_edge(s) && raw.hbgraph.edge(s).entries() == e;

        const auto red = reduce_facet(raw);
        const auto groups = oracle::reduce(want);
        ok = ok && red.whbgraph.base().edge_count() == groups.size();
        double total = 0;
        for (const auto& g : groups) {
          const auto& id = *g.cls.begin();
          ok = ok && red.classes.count(id) && red.classes.at(id) == g.cls &&
               red.whbgraph.base().edge(id).entries() == g.edge && red.whbgraph.weight(id) == double(g.cls.size());
        }
        for (const auto& [id, wt] : red.whbgraph.weights()) total += wt;
        weight_violations += total != double(sigma_rho(c, search, rho).sigma.size());
        mismatches += !ok;
      }
  }
  return {mismatches == 0 && weight_violations == 0,
          std::to_string(corpora) + " corpora, " + std::to_string(facets) + " facets, " + std::to_string(mismatches) +
              " mismatches, weight-sum violations " + std::to_string(weight_violations)};
}

// Closure compares hb-edges, weights and classes. It needs every source hb-edge
// to be non-empty: an empty edge meets no selection, so its reference value is
// unreachable by construction. Vertex sets may differ through entities without
// a reference value, which S_A never contains; those differences are counted.
Outcome navigation_closure() {
  std::mt19937_64 rng(43);
  int eligible_corpora = 0, excluded = 0, checks = 0, closure_fail = 0, vertex_diff = 0, mono_checks = 0, mono_fail = 0;
  while (eligible_corpora < 500) {
    const auto w = oracle::random_world(rng);
    const auto c = oracle::to_corpus(w);
    const auto search = oracle::random_search(w, rng);
    bool counted = false;
    for (const auto& alpha : w.types)
      for (const auto& rho : w.types) {
        if (alpha == rho) continue;
        const auto raw = raw_facet(c, search, alpha, rho);
        if (!raw.empty_edges.empty()) {
          ++excluded;
          continue;
        }
        const auto src = reduce_facet(raw);
        const auto& verts = src.whbgraph.base().vertices();
        if (verts.empty()) continue;
        if (!counted) ++eligible_corpora, counted = true;
        for (const auto& target : w.types) {
          if (target == rho) continue;
          ++checks;
          const auto nav = navigate(c, src, verts, target);
          const auto direct = reduce_facet(raw_facet(c, search, target, rho));
          const auto a = to_json(nav.facet), b = to_json(direct);
          closure_fail += a["hbgraph"]["edges"] != b["hbgraph"]["edges"] || a["weights"] != b["weights"] ||
                          a["classes"] != b["classes"];
          vertex_diff += a["hbgraph"]["vertices"] != b["hbgraph"]["vertices"];

          std::vector<std::string> vs(verts.begin(), verts.end());
          std::shuffle(vs.begin(), vs.end(), rng);
          std::uniform_int_distribution<std::size_t> cut(1, vs.size());
          const std::size_t k1 = cut(rng);
          const std::size_t k2 = std::uniform_int_distribution<std::size_t>(k1, vs.size())(rng);
          const auto small = navigate(c, src, {vs.begin(), vs.begin() + k1}, target).sub_search;
          const auto large = navigate(c, src, {vs.begin(), vs.begin() + k2}, target).sub_search;
          ++mono_checks;
          mono_fail += !std::includes(large.begin(), large.end(), small.begin(), small.end());
        }
      }
  }
  return {closure_fail == 0 && mono_fail == 0,
          std::to_string(eligible_corpora) + " corpora, " + std::to_string(checks) + " closure checks (" +
              std::to_string(closure_fail) + " failed), " + std::to_string(mono_checks) + " monotonicity checks (" +
              std::to_string(mono_fail) + " failed), " + std::to_string(excluded) +
              " facets with empty hb-edges excluded, " +
              std::to_string(vertex_diff) + " vertex sets differing by reference-less entities"};
}

Outcome desk_fixtures() {
  const auto d0 = oracle::to_corpus(oracle::d0());
  const auto d1 = oracle::to_corpus(oracle::d1());
  const SearchSet all{"r1", "r2", "r3"};
  auto facet = [](const Corpus& c, const SearchSet& s, const std::string& a, const std::string& r) {
    return to_json(reduce_facet(raw_facet(c, s, a, r))).dump();
  };
  const std::vector<std::pair<std::string, std::string>> cases{
      {facet(d0, all, "auth", "cat"),
       R"({"alpha":"auth","classes":{"cs.DS":["cs.DS"],"cs.IR":["cs.IR"]},"hbgraph":{"edges":[)"
       R"({"entries":{"Alice":2.0,"Bob":1.0,"Carol":1.0},"id":"cs.DS"},)"
       R"({"entries":{"Alice":1.0,"Carol":1.0,"Dave":1.0},"id":"cs.IR"}],"vertices":["Alice","Bob","Carol","Dave"]},)"
       R"("refs":{"cs.DS":["r1","r2"],"cs.IR":["r2","r3"]},"rho":"cat","weights":{"cs.DS":1.0,"cs.IR":1.0}})"},
      {facet(d0, all, "kw", "cat"),
       R"({"alpha":"kw","classes":{"cs.DS":["cs.DS"],"cs.IR":["cs.IR"]},"hbgraph":{"edges":[)"
       R"({"entries":{"graph":3.0,"index":1.0,"search":1.0},"id":"cs.DS"},)"
       R"({"entries":{"graph":1.0,"index":1.0,"search":2.0},"id":"cs.IR"}],"vertices":["graph","index","search"]},)"
       R"("refs":{"cs.DS":["r1","r2"],"cs.IR":["r2","r3"]},"rho":"cat","weights":{"cs.DS":1.0,"cs.IR":1.0}})"},
      {facet(d0, {"r3"}, "auth", "cat"),
       R"({"alpha":"auth","classes":{"cs.IR":["cs.IR"]},"hbgraph":{"edges":[{"entries":{"Dave":1.0},"id":"cs.IR"}],)"
       R"("vertices":["Dave"]},"refs":{"cs.IR":["r3"]},"rho":"cat","weights":{"cs.IR":1.0}})"},
      {facet(d1, {"r1", "r2"}, "auth", "kw"),
       R"({"alpha":"auth","classes":{"k1":["k1","k2","k3"]},"hbgraph":{"edges":[{"entries":{"A":1.0,"B":1.0},"id":"k1"}],)"
       R"("vertices":["A","B"]},"refs":{"k1":["r1"],"k2":["r1"],"k3":["r2"]},"rho":"kw","weights":{"k1":3.0}})"},
      {to_json(navigate(d0, reduce_facet(raw_facet(d0, all, "auth", "cat")), {"Dave"}, "kw").facet).dump(),
       R"({"alpha":"kw","classes":{"cs.IR":["cs.IR"]},"hbgraph":{"edges":[)"
       R"({"entries":{"graph":1.0,"index":1.0,"search":2.0},"id":"cs.IR"}],"vertices":["graph","index","search"]},)"
       R"("refs":{"cs.IR":["r2","r3"]},"rho":"cat","weights":{"cs.IR":1.0}})"},
      {to_json(navigate(d0, reduce_facet(raw_facet(d0, all, "auth", "cat")), {"Bob"}, "auth").facet).dump(),
       R"({"alpha":"auth","classes":{"cs.DS":["cs.DS"]},"hbgraph":{"edges":[)"
       R"({"entries":{"Alice":2.0,"Bob":1.0,"Carol":1.0},"id":"cs.DS"}],"vertices":["Alice","Bob","Carol"]},)"
       R"("refs":{"cs.DS":["r1","r2"]},"rho":"cat","weights":{"cs.DS":1.0}})"},
      {reference_facet_json(reference_facet(d0, all, "cat"), sigma_rho(d0, all, "cat"), "cat").dump(),
       R"({"alpha":"cat","classes":{"cs.DS":["cs.DS"],"cs.IR":["cs.IR"]},"hbgraph":{"edges":[)"
       R"({"entries":{"cs.DS":2.0},"id":"cs.DS"},{"entries":{"cs.IR":2.0},"id":"cs.IR"}],"vertices":["cs.DS","cs.IR"]},)"
       R"("refs":{"cs.DS":["r1","r2"],"cs.IR":["r2","r3"]},"rho":"cat","weights":{"cs.DS":1.0,"cs.IR":1.0}})"},
  };
  int bad = 0;
  for (const auto& [got, want] : cases)
    if (got != want) {
      ++bad;
      std::cerr << "  got  " << got << "\n  want " << want << "\n";
    }
  return {bad == 0, std::to_string(cases.size()) + " fixtures, " + std::to_string(bad) + " differ"};
}

Outcome tf_idf_oracle() {
  const std::vector<NounDocument> docs{
      {"d1", {"graph", "graph", "search"}}, {"d2", {"graph", "index"}}, {"d3", {"search", "search"}}};
  const auto s = tf_idf_from_nouns(docs);
  const double g = s[0].scores.at("graph"), idx = s[1].scores.at("index"), se = s[0].scores.at("search");
  const double dg = std::abs(g - 2.0 / 3.0 * std::log(1.5)), di = std::abs(idx - 0.5 * std::log(3.0)),
               ds = std::abs(se - 1.0 / 3.0 * std::log(1.5));
  const auto u = tf_idf_from_nouns({{"a", {"x", "y"}}, {"b", {"x", "z"}}, {"c", {"x"}}});
  const bool zeros = u[0].scores.at("x") == 0.0 && u[1].scores.at("x") == 0.0 && u[2].scores.at("x") == 0.0;
  std::ostringstream detail;
  detail << "|graph,d1 err|=" << dg << " |index,d2 err|=" << di << " |search,d1 err|=" << ds
         << " ubiquitous zero=" << zeros;
  return {dg <= 1e-9 && di <= 1e-9 && ds <= 1e-9 && zeros, detail.str()};
}

Query random_query(std::mt19937_64& rng, int depth) {
  static const char* words[] = {"graph", "mining", "search", "deep", "learning", "x1", "a-b", "c++"};
  std::uniform_int_distribution<int> kind(0, depth > 0 ? 5 : 1), word(0, 7), len(1, 3);
  switch (kind(rng)) {
    case 0:
      return Query::term(words[word(rng)]);
    case 1: {
      std::vector<std::string> ws;
      for (int i = len(rng); i > 0; --i) ws.push_back(words[word(rng)]);
      return Query::phrase(ws);
    }
    case 2:
      return Query::conj(random_query(rng, depth - 1), random_query(rng, depth - 1));
    case 3:
      return Query::disj(random_query(rng, depth - 1), random_query(rng, depth - 1));
    case 4:
      return Query::negate(random_query(rng, depth - 1));
    default:
      return Query::group(random_query(rng, depth - 1));
  }
}

Outcome parser() {
  std::mt19937_64 rng(5);
  int round_trip_fail = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto q = random_query(rng, 4);
    try {
      round_trip_fail += !(normalize(parse_query(print(q))) == normalize(q));
    } catch (const Error&) {
      ++round_trip_fail;
    }
  }
  const auto t = [](const char* w) { return Query::term(w); };
  int precedence_fail = 0;
  precedence_fail += !(parse_query("graph AND (mining OR search)") ==
                       Query::conj(t("graph"), Query::group(Query::disj(t("mining"), t("search")))));
  precedence_fail += !(parse_query("NOT a OR b") == Query::disj(Query::negate(t("a")), t("b")));
  precedence_fail += !(parse_query("a OR b AND c") == Query::disj(t("a"), Query::conj(t("b"), t("c"))));
  precedence_fail += !(print(parse_query("NOT a AND b")) == "((NOT a) AND b)");

  const std::vector<std::pair<std::string, std::size_t>> errors{
      {"a AND", 5}, {"", 0}, {"OR a", 0}, {"a OR OR b", 5}, {"(a OR b", 0}, {"a OR b)", 6},
      {"a b", 2},   {"a AND \"deep", 6}, {"a AND \"\"", 6}, {"()", 1}, {"NOT", 3}};
  int error_fail = 0;
  for (const auto& [text, offset] : errors) {
    try {
      parse_query(text);
      ++error_fail;
    } catch (const QueryParseError& e) {
      error_fail += e.offset() != offset;
    }
  }
  return {round_trip_fail + precedence_fail + error_fail == 0,
          "1000 round trips (" + std::to_string(round_trip_fail) + " failed), precedence fixtures failed " +
              std::to_string(precedence_fail) + ", " + std::to_string(errors.size()) + " error cases (" +
              std::to_string(error_fail) + " wrong)"};
}

Outcome ingestion() {
  const fs::path fixtures = fs::path(DATAEDRON_FIXTURES) / "arxiv";
  auto run = [&] {
    arxiv::Client client(std::make_shared<arxiv::FixtureTransport>(fixtures), std::make_shared<arxiv::ManualClock>());
    const auto entries = client.fetch("all:graph", 50);
    const auto corpus = arxiv::to_corpus(entries, 10);
    std::string out = to_json(corpus).dump();
    for (const auto* a : {"authors", "keywords", "categories"})
      out += to_json(reduce_facet(raw_facet(corpus, corpus.references(), a, "pubid"))).dump();
    return out;
  };
  const bool identical = run() == run();

  auto clock = std::make_shared<arxiv::ManualClock>();
  arxiv::Client client(std::make_shared<arxiv::FixtureTransport>(fixtures), clock);
  for (int i = 0; i < 6; ++i) {
    client.fetch("all:graph", 3);
    clock->advance(std::chrono::milliseconds(500 * i));
  }
  auto min_gap = std::chrono::steady_clock::duration::max();
  const auto& log = client.request_log();
  for (std::size_t i = 1; i < log.size(); ++i) min_gap = std::min(min_gap, log[i] - log[i - 1]);
  const double gap = std::chrono::duration<double>(min_gap).count();
  return {identical && gap >= 3.0,
          "replay identical=" + std::to_string(identical) + ", min request gap " + std::to_string(gap) + "s"};
}

Outcome service_persistence() {
  const fs::path dir = fs::temp_directory_path() / "dataedron-acceptance";
  fs::remove_all(dir);
  auto options = [&] {
    ServiceOptions o;
    o.data_dir = dir;
    o.transport = std::make_shared<arxiv::FixtureTransport>(fs::path(DATAEDRON_FIXTURES) / "arxiv");
    o.clock = std::make_shared<arxiv::ManualClock>();
    o.wall_clock = [] { return std::int64_t{1700000000}; };
    return o;
  };
  const std::vector<std::string> alphas{"pubid", "authors", "keywords", "categories"};
  std::vector<std::string> before, after;
  std::string sid;
  {
    Service svc(options());
    const auto r = svc.search({{"query", "graph OR search"}, {"rho", "categories"}});
    if (r.status != 200) return {false, "search failed: " + r.body.dump()};
    sid = r.body["session_id"].get<std::string>();
    for (const auto& a : alphas) before.push_back(svc.facet(sid, a).body.dump());
  }
  {
    Service svc(options());
    for (const auto& a : alphas) after.push_back(svc.facet(sid, a).body.dump());
  }
  fs::remove_all(dir);
  const bool same = before == after;
  return {same, std::to_string(alphas.size()) + " facet responses byte-identical after restart=" +
                    std::to_string(same) + ", offline fixture transport"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"multiset algebra", multiset_algebra},
      {"support-hypergraph laws", support_laws},
      {"facet oracle equivalence", facet_oracle},
      {"navigation closure and monotonicity", navigation_closure},
      {"D0/D1 facet JSON fixtures", desk_fixtures},
      {"TF-IDF oracle", tf_idf_oracle},
      {"query parser", parser},
      {"ingestion determinism and rate limit", ingestion},
      {"service persistence", service_persistence},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << "\n";
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
