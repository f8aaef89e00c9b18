#include <random>

#include <gtest/gtest.h>

#include "dataedron/error.hpp"
#include "dataedron/facet.hpp"
#include "oracle.hpp"

using dataedron::Multiset;
using Refs = std::set<std::string>;

namespace {

const dataedron::SearchSet kAll{"r1", "r2", "r3"};

dataedron::ReducedFacet facet(const dataedron::Corpus& c, const dataedron::SearchSet& s, const std::string& alpha,
                              const std::string& rho) {
  return reduce_facet(raw_facet(c, s, alpha, rho));
}

}  // namespace

TEST(SigmaRho, D0) {
  const auto c = oracle::to_corpus(oracle::d0());
  auto sr = sigma_rho(c, kAll, "cat");
  EXPECT_EQ(sr.sigma, (Refs{"cs.DS", "cs.IR"}));
  EXPECT_EQ(sr.refs_of.at("cs.DS"), (Refs{"r1", "r2"}));
  EXPECT_EQ(sr.refs_of.at("cs.IR"), (Refs{"r2", "r3"}));
  sr = sigma_rho(c, {"r3"}, "cat");
  EXPECT_EQ(sr.sigma, (Refs{"cs.IR"}));
  EXPECT_EQ(sr.refs_of.at("cs.IR"), (Refs{"r3"}));
  EXPECT_TRUE(sigma_rho(c, {}, "cat").sigma.empty());
}

TEST(RawFacet, D0) {
  const auto c = oracle::to_corpus(oracle::d0());
  auto raw = raw_facet(c, kAll, "auth", "cat");
  EXPECT_EQ(raw.hbgraph.edge("cs.DS"), Multiset({{"Alice", 2}, {"Bob", 1}, {"Carol", 1}}));
  EXPECT_EQ(raw.hbgraph.edge("cs.IR"), Multiset({{"Alice", 1}, {"Carol", 1}, {"Dave", 1}}));
  raw = raw_facet(c, kAll, "kw", "cat");
  EXPECT_EQ(raw.hbgraph.edge("cs.DS"), Multiset({{"graph", 3}, {"search", 1}, {"index", 1}}));
  EXPECT_EQ(raw.hbgraph.edge("cs.IR"), Multiset({{"graph", 1}, {"index", 1}, {"search", 2}}));
  raw = raw_facet(c, {"r3"}, "auth", "cat");
  ASSERT_EQ(raw.hbgraph.edge_count(), 1u);
  EXPECT_EQ(raw.hbgraph.edge("cs.IR"), Multiset({{"Dave", 1}}));
}

TEST(RawFacet, Errors) {
  const auto c = oracle::to_corpus(oracle::d0());
  EXPECT_THROW(raw_facet(c, kAll, "cat", "cat"), dataedron::InvalidArgument);
  EXPECT_THROW(raw_facet(c, kAll, "nope", "cat"), dataedron::InvalidArgument);
  EXPECT_THROW(raw_facet(c, {"r9"}, "auth", "cat"), dataedron::InvalidArgument);
}

TEST(ReduceFacet, D1) {
  const auto c = oracle::to_corpus(oracle::d1());
  const auto raw = raw_facet(c, {"r1", "r2"}, "auth", "kw");
  for (const auto* k : {"k1", "k2", "k3"}) EXPECT_EQ(raw.hbgraph.edge(k), Multiset({{"A", 1}, {"B", 1}}));
  const auto red = reduce_facet(raw);
  ASSERT_EQ(red.whbgraph.base().edge_count(), 1u);
  EXPECT_EQ(red.whbgraph.weight("k1"), 3);
  EXPECT_EQ(red.classes.at("k1"), (Refs{"k1", "k2", "k3"}));
  EXPECT_EQ(red.references_of("k1"), (Refs{"r1", "r2"}));
}

TEST(ReduceFacet, DistinctAndEmpty) {
  const auto c = oracle::to_corpus(oracle::d0());
  const auto red = facet(c, kAll, "auth", "cat");
  EXPECT_EQ(red.whbgraph.weight("cs.DS"), 1);
  EXPECT_EQ(red.whbgraph.weight("cs.IR"), 1);
  const auto none = facet(c, {}, "auth", "cat");
  EXPECT_EQ(none.whbgraph.base().edge_count(), 0u);
}

TEST(Navigate, D0) {
  const auto c = oracle::to_corpus(oracle::d0());
  const auto src = facet(c, kAll, "auth", "cat");

  auto nav = navigate(c, src, {"Dave"}, "kw");
  EXPECT_EQ(nav.selected_values, (Refs{"cs.IR"}));
  EXPECT_EQ(nav.sub_search, (Refs{"r2", "r3"}));
  ASSERT_EQ(nav.facet.whbgraph.base().edge_count(), 1u);
  EXPECT_EQ(nav.facet.whbgraph.base().edge("cs.IR"), Multiset({{"graph", 1}, {"index", 1}, {"search", 2}}));
  EXPECT_EQ(nav.facet.whbgraph.weight("cs.IR"), 1);

  nav = navigate(c, src, {"Bob"}, "auth");
  ASSERT_EQ(nav.facet.whbgraph.base().edge_count(), 1u);
  EXPECT_EQ(nav.facet.whbgraph.base().edge("cs.DS"), Multiset({{"Alice", 2}, {"Bob", 1}, {"Carol", 1}}));

  const std::set<std::string> all(src.whbgraph.base().vertices());
  EXPECT_EQ(to_json(navigate(c, src, all, "kw").facet), to_json(facet(c, kAll, "kw", "cat")));
}

TEST(Navigate, Errors) {
  const auto c = oracle::to_corpus(oracle::d0());
  const auto src = facet(c, kAll, "auth", "cat");
  EXPECT_THROW(navigate(c, src, {}, "kw"), dataedron::InvalidArgument);
  EXPECT_THROW(navigate(c, src, {"Zed"}, "kw"), dataedron::InvalidArgument);
  EXPECT_THROW(navigate(c, src, {"Dave"}, "nope"), dataedron::InvalidArgument);
  EXPECT_THROW(navigate(c, src, {"Dave"}, "cat"), dataedron::InvalidArgument);
}

// A reference value whose entities carry no alpha attribute gives an empty
// hb-edge. It meets no selection, so navigating with the full vertex set
// cannot reach it and the closure property holds only without empty edges.
TEST(Navigate, EmptyEdgeIsUnreachable) {
  const oracle::World w{{"a", "b"},
                        {{"r1", {{"a", {{"x", 1}}}, {"b", {{"s1", 1}}}}}, {"r2", {{"b", {{"s2", 1}}}}}}};
  const auto c = oracle::to_corpus(w);
  const auto raw = raw_facet(c, {"r1", "r2"}, "a", "b");
  EXPECT_EQ(raw.empty_edges, (Refs{"s2"}));
  const auto nav = navigate(c, reduce_facet(raw), {"x"}, "a");
  EXPECT_EQ(nav.sub_search, (Refs{"r1"}));
  EXPECT_FALSE(nav.facet.whbgraph.base().has_edge("s2"));
}

// An entity without a reference value contributes vertices to the direct
// facet but never belongs to S_A.
TEST(Navigate, OrphanVerticesStayOutOfSubSearch) {
  const oracle::World w{{"a", "b"},
                        {{"r1", {{"a", {{"x", 1}}}, {"b", {{"s1", 1}}}}}, {"r2", {{"a", {{"y", 1}}}}}}};
  const auto c = oracle::to_corpus(w);
  const auto src = facet(c, {"r1", "r2"}, "a", "b");
  EXPECT_EQ(src.orphans, (Refs{"r2"}));
  const auto nav = navigate(c, src, src.whbgraph.base().vertices(), "a");
  EXPECT_EQ(nav.sub_search, (Refs{"r1"}));
  EXPECT_EQ(nav.facet.whbgraph.base().vertices(), (Refs{"x"}));
  EXPECT_EQ(src.whbgraph.base().vertices(), (Refs{"x", "y"}));
  EXPECT_EQ(to_json(nav.facet)["hbgraph"]["edges"], to_json(src)["hbgraph"]["edges"]);
}

TEST(ReferenceFacet, D0) {
  const auto c = oracle::to_corpus(oracle::d0());
  auto ref = reference_facet(c, kAll, "cat");
  EXPECT_EQ(ref.base().edge("cs.DS"), Multiset({{"cs.DS", 2}}));
  EXPECT_EQ(ref.base().edge("cs.IR"), Multiset({{"cs.IR", 2}}));
  ref = reference_facet(c, {"r3"}, "cat");
  ASSERT_EQ(ref.base().edge_count(), 1u);
  EXPECT_EQ(ref.base().edge("cs.IR"), Multiset({{"cs.IR", 1}}));
  EXPECT_EQ(reference_facet(c, {}, "cat").base().edge_count(), 0u);
}

TEST(FacetJson, D0AuthCat) {
  const auto c = oracle::to_corpus(oracle::d0());
  EXPECT_EQ(to_json(facet(c, kAll, "auth", "cat")).dump(),
            R"({"alpha":"auth","classes":{"cs.DS":["cs.DS"],"cs.IR":["cs.IR"]},)"
            R"("hbgraph":{"edges":[{"entries":{"Alice":2.0,"Bob":1.0,"Carol":1.0},"id":"cs.DS"},)"
            R"({"entries":{"Alice":1.0,"Carol":1.0,"Dave":1.0},"id":"cs.IR"}],)"
            R"("vertices":["Alice","Bob","Carol","Dave"]},)"
            R"("refs":{"cs.DS":["r1","r2"],"cs.IR":["r2","r3"]},"rho":"cat","weights":{"cs.DS":1.0,"cs.IR":1.0}})");
}

TEST(FacetJson, CorpusRoundTrip) {
  const auto c = oracle::to_corpus(oracle::d0());
  EXPECT_EQ(to_json(dataedron::corpus_from_json(to_json(c))), to_json(c));
}

TEST(FacetProperty, MatchesOracle) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 600; ++i) {
    const auto w = oracle::random_world(rng);
    const auto c = oracle::to_corpus(w);
    const auto search = oracle::random_search(w, rng);
    for (const auto& alpha : w.types)
      for (const auto& rho : w.types) {
        if (alpha == rho) continue;
        const auto want = oracle::raw(w, search, alpha, rho);
        const auto raw = raw_facet(c, search, alpha, rho);
        ASSERT_EQ(raw.hbgraph.vertices(), want.vertices);
        ASSERT_EQ(raw.refs_of, want.refs);
        ASSERT_EQ(raw.hbgraph.edge_count(), want.edges.size());
        for (const auto& [s, e] : want.edges) ASSERT_EQ(raw.hbgraph.edge(s).entries(), e);

        const auto red = reduce_facet(raw);
        const auto groups = oracle::reduce(want);
        ASSERT_EQ(red.whbgraph.base().edge_count(), groups.size());
        double total = 0;
        for (const auto& g : groups) {
          const auto& id = *g.cls.begin();
          ASSERT_EQ(red.classes.at(id), g.cls);
          ASSERT_EQ(red.whbgraph.base().edge(id).entries(), g.edge);
          ASSERT_EQ(red.whbgraph.weight(id), static_cast<double>(g.cls.size()));
          total += red.whbgraph.weight(id);
        }
        ASSERT_EQ(total, static_cast<double>(want.edges.size()));
      }
  }
}
