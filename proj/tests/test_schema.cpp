#include <gtest/gtest.h>

#include "dataedron/error.hpp"
#include "dataedron/schema.hpp"

using dataedron::SchemaHypergraph;
using dataedron::TypeSet;

TEST(Schema, RejectsBadEdges) {
  EXPECT_THROW(SchemaHypergraph({"a"}, {{}}), dataedron::InvalidArgument);
  EXPECT_THROW(SchemaHypergraph({"a"}, {{"b"}}), dataedron::InvalidArgument);
}

TEST(Schema, Extract) {
  const SchemaHypergraph hx({"a", "b", "c"}, {{"a", "b"}, {"c"}});
  EXPECT_EQ(extract_schema(hx, {"a", "b", "c"}), hx);

  const SchemaHypergraph ext({"pubid", "title", "authors", "keywords"}, {{"pubid", "title", "authors", "keywords"}});
  EXPECT_EQ(extract_schema(ext, {"pubid", "authors", "keywords"}).edges(),
            (std::set<TypeSet>{{"pubid", "authors", "keywords"}}));

  const SchemaHypergraph two({"a", "b", "c", "d"}, {{"a", "b", "c"}, {"a", "b", "d"}});
  EXPECT_EQ(extract_schema(two, {"a", "b"}).edges(), (std::set<TypeSet>{{"a", "b"}}));
  EXPECT_THROW(extract_schema(two, {"z"}), dataedron::InvalidArgument);
}

TEST(Schema, Reachability) {
  const SchemaHypergraph connected({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  EXPECT_EQ(reachability(connected).edges(), (std::set<TypeSet>{{"a", "b", "c"}}));
  EXPECT_TRUE(is_ideal(reachability(connected)));

  const SchemaHypergraph split({"a", "b", "c", "d"}, {{"a", "b"}, {"c", "d"}});
  EXPECT_EQ(reachability(split).edges(), (std::set<TypeSet>{{"a", "b"}, {"c", "d"}}));
  EXPECT_FALSE(is_ideal(reachability(split)));

  const SchemaHypergraph iso({"a", "b", "t"}, {{"a", "b"}});
  EXPECT_TRUE(reachability(iso).edges().count({"t"}));
}

TEST(Schema, NavigationHyperedge) {
  const TypeSet er{"pubid", "authors", "keywords", "organisations", "country", "categories"};
  EXPECT_EQ(dataedron::navigation_hyperedge({er, er, "pubid"}),
            (TypeSet{"authors", "keywords", "organisations", "country", "categories"}));
  EXPECT_EQ(dataedron::navigation_hyperedge({er, er, "keywords"}),
            (TypeSet{"authors", "organisations", "country", "categories", "pubid"}));
  EXPECT_EQ(dataedron::navigation_hyperedge({{"a", "b"}, {"a"}, "a"}), (TypeSet{"b"}));
}

TEST(Schema, ContextInvariants) {
  EXPECT_THROW(dataedron::NavigationContext({"a", "b"}, {"a"}, "b"), dataedron::InvalidArgument);
  EXPECT_THROW(dataedron::NavigationContext({"a"}, {"a"}, "a"), dataedron::InvalidArgument);
  EXPECT_THROW(dataedron::NavigationContext({"a", "b"}, {"a", "c"}, "a"), dataedron::InvalidArgument);
}

TEST(Schema, ArxivConfig) {
  const auto cfg = dataedron::arxiv_schema();
  const auto ctx = cfg.context_for("pubid");
  EXPECT_EQ(dataedron::navigation_hyperedge(ctx), (TypeSet{"authors", "keywords", "categories"}));
  EXPECT_THROW(cfg.context_for("authors"), dataedron::InvalidArgument);
  const auto back = dataedron::schema_config_from_json(to_json(cfg));
  EXPECT_EQ(back.schema, cfg.schema);
  EXPECT_EQ(back.reference_candidates, cfg.reference_candidates);
}
