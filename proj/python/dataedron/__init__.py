"""Hb-graph facets, navigation and boolean queries over Arxiv search results."""

from ._dataedron import (  # noqa: F401
    Multiset,
    QueryParseError,
    UnsupportedQuery,
    additive_union,
    connected_components,
    extract_nouns,
    extra_node_layout,
    keyword_hbgraph,
    navigate,
    parse_feed,
    parse_query,
    raw_facet,
    reduce_facet,
    reference_facet,
    support_hypergraph,
    tf_idf,
    to_external_query,
    top_w,
)

__all__ = [name for name in dir() if not name.startswith("_")]
