#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dataedron/arxiv.hpp"
#include "dataedron/error.hpp"
#include "dataedron/facet.hpp"
#include "dataedron/hbgraph.hpp"
#include "dataedron/keywords.hpp"
#include "dataedron/multiset.hpp"
#include "dataedron/query.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

py::object to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null:
      return py::none();
    case json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case json::value_t::number_integer:
      return py::int_(j.get<std::int64_t>());
    case json::value_t::number_unsigned:
      return py::int_(j.get<std::uint64_t>());
    case json::value_t::number_float:
      return py::float_(j.get<double>());
    case json::value_t::string:
      return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list out;
      for (const auto& x : j) out.append(to_py(x));
      return out;
    }
    default: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = to_py(v);
      return out;
    }
  }
}

json from_py(const py::handle& o) {
  if (o.is_none()) return nullptr;
  if (py::isinstance<py::bool_>(o)) return o.cast<bool>();
  if (py::isinstance<py::int_>(o)) return o.cast<std::int64_t>();
  if (py::isinstance<py::float_>(o)) return o.cast<double>();
  if (py::isinstance<py::str>(o)) return o.cast<std::string>();
  if (py::isinstance<py::dict>(o)) {
    json out = json::object();
    for (const auto& [k, v] : o.cast<py::dict>()) out[py::str(k).cast<std::string>()] = from_py(v);
    return out;
  }
  if (py::isinstance<py::list>(o) || py::isinstance<py::tuple>(o) || py::isinstance<py::set>(o)) {
    json out = json::array();
    for (const auto& v : o) out.push_back(from_py(v));
    return out;
  }
  throw py::type_error("unsupported value for conversion to JSON");
}

dataedron::Corpus corpus_arg(const py::dict& d) { return dataedron::corpus_from_json(from_py(d)); }

dataedron::HbGraph hbgraph_arg(const py::dict& d) { return dataedron::hbgraph_from_json(from_py(d)); }

}  // namespace

PYBIND11_MODULE(_dataedron, m) {
  m.doc() = "Hb-graph facets, navigation and boolean queries";

  static PyObject* parse_error = PyErr_NewException("dataedron.QueryParseError", PyExc_ValueError, nullptr);
  static PyObject* unsupported = PyErr_NewException("dataedron.UnsupportedQuery", PyExc_ValueError, nullptr);
  m.attr("QueryParseError") = py::handle(parse_error);
  m.attr("UnsupportedQuery") = py::handle(unsupported);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const dataedron::QueryParseError& e) {
      py::object err = py::reinterpret_steal<py::object>(PyObject_CallFunction(parse_error, "s", e.what()));
      err.attr("offset") = e.offset();
      PyErr_SetObject(parse_error, err.ptr());
    } catch (const dataedron::UnsupportedQuery& e) {
      PyErr_SetString(unsupported, e.what());
    } catch (const dataedron::InvalidArgument& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const dataedron::Error& e) {
      PyErr_SetString(PyExc_RuntimeError, e.what());
    }
  });

  py::class_<dataedron::Multiset>(m, "Multiset")
      .def(py::init([](const std::map<std::string, double>& entries) { return dataedron::Multiset(entries); }),
           py::arg("entries") = std::map<std::string, double>{})
      .def("multiplicity", &dataedron::Multiset::multiplicity)
      .def("support", &dataedron::Multiset::support)
      .def("is_natural", &dataedron::Multiset::is_natural)
      .def_property_readonly("entries", &dataedron::Multiset::entries)
      .def("__eq__", [](const dataedron::Multiset& a, const dataedron::Multiset& b) { return a == b; })
      .def("__len__", &dataedron::Multiset::support_size)
      .def("__repr__", [](const dataedron::Multiset& ms) { return "Multiset(" + dataedron::entries_to_json(ms).dump() + ")"; });

  m.def("additive_union", &dataedron::additive_union);

  m.def("support_hypergraph", [](const py::dict& h) {
    auto s = dataedron::support_hypergraph(hbgraph_arg(h));
    json out = dataedron::to_json(s.hypergraph);
    out["edge_map"] = s.edge_map;
    return to_py(out);
  });
  m.def("connected_components", [](const py::dict& h) { return dataedron::connected_components(hbgraph_arg(h)); });
  m.def(
      "extra_node_layout",
      [](const py::dict& h, double t_min, double t_max) {
        return to_py(dataedron::to_json(dataedron::extra_node_layout(hbgraph_arg(h), t_min, t_max)));
      },
      py::arg("hbgraph"), py::arg("t_min") = 1.0, py::arg("t_max") = 8.0);

  m.def("raw_facet", [](const py::dict& corpus, const dataedron::SearchSet& search, const std::string& alpha,
                        const std::string& rho) {
    const auto raw = dataedron::raw_facet(corpus_arg(corpus), search, alpha, rho);
    json refs = json::object();
    for (const auto& [s, rs] : raw.refs_of) refs[s] = rs;
    return to_py({{"alpha", raw.alpha},
                  {"rho", raw.rho},
                  {"hbgraph", dataedron::to_json(raw.hbgraph)},
                  {"sigma", raw.sigma},
                  {"refs", refs},
                  {"orphans", raw.orphans},
                  {"empty_edges", raw.empty_edges}});
  });
  m.def("reduce_facet", [](const py::dict& corpus, const dataedron::SearchSet& search, const std::string& alpha,
                           const std::string& rho) {
    return to_py(dataedron::to_json(dataedron::reduce_facet(dataedron::raw_facet(corpus_arg(corpus), search, alpha, rho))));
  });
  m.def("navigate", [](const py::dict& corpus, const dataedron::SearchSet& search, const std::string& alpha,
                       const std::string& rho, const std::set<std::string>& selection, const std::string& target) {
    const auto c = corpus_arg(corpus);
    const auto facet = dataedron::reduce_facet(dataedron::raw_facet(c, search, alpha, rho));
    const auto result = dataedron::navigate(c, facet, selection, target);
    json out = dataedron::to_json(result.facet);
    out["S_A"] = result.sub_search;
    return to_py(out);
  });
  m.def("reference_facet", [](const py::dict& corpus, const dataedron::SearchSet& search, const std::string& rho) {
    return to_py(dataedron::to_json(dataedron::reference_facet(corpus_arg(corpus), search, rho)));
  });

  m.def("extract_nouns", [](const std::string& text) { return dataedron::extract_nouns(text); });
  m.def("tf_idf", [](const std::vector<std::pair<std::string, std::string>>& docs) {
    std::vector<dataedron::Document> corpus;
    for (const auto& [id, text] : docs) corpus.push_back({id, text});
    std::map<std::string, std::map<std::string, double>> out;
    for (auto& st : dataedron::tf_idf(corpus)) out.emplace(st.id, std::move(st.scores));
    return out;
  });
  m.def("top_w", [](const std::map<std::string, double>& scores, std::size_t w) {
    return dataedron::top_w({"", scores}, w);
  });
  m.def("keyword_hbgraph", [](const std::vector<std::pair<std::string, std::string>>& docs, std::size_t w) {
    std::vector<dataedron::Document> corpus;
    for (const auto& [id, text] : docs) corpus.push_back({id, text});
    return to_py(dataedron::to_json(dataedron::keyword_hbgraph(corpus, w)));
  });

  m.def("parse_query", [](const std::string& text) { return dataedron::print(dataedron::parse_query(text)); },
        "Parse a boolean query and return its canonical form.");
  m.def("to_external_query",
        [](const std::string& text) { return dataedron::to_external_query(dataedron::parse_query(text)); });

  m.def("parse_feed", [](const py::bytes& atom) {
    const auto feed = dataedron::arxiv::parse_feed(std::string(atom));
    json entries = json::array();
    for (const auto& e : feed.entries) entries.push_back(dataedron::arxiv::to_json(e));
    return to_py(entries);
  });
}
