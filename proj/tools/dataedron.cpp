// dataedron: search the Arxiv export API, inspect facets and navigate between
// them, or run the HTTP service.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <httplib.h>

#include "dataedron/service.hpp"

namespace {

using dataedron::ServiceResponse;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;

std::string default_data_dir() {
  if (const char* env = std::getenv("DATAEDRON_DATA_DIR"); env && *env) return env;
  return "dataedron-data";
}

dataedron::ServiceOptions make_options(const std::string& data_dir, const std::string& offline) {
  dataedron::ServiceOptions opts;
  opts.data_dir = data_dir;
  if (!offline.empty()) {
    opts.transport = std::make_shared<dataedron::arxiv::FixtureTransport>(offline);
    opts.request_spacing = std::chrono::milliseconds(0);
  }
  return opts;
}

// 4xx caused by what the user typed are usage errors; everything else is a
// runtime failure.
int report(const ServiceResponse& r) {
  if (r.status == 200) return kOk;
  std::string msg = r.body.value("error", std::string("request failed"));
  if (r.body.contains("offset")) msg += " at offset " + std::to_string(r.body["offset"].get<std::size_t>());
  std::cerr << "error: " << msg << "\n";
  return (r.status == 400 || r.status == 422) ? kUsageError : kRuntimeError;
}

std::string truncate(const std::string& s, std::size_t width) {
  return s.size() <= width ? s : s.substr(0, width - 3) + "...";
}

void print_entries(const json& entries) {
  std::size_t i = 0;
  for (const auto& e : entries) {
    std::string authors;
    for (const auto& a : e["authors"]) authors += (authors.empty() ? "" : ", ") + a.get<std::string>();
    std::cout << ++i << ". [" << e["id"].get<std::string>() << "] " << truncate(e["title"].get<std::string>(), 90)
              << "\n   " << truncate(authors, 90) << "\n   " << e["context"].get<std::string>() << "\n";
  }
}

int emit_facet(const json& facet, const std::string& format, const std::string& name) {
  if (format == "json") {
    std::cout << facet.dump() << "\n";
    return kOk;
  }
  const auto h = dataedron::hbgraph_from_json(facet.at("hbgraph"));
  std::cout << dataedron::to_dot(dataedron::extra_node_layout(h, 1.0, 8.0), name);
  return kOk;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Faceted hb-graph exploration of Arxiv searches"};
  app.require_subcommand(1);

  std::string data_dir = default_data_dir();
  app.add_option("--data-dir", data_dir, "Session directory (default $DATAEDRON_DATA_DIR or ./dataedron-data)");

  std::string query, rho = dataedron::types::kPubId, offline, session_id;
  std::size_t n = 50, w = 10;
  auto* search = app.add_subcommand("search", "Run a query and open a session");
  search->add_option("query", query, "Boolean query, e.g. 'graph AND (mining OR search)'")->required();
  search->add_option("--max-results,-n", n, "Keep the first n results")->check(CLI::Range(1, 200));
  search->add_option("--top-words,-w", w, "Keywords kept per abstract")->check(CLI::Range(1, 50));
  search->add_option("--rho", rho, "Reference type");
  search->add_option("--offline", offline, "Replay recorded Atom feeds from this directory");
  search->add_option("--session", session_id, "Continue an existing session");

  std::string sid, alpha, format = "json", select, target;
  auto* facet = app.add_subcommand("facet", "Print the reduced facet of a session");
  facet->add_option("sid", sid)->required();
  facet->add_option("alpha", alpha)->required();
  facet->add_option("--format", format)->check(CLI::IsMember({"json", "dot"}));

  auto* nav = app.add_subcommand("navigate", "Navigate from a selection to another facet");
  nav->add_option("sid", sid)->required();
  nav->add_option("alpha", alpha)->required();
  nav->add_option("--select", select, "Comma-separated vertices")->required();
  nav->add_option("--target", target, "Target type")->required();
  nav->add_option("--format", format)->check(CLI::IsMember({"json", "dot"}));

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--port", port)->check(CLI::Range(0, 65535));
  serve->add_option("--host", host);
  serve->add_option("--offline", offline, "Replay recorded Atom feeds from this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    dataedron::Service service(make_options(data_dir, offline));

    if (*search) {
      json body{{"query", query}, {"n", n}, {"w", w}, {"rho", rho}};
      if (!session_id.empty()) body["sid"] = session_id;
      const auto r = service.search(body);
      if (r.status != 200) return report(r);
      std::cout << "session " << r.body["session_id"].get<std::string>() << "\n"
                << "query   " << r.body["query"].get<std::string>() << "\n\n";
      print_entries(r.body["entries"]);
      return kOk;
    }

    if (*facet) {
      const auto r = service.facet(sid, alpha);
      if (r.status != 200) return report(r);
      return emit_facet(r.body, format, alpha);
    }

    if (*nav) {
      const auto r = service.navigate({{"sid", sid}, {"alpha", alpha}, {"selection", split_csv(select)},
                                       {"target_alpha", target}});
      if (r.status != 200) return report(r);
      return emit_facet(r.body, format, target);
    }

    if (*serve) {
      httplib::Server server;
      service.bind(server);
      std::cerr << "listening on http://" << host << ":" << port << " (data dir " << data_dir << ")\n";
      if (!server.listen(host, port)) {
        std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
        return kRuntimeError;
      }
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kUsageError;
}
