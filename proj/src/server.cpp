#include "msc/server.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <set>

#include "httplib.h"
#include "msc/entailment.hpp"
#include "msc/query.hpp"
#include "msc/serializer.hpp"
#include "msc/text.hpp"

namespace msc::server {

using rdf::Term;

namespace {

constexpr std::string_view kSupported =
    "application/rdf+xml, text/turtle, application/n-triples, text/html";

constexpr Representation kOrder[] = {Representation::RdfXml, Representation::Turtle,
                                     Representation::NTriples, Representation::Html};

std::string html_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

Response text_response(int status, std::string body) {
  return {status, "text/plain", std::move(body)};
}

std::string local_name(const std::string& iri) {
  auto cut = iri.find_last_of("/#");
  return cut == std::string::npos ? iri : iri.substr(cut + 1);
}

}  // namespace

ServerConfig parse_config(std::string_view text) {
  ServerConfig config;
  auto lines = text::split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    auto line = text::trim(lines[n]);
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    auto where = "config line " + std::to_string(n + 1) + ": ";
    if (eq == std::string_view::npos) throw skos::ConfigError(where + "expected 'key = value'");
    auto key = std::string(text::trim(line.substr(0, eq)));
    auto value = std::string(text::trim(line.substr(eq + 1)));
    if (key == "bind") {
      config.bind = value;
    } else if (key == "port") {
      int port = -1;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), port);
      if (ec != std::errc{} || ptr != value.data() + value.size() || port < 0 || port > 65535) {
        throw skos::ConfigError(where + "invalid port '" + value + "'");
      }
      config.port = port;
    } else if (key == "prefix") {
      if (value.empty() || value.front() != '/' || value.back() != '/') {
        throw skos::ConfigError(where + "prefix must start and end with '/'");
      }
      config.prefix = value;
    } else if (key == "data") {
      config.data_path = value;
    } else if (key == "expanded") {
      config.expanded_path = value;
    } else if (key == "rules") {
      config.rules_path = value;
    } else if (key == "extra") {
      config.extra_paths.push_back(value);
    } else if (key == "dump-dir") {
      config.dump_dir = value;
    } else {
      throw skos::ConfigError(where + "unknown key '" + key + "'");
    }
  }
  if (config.data_path.empty()) throw skos::ConfigError("config: 'data' is required");
  return config;
}

Dataset::Dataset(rdf::Graph master, rdf::Graph expanded, skos::SchemeConfig scheme)
    : master_(std::move(master)), expanded_(std::move(expanded)), scheme_(std::move(scheme)) {
  if (master_.prefixes().empty()) master_.prefixes() = skos::default_prefixes(scheme_);
  if (expanded_.prefixes().empty()) expanded_.prefixes() = skos::default_prefixes(scheme_);
  master_.freeze();
  expanded_.freeze();
  slices_ = serial::split_per_concept(expanded_);
  for (auto format : {serial::Format::NTriples, serial::Format::Turtle, serial::Format::RdfXml}) {
    std::string ext = serial::extension(format);
    dumps_[ext] = serial::serialize(expanded_, format);
    dumps_["master." + ext] = serial::serialize(master_, format);
  }
}

const std::string* Dataset::dump(const std::string& key) const {
  auto it = dumps_.find(key);
  return it == dumps_.end() ? nullptr : &it->second;
}

void Dataset::write_dumps(const std::string& directory) const {
  std::filesystem::create_directories(directory);
  for (const char* ext : {"nt", "ttl", "rdf"}) {
    text::write_file(directory + "/msc2010." + ext, dumps_.at(std::string("master.") + ext));
    text::write_file(directory + "/msc2010-expanded." + ext, dumps_.at(ext));
  }
}

std::shared_ptr<const Dataset> load_dataset(const ServerConfig& config) {
  auto master = serial::parse_ntriples(text::read_file(config.data_path));
  rdf::Graph expanded;
  if (!config.expanded_path.empty()) {
    expanded = serial::parse_ntriples(text::read_file(config.expanded_path));
  } else {
    auto rules = entail::builtin_ruleset();
    if (!config.rules_path.empty()) {
      auto extra = entail::parse_rules(text::read_file(config.rules_path), skos::default_prefixes());
      rules.insert(rules.end(), extra.begin(), extra.end());
    }
    expanded = entail::expand(master, rules);
  }
  if (!config.extra_paths.empty()) expanded = expanded.mutable_copy();
  for (const auto& path : config.extra_paths) {
    auto extra = serial::parse_ntriples(text::read_file(path));
    for (const auto& t : extra.triples()) expanded.insert(t);
  }
  auto data = std::make_shared<const Dataset>(std::move(master), std::move(expanded));
  if (!config.dump_dir.empty()) data->write_dumps(config.dump_dir);
  return data;
}

const char* media_type(Representation r) {
  switch (r) {
    case Representation::RdfXml: return "application/rdf+xml";
    case Representation::Turtle: return "text/turtle";
    case Representation::NTriples: return "application/n-triples";
    case Representation::Html: return "text/html";
  }
  return "";
}

Negotiation negotiate(std::string_view accept) {
  if (text::trim(accept).empty()) return {Representation::Html};
  struct Range {
    std::string type;
    double q;
  };
  std::vector<Range> ranges;
  for (auto item : text::split(accept, ',')) {
    auto parts = text::split(item, ';');
    Range r{text::to_lower(text::trim(parts[0])), 1.0};
    for (std::size_t i = 1; i < parts.size(); ++i) {
      auto param = text::trim(parts[i]);
      if (param.size() > 2 && (param[0] == 'q' || param[0] == 'Q') && param[1] == '=') {
        try {
          r.q = std::stod(std::string(param.substr(2)));
        } catch (const std::exception&) {
          r.q = 0;
        }
      }
    }
    if (!r.type.empty() && r.q > 0) ranges.push_back(std::move(r));
  }
  std::stable_sort(ranges.begin(), ranges.end(),
                   [](const Range& a, const Range& b) { return a.q > b.q; });
  for (const auto& r : ranges) {
    if (r.type == "*/*") return {Representation::Html};
    for (auto rep : kOrder) {
      std::string_view type = media_type(rep);
      if (r.type == type) return {rep};
      if (r.type.ends_with("/*") &&
          type.starts_with(std::string_view(r.type).substr(0, r.type.size() - 1))) {
        return {rep};
      }
    }
  }
  return {std::nullopt};
}

Service::Service(std::shared_ptr<const Dataset> data, std::string prefix)
    : data_(std::move(data)), prefix_(std::move(prefix)) {}

Response Service::handle(const Request& request) const {
  const auto& path = request.path;
  if (path == "/health") return text_response(200, "ok");
  if (path == "/sparql") {
    if (request.method != "GET" && request.method != "POST") {
      return text_response(405, "method not allowed");
    }
    std::optional<std::string> query;
    if (auto it = request.params.find("query"); it != request.params.end()) {
      query = it->second;
    } else if (request.method == "POST" &&
               request.content_type.starts_with("application/sparql-query")) {
      query = request.body;
    }
    return handle_sparql(query);
  }
  if (request.method != "GET") return text_response(405, "method not allowed");
  if (path.starts_with("/dump.")) return handle_dump(path.substr(6));
  if (path.starts_with(prefix_)) {
    auto rest = path.substr(prefix_.size());
    std::optional<std::string> ext;
    if (auto dot = rest.find('.'); dot != std::string::npos) {
      ext = rest.substr(dot + 1);
      rest = rest.substr(0, dot);
    }
    return handle_concept(rest, request.accept, ext);
  }
  return text_response(404, "not found");
}

Response Service::handle_concept(const std::string& code, std::string_view accept,
                                 std::optional<std::string> extension) const {
  auto it = data_->slices().find(code);
  std::optional<Representation> rep;
  if (extension) {
    static const std::map<std::string, Representation> by_ext{
        {"rdf", Representation::RdfXml},
        {"ttl", Representation::Turtle},
        {"nt", Representation::NTriples},
        {"html", Representation::Html}};
    auto e = by_ext.find(*extension);
    if (e == by_ext.end()) return text_response(404, "unknown representation ." + *extension);
    rep = e->second;
  }
  if (it == data_->slices().end()) return text_response(404, "unknown class " + code);
  if (!rep) {
    rep = negotiate(accept).chosen;
    if (!rep) {
      return text_response(406, "Not Acceptable. Supported types: " + std::string(kSupported));
    }
  }
  const auto& slice = it->second;
  std::string body;
  switch (*rep) {
    case Representation::RdfXml: body = serial::to_rdfxml(slice); break;
    case Representation::Turtle: body = serial::to_turtle(slice); break;
    case Representation::NTriples: body = serial::to_ntriples(slice); break;
    case Representation::Html: body = render_html(code, slice); break;
  }
  return {200, media_type(*rep), std::move(body)};
}

Response Service::handle_sparql(const std::optional<std::string>& query) const {
  if (!query) return text_response(400, "missing 'query' parameter");
  try {
    auto parsed = query::parse_query(*query);
    auto table = query::evaluate(data_->expanded(), parsed);
    return {200, "application/sparql-results+json", query::to_json(table)};
  } catch (const query::QueryError& e) {
    return text_response(400, e.what());
  }
}

Response Service::handle_dump(const std::string& name) const {
  static const std::map<std::string, std::string> types{
      {"nt", "application/n-triples"}, {"ttl", "text/turtle"},
      {"rdf", "application/rdf+xml"},  {"master.nt", "application/n-triples"},
      {"master.ttl", "text/turtle"},   {"master.rdf", "application/rdf+xml"}};
  auto type = types.find(name);
  const auto* body = data_->dump(name);
  if (type == types.end() || !body) return text_response(404, "no dump named " + name);
  return {200, type->second, *body};
}

std::string Service::link(const Term& target) const {
  if (!target.is_iri()) return html_escape(target.to_ntriples());
  const auto& base = data_->scheme().base_iri;
  const auto& iri = target.value();
  if (iri.starts_with(base)) {
    auto code = iri.substr(base.size());
    if (data_->slices().count(code)) {
      std::string label;
      auto labels = data_->expanded().match(target, Term::iri(vocab::skos("prefLabel")), std::nullopt);
      for (const auto& l : labels) {
        if (l.object.language() == data_->scheme().default_language) label = l.object.value();
      }
      auto out = "<a href=\"" + html_escape(prefix_ + code) + ".html\">" + html_escape(code) + "</a>";
      if (!label.empty()) out += " " + html_escape(label);
      return out;
    }
    return html_escape(code);
  }
  return "<a href=\"" + html_escape(iri) + "\">" + html_escape(iri) + "</a>";
}

std::string Service::render_html(const std::string& code, const rdf::Graph& slice) const {
  const auto v = skos::vocabulary(data_->scheme());
  auto subject = skos::mint_iri(data_->scheme(), code);
  auto objects = [&](const Term& s, const Term& p) {
    std::vector<Term> out;
    for (const auto& t : slice.match(s, p, std::nullopt)) out.push_back(t.object);
    return out;
  };
  std::string title = code;
  for (const auto& l : objects(subject, v.pref_label)) {
    if (l.language() == data_->scheme().default_language) title += " " + l.value();
  }

  std::string out = "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>" +
                    html_escape(title) + "</title>\n</head>\n<body>\n";
  out += "<h1>" + html_escape(title) + "</h1>\n";
  for (const auto& n : objects(subject, v.notation)) {
    out += "<p>Notation: <code>" + html_escape(n.value()) + "</code></p>\n";
  }

  auto section = [&](const std::string& heading, const std::vector<std::string>& items) {
    if (items.empty()) return;
    out += "<h2>" + heading + "</h2>\n<ul>\n";
    for (const auto& i : items) out += "<li>" + i + "</li>\n";
    out += "</ul>\n";
  };
  auto links = [&](const Term& p) {
    std::vector<std::string> items;
    for (const auto& o : objects(subject, p)) items.push_back(link(o));
    return items;
  };

  std::vector<std::string> labels;
  for (const auto& l : objects(subject, v.pref_label)) {
    labels.push_back("<span lang=\"" + html_escape(l.language()) + "\">" + html_escape(l.value()) +
                     "</span> (" + html_escape(l.language()) + ")");
  }
  section("Labels", labels);
  section("Broader", links(v.broader));
  section("Narrower", links(v.narrower));
  section("Related", links(v.related));

  std::vector<std::string> scoped;
  for (const auto& node : objects(subject, v.scoped_relation)) {
    for (const auto& scope : objects(node, v.scope)) {
      std::string item = "For " + html_escape(scope.value()) + ", see ";
      bool first = true;
      for (const auto& target : objects(node, v.target)) {
        item += (first ? "" : ", ") + link(target);
        first = false;
      }
      scoped.push_back(item);
    }
  }
  section("Scoped references", scoped);

  std::vector<std::string> notes;
  for (const auto& n : objects(subject, v.note)) notes.push_back(html_escape(n.value()));
  section("Notes", notes);

  std::vector<std::string> mappings;
  for (const auto* p : {&v.exact_match, &v.close_match, &v.narrow_match, &v.broad_match}) {
    for (const auto& o : objects(subject, *p)) {
      mappings.push_back(local_name(p->value()) + ": " + link(o));
    }
  }
  section("Mappings", mappings);

  out += "<p>Other formats:";
  for (const char* ext : {"rdf", "ttl", "nt"}) {
    out += " <a href=\"" + html_escape(prefix_ + code) + "." + ext + "\">" + ext + "</a>";
  }
  out += "</p>\n</body>\n</html>\n";
  return out;
}

HttpServer::HttpServer(std::shared_ptr<const Service> service)
    : service_(std::move(service)), http_(std::make_unique<httplib::Server>()) {
  auto handler = [svc = service_](const httplib::Request& req, httplib::Response& res) {
    Request r;
    r.method = req.method;
    r.path = req.path;
    r.accept = req.get_header_value("Accept");
    r.content_type = req.get_header_value("Content-Type");
    for (const auto& [k, val] : req.params) r.params.emplace(k, val);
    r.body = req.body;
    auto out = svc->handle(r);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  http_->Get(".*", handler);
  http_->Post(".*", handler);
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  int bound = port == 0 ? http_->bind_to_any_port(host) : (http_->bind_to_port(host, port) ? port : -1);
  if (bound <= 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::serve() { http_->listen_after_bind(); }

void HttpServer::stop() { http_->stop(); }

}  // namespace msc::server
