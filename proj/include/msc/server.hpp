#pragma once

// Linked-data publishing: per-class descriptions with content negotiation,
// a query endpoint, whole-dataset dumps and server-rendered HTML pages.
//
// Service holds the routing logic over an immutable Dataset and is usable
// without a socket; HttpServer binds it to cpp-httplib.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "msc/rdf.hpp"
#include "msc/skos.hpp"

namespace httplib {
class Server;
}

namespace msc::server {

struct ServerConfig {
  std::string bind = "127.0.0.1";
  int port = 8080;
  std::string prefix = "/resources/MSC/2010/";
  std::string data_path;      // master N-Triples
  std::string expanded_path;  // optional precomputed expansion
  std::string rules_path;     // optional extra rules applied when expanding at startup
  std::vector<std::string> extra_paths;  // N-Triples merged into the served graph as-is
  std::string dump_dir;       // optional; whole-dataset dumps are written here at startup
};

// "key = value" lines; '#' starts a comment. Throws skos::ConfigError.
ServerConfig parse_config(std::string_view text);

// Frozen master and expanded graphs with their per-class slices and
// pre-rendered dumps.
class Dataset {
 public:
  Dataset(rdf::Graph master, rdf::Graph expanded, skos::SchemeConfig scheme = {});

  const rdf::Graph& master() const { return master_; }
  const rdf::Graph& expanded() const { return expanded_; }
  const std::map<std::string, rdf::Graph>& slices() const { return slices_; }
  const skos::SchemeConfig& scheme() const { return scheme_; }
  // Keys: "nt", "ttl", "rdf", "master.nt", "master.ttl", "master.rdf".
  const std::string* dump(const std::string& key) const;

  // Writes msc2010.{nt,ttl,rdf} and msc2010-expanded.{nt,ttl,rdf}.
  void write_dumps(const std::string& directory) const;

 private:
  rdf::Graph master_;
  rdf::Graph expanded_;
  skos::SchemeConfig scheme_;
  std::map<std::string, rdf::Graph> slices_;
  std::map<std::string, std::string> dumps_;
};

// Reads the data files named in the config and expands when needed.
std::shared_ptr<const Dataset> load_dataset(const ServerConfig& config);

enum class Representation { RdfXml, Turtle, NTriples, Html };

const char* media_type(Representation r);

struct Negotiation {
  std::optional<Representation> chosen;  // nullopt: 406
};

// First acceptable supported type, honouring q=0 exclusions and q ordering;
// an absent or empty header selects HTML.
Negotiation negotiate(std::string_view accept);

struct Request {
  std::string method = "GET";
  std::string path;
  std::string accept;
  std::string content_type;
  std::map<std::string, std::string> params;
  std::string body;
};

struct Response {
  int status = 200;
  std::string content_type;
  std::string body;
};

class Service {
 public:
  Service(std::shared_ptr<const Dataset> data, std::string prefix);

  Response handle(const Request& request) const;

  Response handle_concept(const std::string& code, std::string_view accept,
                          std::optional<std::string> extension) const;
  Response handle_sparql(const std::optional<std::string>& query) const;
  Response handle_dump(const std::string& name) const;

  const std::string& prefix() const { return prefix_; }

 private:
  std::string render_html(const std::string& code, const rdf::Graph& slice) const;
  std::string link(const rdf::Term& target) const;

  std::shared_ptr<const Dataset> data_;
  std::string prefix_;
};

class HttpServer {
 public:
  explicit HttpServer(std::shared_ptr<const Service> service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws on failure.
  int bind(const std::string& host, int port);
  // Blocks until stop(); in-flight requests complete before it returns.
  void serve();
  void stop();

 private:
  std::shared_ptr<const Service> service_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace msc::server
