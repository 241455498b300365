#include "msc/cli.hpp"

#include <pthread.h>

#include <csignal>
#include <filesystem>
#include <thread>

#include "CLI11.hpp"
#include "msc/entailment.hpp"
#include "msc/query.hpp"
#include "msc/serializer.hpp"
#include "msc/server.hpp"
#include "msc/skos.hpp"
#include "msc/source.hpp"
#include "msc/text.hpp"
#include "msc/validator.hpp"

namespace msc::cli {

namespace {

// Raised for problems that should end the command with exit code 2.
struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void report(std::ostream& err, const std::string& file,
            const std::vector<source::Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics) err << file << ":" << d.line << ": " << d.message << "\n";
}

rdf::Graph load_ntriples(const std::string& path) {
  try {
    return serial::parse_ntriples(text::read_file(path));
  } catch (const serial::ParseError& e) {
    throw Failure(path + ":" + std::to_string(e.line()) + ": " + e.message());
  }
}

template <class Row>
std::vector<Row> load_tsv(const std::string& path, std::ostream& err,
                          skos::TsvResult<Row> (*parse)(std::string_view)) {
  if (path.empty()) return {};
  auto result = parse(text::read_file(path));
  report(err, path, result.diagnostics);
  return std::move(result.rows);
}

void write_output(const std::string& path, const std::string& body, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << body;
  } else {
    text::write_file(path, body);
  }
}

struct ConvertArgs {
  std::string source, labels, mappings, collections, external, output;
};

int convert(const ConvertArgs& a, std::ostream& out, std::ostream& err) {
  std::string text;
  try {
    text = text::read_file(a.source);
  } catch (const std::exception& e) {
    throw Failure(e.what());
  }
  skos::BuildInputs inputs;
  try {
    auto parsed = source::parse_source(text);
    report(err, a.source, parsed.diagnostics);
    inputs.records = std::move(parsed.records);
  } catch (const source::SourceError& e) {
    throw Failure(a.source + ": " + e.what());
  }
  inputs.translations = load_tsv(a.labels, err, skos::parse_translations);
  inputs.version_mappings = load_tsv(a.mappings, err, skos::parse_version_mappings);
  inputs.collections = load_tsv(a.collections, err, skos::parse_collections);
  inputs.external_mappings = load_tsv(a.external, err, skos::parse_external_mappings);

  auto built = skos::build_graph(inputs);
  for (const auto& d : built.diagnostics) err << d.to_string() << "\n";
  write_output(a.output, serial::to_ntriples(built.graph), out);
  return kOk;
}

struct ExpandArgs {
  std::string input, output, rules;
  bool no_builtin = false;
};

int expand(const ExpandArgs& a, std::ostream& out, std::ostream& err) {
  auto graph = load_ntriples(a.input);
  std::vector<entail::Rule> rules;
  if (!a.no_builtin) rules = entail::builtin_ruleset();
  if (!a.rules.empty()) {
    try {
      auto extra = entail::parse_rules(text::read_file(a.rules), skos::default_prefixes());
      rules.insert(rules.end(), extra.begin(), extra.end());
    } catch (const entail::RuleError& e) {
      throw Failure(a.rules + ": " + e.what());
    }
  }
  entail::ExpandStats stats;
  auto expanded = entail::expand(graph, rules, &stats);
  err << a.input << ": " << stats.derived << " triples derived in " << stats.rounds
      << " rounds\n";
  write_output(a.output, serial::to_ntriples(expanded), out);
  return kOk;
}

struct SplitArgs {
  std::string input, directory, format = "nt";
};

int split(const SplitArgs& a, std::ostream& out) {
  auto format = serial::format_from_name(a.format);
  if (!format) throw Failure("unknown format '" + a.format + "' (nt, ttl or rdf)");
  auto graph = load_ntriples(a.input);
  graph.prefixes() = skos::default_prefixes();
  std::filesystem::create_directories(a.directory);
  auto slices = serial::split_per_concept(graph);
  for (auto& [code, slice] : slices) {
    slice.prefixes() = graph.prefixes();
    text::write_file(a.directory + "/" + code + "." + serial::extension(*format),
                     serial::serialize(slice, *format));
  }
  out << slices.size() << " files written to " << a.directory << "\n";
  return kOk;
}

struct ValidateArgs {
  std::string input, phase = "master";
  bool tsv = false;
};

validate::Phase phase_from(const std::string& name) {
  if (name == "master") return validate::Phase::Master;
  if (name == "expanded") return validate::Phase::Expanded;
  throw Failure("unknown phase '" + name + "' (master or expanded)");
}

int run_validate(const ValidateArgs& a, std::ostream& out) {
  auto phase = phase_from(a.phase);
  auto graph = load_ntriples(a.input);
  graph.freeze();
  auto report = validate::validate(graph, phase);
  out << (a.tsv ? validate::to_tsv(report) : validate::to_text(report));
  return report.errors() > 0 ? kValidationErrors : kOk;
}

int stats(const std::string& input, std::ostream& out) {
  auto graph = load_ntriples(input);
  graph.freeze();
  out << validate::stats_text(validate::validate(graph, validate::Phase::Master).stats);
  return kOk;
}

struct QueryArgs {
  std::vector<std::string> inputs;
  std::string query_file;
  bool json = false;
};

int run_query(const QueryArgs& a, std::ostream& out) {
  rdf::Graph graph;
  for (const auto& path : a.inputs) {
    for (const auto& t : load_ntriples(path).triples()) graph.insert(t);
  }
  graph.freeze();
  query::Query parsed;
  try {
    parsed = query::parse_query(text::read_file(a.query_file));
  } catch (const query::SyntaxError& e) {
    throw Failure(a.query_file + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) +
                  ": syntax error: " + e.message());
  } catch (const query::QueryError& e) {
    throw Failure(a.query_file + ": " + e.what());
  }
  auto table = query::evaluate(graph, parsed);
  out << (a.json ? query::to_json(table) + "\n" : query::to_tsv(table));
  return kOk;
}

struct ExportArgs {
  std::string input, output, format;
};

int run_export(const ExportArgs& a, std::ostream& out) {
  std::string name = a.format;
  if (name.empty()) {
    auto ext = std::filesystem::path(a.output).extension().string();
    name = ext.empty() ? "nt" : ext.substr(1);
  }
  auto format = serial::format_from_name(name);
  if (!format) throw Failure("unknown format '" + name + "' (nt, ttl or rdf)");
  auto graph = load_ntriples(a.input);
  graph.prefixes() = skos::default_prefixes();
  write_output(a.output, serial::serialize(graph, *format), out);
  return kOk;
}

int serve(const std::string& config_path, std::ostream& out) {
  server::ServerConfig config;
  try {
    config = server::parse_config(text::read_file(config_path));
  } catch (const skos::ConfigError& e) {
    throw Failure(config_path + ": " + e.what());
  }
  auto data = server::load_dataset(config);
  auto service = std::make_shared<const server::Service>(data, config.prefix);
  server::HttpServer http(service);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  int port = http.bind(config.bind, config.port);
  out << "serving " << data->slices().size() << " classes on http://" << config.bind << ":"
      << port << config.prefix << std::endl;
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    http.stop();
  });
  http.serve();
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"MSC2010 to SKOS conversion and publishing toolchain", "msckos"};
  app.require_subcommand(1);

  ConvertArgs conv;
  auto* c = app.add_subcommand("convert", "Parse a source file and write the master graph");
  c->add_option("source", conv.source, "Legacy classification source")->required();
  c->add_option("--labels", conv.labels, "Translated labels (TSV)");
  c->add_option("--mappings", conv.mappings, "Version mappings (TSV)");
  c->add_option("--collections", conv.collections, "Collections (TSV)");
  c->add_option("--external", conv.external, "External mappings (TSV)");
  c->add_option("-o,--output", conv.output, "Output N-Triples file")->required();

  ExpandArgs exp;
  auto* e = app.add_subcommand("expand", "Materialize entailed triples");
  e->add_option("input", exp.input, "Master N-Triples")->required();
  e->add_option("-o,--output", exp.output, "Output N-Triples file")->required();
  e->add_option("--rules", exp.rules, "Additional rule file");
  e->add_flag("--no-builtin", exp.no_builtin, "Use only the rules from --rules");

  SplitArgs spl;
  auto* s = app.add_subcommand("split", "Write one file per class");
  s->add_option("input", spl.input, "Expanded N-Triples")->required();
  s->add_option("-d,--dir", spl.directory, "Output directory")->required();
  s->add_option("--format", spl.format, "nt, ttl or rdf");

  ValidateArgs val;
  auto* v = app.add_subcommand("validate", "Check a graph");
  v->add_option("input", val.input, "N-Triples file")->required();
  v->add_option("--phase", val.phase, "master or expanded");
  v->add_flag("--tsv", val.tsv, "Emit findings as TSV records");

  QueryArgs qry;
  auto* q = app.add_subcommand("query", "Evaluate a query");
  q->add_option("input", qry.inputs, "N-Triples files, merged")->required();
  q->add_option("-q,--query", qry.query_file, "Query file")->required();
  q->add_flag("--json", qry.json, "Emit the JSON results form");

  std::string stats_input;
  auto* st = app.add_subcommand("stats", "Print class counts and the math-label fraction");
  st->add_option("input", stats_input, "N-Triples file")->required();

  ExportArgs ex;
  auto* x = app.add_subcommand("export", "Serialize a graph as N-Triples, Turtle or RDF/XML");
  x->add_option("input", ex.input, "N-Triples file")->required();
  x->add_option("-o,--output", ex.output, "Output file")->required();
  x->add_option("--format", ex.format, "nt, ttl or rdf; defaults to the output extension");

  std::string config_path;
  auto* sv = app.add_subcommand("serve", "Publish the dataset over HTTP");
  sv->add_option("--config", config_path, "Server config file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& pe) {
    int code = app.exit(pe, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*c) return convert(conv, out, err);
    if (*e) return expand(exp, out, err);
    if (*s) return split(spl, out);
    if (*v) return run_validate(val, out);
    if (*q) return run_query(qry, out);
    if (*st) return stats(stats_input, out);
    if (*x) return run_export(ex, out);
    if (*sv) return serve(config_path, out);
  } catch (const std::exception& ex_) {
    err << "msckos: " << ex_.what() << "\n";
  }
  return kUsage;
}

}  // namespace msc::cli
