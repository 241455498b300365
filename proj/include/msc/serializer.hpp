#pragma once

// Graph exchange formats. N-Triples is the canonical, round-trippable form
// (sorted lines, ASCII-only escaping); Turtle and RDF/XML are export-only.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "msc/rdf.hpp"

namespace msc::serial {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line), message_(message) {}
  std::size_t line() const { return line_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::string message_;
};

class SerializeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string to_ntriples(const rdf::Graph& graph);

// Throws ParseError naming the offending line.
rdf::Graph parse_ntriples(std::string_view text);

std::string to_turtle(const rdf::Graph& graph, const rdf::PrefixMap& prefixes);
inline std::string to_turtle(const rdf::Graph& graph) { return to_turtle(graph, graph.prefixes()); }

// Element names are built from the graph's prefix map where possible;
// other namespaces get generated ns1, ns2, ... prefixes.
std::string to_rdfxml(const rdf::Graph& graph);

// Per-concept descriptions keyed by the final IRI segment (the class code):
// every triple with the concept as subject, plus the triples of blank nodes
// the concept points to.
std::map<std::string, rdf::Graph> split_per_concept(const rdf::Graph& expanded);

enum class Format { NTriples, Turtle, RdfXml };

std::optional<Format> format_from_name(std::string_view name);  // nt|ttl|rdf
const char* extension(Format format);
const char* media_type(Format format);
std::string serialize(const rdf::Graph& graph, Format format);

}  // namespace msc::serial
