#include "msc/serializer.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>
#include <vector>

#include "msc/text.hpp"
#include "msc/vocab.hpp"

namespace msc::serial {

using rdf::Graph;
using rdf::Term;

namespace {

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t lineno) : s_(line), line_(lineno) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(line_, what + " (column " + std::to_string(pos_ + 1) + ")");
  }

  void ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  bool done() {
    ws();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  Term term() {
    ws();
    try {
      switch (peek()) {
        case '<': return Term::iri(iri());
        case '_': return blank();
        case '"': return literal();
        default: fail("expected a term");
      }
    } catch (const rdf::RdfError& e) {
      fail(e.what());
    }
  }

  void dot() {
    ws();
    if (peek() != '.') fail("expected '.' at end of triple");
    ++pos_;
    if (!done()) fail("unexpected text after '.'");
  }

 private:
  std::string iri() {
    ++pos_;
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '>') {
      if (s_[pos_] == '\\') {
        out += uchar();
      } else {
        out += s_[pos_++];
      }
    }
    if (pos_ >= s_.size()) fail("unterminated IRI");
    ++pos_;
    return out;
  }

  Term blank() {
    if (s_.substr(pos_, 2) != "_:") fail("expected '_:'");
    pos_ += 2;
    auto start = pos_;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
        break;
      }
      ++pos_;
    }
    while (pos_ > start && s_[pos_ - 1] == '.') --pos_;
    return Term::blank(std::string(s_.substr(start, pos_ - start)));
  }

  Term literal() {
    ++pos_;
    std::string lexical;
    for (;;) {
      if (pos_ >= s_.size()) fail("unterminated literal");
      char c = s_[pos_];
      if (c == '"') break;
      if (c != '\\') {
        lexical += c;
        ++pos_;
        continue;
      }
      if (pos_ + 1 >= s_.size()) fail("dangling escape");
      switch (s_[pos_ + 1]) {
        case 't': lexical += '\t'; pos_ += 2; break;
        case 'b': lexical += '\b'; pos_ += 2; break;
        case 'n': lexical += '\n'; pos_ += 2; break;
        case 'r': lexical += '\r'; pos_ += 2; break;
        case 'f': lexical += '\f'; pos_ += 2; break;
        case '"': lexical += '"'; pos_ += 2; break;
        case '\'': lexical += '\''; pos_ += 2; break;
        case '\\': lexical += '\\'; pos_ += 2; break;
        case 'u':
        case 'U': lexical += uchar(); break;
        default: fail("invalid escape sequence");
      }
    }
    ++pos_;
    if (peek() == '@') {
      auto start = ++pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-')) {
        ++pos_;
      }
      return Term::lang_literal(std::move(lexical), s_.substr(start, pos_ - start));
    }
    if (s_.substr(pos_, 2) == "^^") {
      pos_ += 2;
      if (peek() != '<') fail("expected datatype IRI");
      return Term::typed_literal(std::move(lexical), iri());
    }
    return Term::literal(std::move(lexical));
  }

  std::string uchar() {
    if (pos_ + 1 >= s_.size()) fail("dangling escape");
    char kind = s_[pos_ + 1];
    std::size_t digits = kind == 'u' ? 4 : kind == 'U' ? 8 : 0;
    if (!digits || pos_ + 2 + digits > s_.size()) fail("invalid escape sequence");
    char32_t cp = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      char c = s_[pos_ + 2 + i];
      int v = c >= '0' && c <= '9'   ? c - '0'
              : c >= 'a' && c <= 'f' ? c - 'a' + 10
              : c >= 'A' && c <= 'F' ? c - 'A' + 10
                                     : -1;
      if (v < 0) fail("invalid hex digit in escape");
      cp = cp * 16 + static_cast<char32_t>(v);
    }
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail("escape outside Unicode range");
    pos_ += 2 + digits;
    std::string out;
    text::append_utf8(out, cp);
    return out;
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

std::string turtle_term(const Term& t, const rdf::PrefixMap& prefixes) {
  if (t.is_iri()) {
    if (auto curie = prefixes.compact(t.value())) return *curie;
    return "<" + rdf::escape_iri(t.value()) + ">";
  }
  if (t.is_blank()) return "_:" + t.value();
  std::string out = "\"" + rdf::escape_literal(t.value()) + "\"";
  if (!t.language().empty()) {
    out += "@" + t.language();
  } else if (!t.datatype().empty()) {
    auto dt = Term::iri(t.datatype());
    out += "^^" + turtle_term(dt, prefixes);
  }
  return out;
}

std::string xml_escape(std::string_view s, bool attribute) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"':
        out += attribute ? "&quot;" : "\"";
        break;
      default:
        if (u < 0x20 && (attribute || (c != '\n' && c != '\t'))) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "&#x%X;", u);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

const std::pair<std::string_view, std::string_view> kWellKnown[] = {
    {"rdfs", vocab::kRdfs}, {"xsd", vocab::kXsd}, {"skos", vocab::kSkos}, {"dct", vocab::kDct}};

bool ncname_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

bool ncname_char(char c) {
  return ncname_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

// Splits an IRI into (namespace, local name) with the longest NCName suffix.
std::pair<std::string, std::string> split_qname(const std::string& iri) {
  std::size_t start = iri.size();
  while (start > 0 && ncname_char(iri[start - 1])) --start;
  while (start < iri.size() && !ncname_start(iri[start])) ++start;
  if (start >= iri.size() || start == 0) {
    throw SerializeError("cannot express predicate as an XML name: " + iri);
  }
  return {iri.substr(0, start), iri.substr(start)};
}

}  // namespace

std::string to_ntriples(const Graph& graph) {
  std::vector<std::string> lines;
  lines.reserve(graph.size());
  for (const auto& t : graph.id_triples()) {
    lines.push_back(graph.key(t.s) + " " + graph.key(t.p) + " " + graph.key(t.o) + " .\n");
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l;
  return out;
}

Graph parse_ntriples(std::string_view text) {
  Graph graph;
  if (auto bad = text::find_invalid_utf8(text)) {
    std::size_t line = 1 + static_cast<std::size_t>(
                               std::count(text.begin(), text.begin() + *bad, '\n'));
    throw ParseError(line, "invalid UTF-8");
  }
  auto lines = text::split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    LineParser p(lines[n], n + 1);
    if (p.done()) continue;
    auto s = p.term();
    auto pred = p.term();
    auto o = p.term();
    p.dot();
    if (s.is_literal()) throw ParseError(n + 1, "literal in subject position");
    if (!pred.is_iri()) throw ParseError(n + 1, "predicate must be an IRI");
    graph.insert(s, pred, o);
  }
  return graph;
}

std::string to_turtle(const Graph& graph, const rdf::PrefixMap& prefixes) {
  std::string out;
  for (const auto& [name, iri] : prefixes.entries()) {
    out += "@prefix " + name + ": <" + rdf::escape_iri(iri) + "> .\n";
  }
  const std::string type = vocab::kType;
  auto triples = graph.triples();
  std::size_t i = 0;
  while (i < triples.size()) {
    std::size_t end = i;
    while (end < triples.size() && triples[end].subject == triples[i].subject) ++end;
    // rdf:type first, then predicates in canonical order
    std::stable_partition(triples.begin() + static_cast<std::ptrdiff_t>(i),
                          triples.begin() + static_cast<std::ptrdiff_t>(end),
                          [&](const auto& t) { return t.predicate.value() == type; });
    out += "\n" + turtle_term(triples[i].subject, prefixes);
    std::size_t j = i;
    bool first = true;
    while (j < end) {
      const auto& pred = triples[j].predicate;
      out += first ? " " : " ;\n    ";
      first = false;
      out += pred.value() == type ? std::string("a") : turtle_term(pred, prefixes);
      bool first_obj = true;
      for (; j < end && triples[j].predicate == pred; ++j) {
        out += first_obj ? " " : ", ";
        first_obj = false;
        out += turtle_term(triples[j].object, prefixes);
      }
    }
    out += " .\n";
    i = end;
  }
  return out;
}

std::string to_rdfxml(const Graph& graph) {
  auto triples = graph.triples();
  std::map<std::string, std::string> ns_prefix;  // namespace -> prefix
  ns_prefix[std::string(vocab::kRdf)] = "rdf";
  std::set<std::string> taken{"rdf", "xml"};
  std::set<std::string> needed;
  for (const auto& t : triples) needed.insert(split_qname(t.predicate.value()).first);
  std::vector<std::string> unnamed;
  for (const auto& ns : needed) {
    if (ns_prefix.count(ns)) continue;
    std::optional<std::string> chosen;
    for (const auto& [name, iri] : graph.prefixes().entries()) {
      if (iri == ns && !taken.count(name) && !name.empty() && ncname_start(name[0])) {
        chosen = name;
        break;
      }
    }
    if (!chosen) {
      for (const auto& [name, iri] : kWellKnown) {
        if (iri == ns && !taken.count(std::string(name))) chosen = std::string(name);
      }
    }
    if (chosen) {
      ns_prefix[ns] = *chosen;
      taken.insert(*chosen);
    } else {
      unnamed.push_back(ns);
    }
  }
  int counter = 1;
  for (const auto& ns : unnamed) {
    std::string name;
    do {
      name = "ns" + std::to_string(counter++);
    } while (taken.count(name));
    taken.insert(name);
    ns_prefix[ns] = name;
  }

  std::vector<std::pair<std::string, std::string>> decls;  // prefix, ns
  for (const auto& [ns, name] : ns_prefix) decls.emplace_back(name, ns);
  std::sort(decls.begin(), decls.end());

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<rdf:RDF";
  for (const auto& [name, ns] : decls) {
    out += "\n    xmlns:" + name + "=\"" + xml_escape(ns, true) + "\"";
  }
  out += ">\n";

  std::size_t i = 0;
  while (i < triples.size()) {
    const auto& subject = triples[i].subject;
    out += subject.is_iri()
               ? "  <rdf:Description rdf:about=\"" + xml_escape(subject.value(), true) + "\">\n"
               : "  <rdf:Description rdf:nodeID=\"" + xml_escape(subject.value(), true) + "\">\n";
    for (; i < triples.size() && triples[i].subject == subject; ++i) {
      const auto& t = triples[i];
      auto [ns, local] = split_qname(t.predicate.value());
      auto qname = ns_prefix.at(ns) + ":" + local;
      const auto& o = t.object;
      out += "    <" + qname;
      if (o.is_iri()) {
        out += " rdf:resource=\"" + xml_escape(o.value(), true) + "\"/>\n";
      } else if (o.is_blank()) {
        out += " rdf:nodeID=\"" + xml_escape(o.value(), true) + "\"/>\n";
      } else if (o.datatype() == vocab::kXmlLiteral) {
        out += " rdf:parseType=\"Literal\">" + o.value() + "</" + qname + ">\n";
      } else {
        if (!o.language().empty()) {
          out += " xml:lang=\"" + o.language() + "\"";
        } else if (!o.datatype().empty()) {
          out += " rdf:datatype=\"" + xml_escape(o.datatype(), true) + "\"";
        }
        out += ">" + xml_escape(o.value(), false) + "</" + qname + ">\n";
      }
    }
    out += "  </rdf:Description>\n";
  }
  out += "</rdf:RDF>\n";
  return out;
}

std::map<std::string, Graph> split_per_concept(const Graph& expanded) {
  std::map<std::string, Graph> slices;
  auto type = expanded.find(Term::iri(vocab::kType));
  auto concept_class = expanded.find(Term::iri(vocab::skos("Concept")));
  if (!type || !concept_class) return slices;

  std::vector<rdf::TermId> concepts;
  expanded.for_each_match(std::nullopt, type, concept_class, [&](const rdf::IdTriple& t) {
    if (expanded.term(t.s).is_iri()) concepts.push_back(t.s);
  });
  for (auto node_id : concepts) {
    const auto& iri = expanded.term(node_id).value();
    auto cut = iri.find_last_of("/#");
    std::string code = cut == std::string::npos ? iri : iri.substr(cut + 1);
    if (code.empty() || slices.count(code)) continue;
    Graph slice;
    slice.prefixes() = expanded.prefixes();
    std::vector<rdf::TermId> owned;
    expanded.for_each_match(node_id, std::nullopt, std::nullopt, [&](const rdf::IdTriple& t) {
      slice.insert(expanded.to_triple(t));
      if (expanded.term(t.o).is_blank()) owned.push_back(t.o);
    });
    for (auto node : owned) {
      expanded.for_each_match(node, std::nullopt, std::nullopt,
                              [&](const rdf::IdTriple& t) { slice.insert(expanded.to_triple(t)); });
    }
    slice.freeze();
    slices.emplace(std::move(code), std::move(slice));
  }
  return slices;
}

std::optional<Format> format_from_name(std::string_view name) {
  if (name == "nt") return Format::NTriples;
  if (name == "ttl") return Format::Turtle;
  if (name == "rdf") return Format::RdfXml;
  return std::nullopt;
}

const char* extension(Format format) {
  switch (format) {
    case Format::NTriples: return "nt";
    case Format::Turtle: return "ttl";
    case Format::RdfXml: return "rdf";
  }
  return "";
}

const char* media_type(Format format) {
  switch (format) {
    case Format::NTriples: return "application/n-triples";
    case Format::Turtle: return "text/turtle";
    case Format::RdfXml: return "application/rdf+xml";
  }
  return "";
}

std::string serialize(const Graph& graph, Format format) {
  switch (format) {
    case Format::NTriples: return to_ntriples(graph);
    case Format::Turtle: return to_turtle(graph);
    case Format::RdfXml: return to_rdfxml(graph);
  }
  return {};
}

}  // namespace msc::serial
