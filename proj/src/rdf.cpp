#include "msc/rdf.hpp"

#include <algorithm>
#include <cstdio>
#include <tuple>

#include "msc/text.hpp"

namespace msc::rdf {

namespace {

bool is_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alnum(char c) { return is_alpha(c) || is_digit(c); }

void append_uchar(std::string& out, char32_t cp) {
  char buf[12];
  if (cp <= 0xFFFF) {
    std::snprintf(buf, sizeof buf, "\\u%04X", static_cast<unsigned>(cp));
  } else {
    std::snprintf(buf, sizeof buf, "\\U%08X", static_cast<unsigned>(cp));
  }
  out += buf;
}

}  // namespace

bool is_absolute_iri(std::string_view iri) {
  auto colon = iri.find(':');
  if (colon == std::string_view::npos || colon == 0 || !is_alpha(iri[0])) return false;
  for (std::size_t i = 1; i < colon; ++i) {
    char c = iri[i];
    if (!is_alnum(c) && c != '+' && c != '-' && c != '.') return false;
  }
  for (char c : iri) {
    auto u = static_cast<unsigned char>(c);
    if (u <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' ||
        c == '^' || c == '`' || c == '\\') {
      return false;
    }
  }
  return true;
}

bool is_valid_language_tag(std::string_view tag) {
  auto parts = text::split(tag, '-');
  for (std::size_t i = 0; i < parts.size(); ++i) {
    auto part = parts[i];
    if (part.empty() || part.size() > 8) return false;
    for (char c : part) {
      if (i == 0 ? !is_alpha(c) : !is_alnum(c)) return false;
    }
  }
  return true;
}

bool is_valid_blank_label(std::string_view label) {
  if (label.empty() || label.back() == '.') return false;
  if (!is_alnum(label[0]) && label[0] != '_') return false;
  return std::all_of(label.begin(), label.end(), [](char c) {
    return is_alnum(c) || c == '_' || c == '-' || c == '.';
  });
}

Term Term::iri(std::string value) {
  if (!is_absolute_iri(value)) throw RdfError("not an absolute IRI: '" + value + "'");
  return Term(TermKind::Iri, std::move(value), {}, {});
}

Term Term::blank(std::string label) {
  if (!is_valid_blank_label(label)) throw RdfError("invalid blank node label: '" + label + "'");
  return Term(TermKind::BlankNode, std::move(label), {}, {});
}

Term Term::literal(std::string lexical) {
  return Term(TermKind::Literal, std::move(lexical), {}, {});
}

Term Term::lang_literal(std::string lexical, std::string_view language) {
  if (!is_valid_language_tag(language)) {
    throw RdfError("invalid language tag: '" + std::string(language) + "'");
  }
  return Term(TermKind::Literal, std::move(lexical), text::to_lower(language), {});
}

Term Term::typed_literal(std::string lexical, std::string datatype) {
  if (!is_absolute_iri(datatype)) throw RdfError("invalid datatype IRI: '" + datatype + "'");
  return Term(TermKind::Literal, std::move(lexical), {}, std::move(datatype));
}

std::string Term::to_ntriples() const {
  switch (kind_) {
    case TermKind::Iri:
      return "<" + escape_iri(value_) + ">";
    case TermKind::BlankNode:
      return "_:" + value_;
    case TermKind::Literal: {
      std::string out = "\"" + escape_literal(value_) + "\"";
      if (!language_.empty()) {
        out += "@" + language_;
      } else if (!datatype_.empty()) {
        out += "^^<" + escape_iri(datatype_) + ">";
      }
      return out;
    }
  }
  return {};
}

std::size_t TermHash::operator()(const Term& t) const {
  std::size_t h = std::hash<std::string>{}(t.value());
  h ^= std::hash<std::string>{}(t.language()) + 0x9E3779B9 + (h << 6) + (h >> 2);
  h ^= std::hash<std::string>{}(t.datatype()) + 0x9E3779B9 + (h << 6) + (h >> 2);
  return h ^ static_cast<std::size_t>(t.kind());
}

std::string Triple::to_ntriples() const {
  return subject.to_ntriples() + " " + predicate.to_ntriples() + " " + object.to_ntriples() + " .";
}

void check_triple(const Term& s, const Term& p, const Term& o) {
  (void)o;
  if (s.is_literal()) throw RdfError("literal in subject position: " + s.to_ntriples());
  if (!p.is_iri()) throw RdfError("predicate is not an IRI: " + p.to_ntriples());
}

std::string escape_literal(std::string_view lexical) {
  std::string out;
  out.reserve(lexical.size() + 2);
  std::size_t pos = 0;
  while (pos < lexical.size()) {
    char c = lexical[pos];
    auto u = static_cast<unsigned char>(c);
    if (u >= 0x80) {
      append_uchar(out, text::decode_utf8(lexical, pos));
      continue;
    }
    ++pos;
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (u < 0x20 || u == 0x7F) {
          append_uchar(out, u);
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string escape_iri(std::string_view iri) {
  std::string out;
  out.reserve(iri.size());
  std::size_t pos = 0;
  while (pos < iri.size()) {
    if (static_cast<unsigned char>(iri[pos]) >= 0x80) {
      append_uchar(out, text::decode_utf8(iri, pos));
    } else {
      out += iri[pos++];
    }
  }
  return out;
}

Term PrefixMap::expand(std::string_view curie) const {
  auto colon = curie.find(':');
  if (colon == std::string_view::npos) {
    throw RdfError("not a prefixed name: '" + std::string(curie) + "'");
  }
  std::string name(curie.substr(0, colon));
  auto it = entries_.find(name);
  if (it == entries_.end()) throw UnknownPrefix(name);
  return Term::iri(it->second + std::string(curie.substr(colon + 1)));
}

std::optional<std::string> PrefixMap::compact(std::string_view iri) const {
  auto local_ok = [](std::string_view local) {
    if (local.empty()) return true;
    if (local.front() == '-' || local.front() == '.' || local.back() == '.') return false;
    return std::all_of(local.begin(), local.end(), [](char c) {
      return is_alnum(c) || c == '_' || c == '-' || c == '.';
    });
  };
  const std::pair<const std::string, std::string>* best = nullptr;
  for (const auto& entry : entries_) {
    const auto& ns = entry.second;
    if (ns.empty() || iri.size() < ns.size() || iri.substr(0, ns.size()) != ns) continue;
    if (!local_ok(iri.substr(ns.size()))) continue;
    if (!best || ns.size() > best->second.size()) best = &entry;
  }
  if (!best) return std::nullopt;
  return best->first + ":" + std::string(iri.substr(best->second.size()));
}

Term expand_curie(const PrefixMap& prefixes, std::string_view curie) {
  return prefixes.expand(curie);
}

const Graph::Posting Graph::kEmpty{};

TermId Graph::intern(const Term& term) {
  auto it = ids_.find(term);
  if (it != ids_.end()) return it->second;
  auto id = static_cast<TermId>(terms_.size());
  terms_.push_back(term);
  keys_.push_back(term.to_ntriples());
  ids_.emplace(term, id);
  return id;
}

std::optional<TermId> Graph::find(const Term& term) const {
  auto it = ids_.find(term);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

bool Graph::insert(const Triple& triple) {
  return insert(triple.subject, triple.predicate, triple.object);
}

bool Graph::insert(const Term& s, const Term& p, const Term& o) {
  if (frozen_) throw RdfError("graph is frozen");
  check_triple(s, p, o);
  return insert_ids({intern(s), intern(p), intern(o)});
}

bool Graph::insert_ids(const IdTriple& t) {
  if (frozen_) throw RdfError("graph is frozen");
  check_triple(terms_.at(t.s), terms_.at(t.p), terms_.at(t.o));
  if (!set_.insert(t).second) return false;
  auto idx = static_cast<std::uint32_t>(triples_.size());
  triples_.push_back(t);
  by_subject_[t.s].push_back(idx);
  by_predicate_[t.p].push_back(idx);
  by_object_[t.o].push_back(idx);
  return true;
}

bool Graph::contains(const Triple& triple) const {
  auto s = find(triple.subject);
  auto p = find(triple.predicate);
  auto o = find(triple.object);
  return s && p && o && set_.count({*s, *p, *o}) != 0;
}

bool Graph::less(const IdTriple& a, const IdTriple& b) const {
  return std::tie(keys_[a.s], keys_[a.p], keys_[a.o]) <
         std::tie(keys_[b.s], keys_[b.p], keys_[b.o]);
}

std::vector<Triple> Graph::match(const std::optional<Term>& s, const std::optional<Term>& p,
                                 const std::optional<Term>& o) const {
  std::optional<TermId> sid, pid, oid;
  if (s && !(sid = find(*s))) return {};
  if (p && !(pid = find(*p))) return {};
  if (o && !(oid = find(*o))) return {};
  std::vector<IdTriple> hits;
  for_each_match(sid, pid, oid, [&](const IdTriple& t) { hits.push_back(t); });
  std::sort(hits.begin(), hits.end(), [this](const auto& a, const auto& b) { return less(a, b); });
  std::vector<Triple> out;
  out.reserve(hits.size());
  for (const auto& t : hits) out.push_back(to_triple(t));
  return out;
}

Graph Graph::mutable_copy() const {
  Graph copy(*this);
  copy.frozen_ = false;
  return copy;
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.size() != b.size()) return false;
  for (const auto& t : a.triples_) {
    auto s = b.find(a.terms_[t.s]);
    auto p = b.find(a.terms_[t.p]);
    auto o = b.find(a.terms_[t.o]);
    if (!s || !p || !o || !b.set_.count({*s, *p, *o})) return false;
  }
  return true;
}

}  // namespace msc::rdf
