#pragma once

// Minimal RDF model: terms, triples, prefix maps and an indexed in-memory
// triple set. Terms are interned per graph; every triple is stored once as
// a triple of term ids and indexed by subject, predicate and object.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace msc::rdf {

class RdfError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownPrefix : public RdfError {
 public:
  explicit UnknownPrefix(std::string prefix)
      : RdfError("unknown prefix '" + prefix + "'"), prefix_(std::move(prefix)) {}
  const std::string& prefix() const { return prefix_; }

 private:
  std::string prefix_;
};

enum class TermKind : std::uint8_t { Iri, BlankNode, Literal };

bool is_absolute_iri(std::string_view iri);
bool is_valid_language_tag(std::string_view tag);
bool is_valid_blank_label(std::string_view label);

class Term {
 public:
  static Term iri(std::string value);
  static Term blank(std::string label);
  static Term literal(std::string lexical);
  static Term lang_literal(std::string lexical, std::string_view language);
  static Term typed_literal(std::string lexical, std::string datatype);

  TermKind kind() const { return kind_; }
  bool is_iri() const { return kind_ == TermKind::Iri; }
  bool is_blank() const { return kind_ == TermKind::BlankNode; }
  bool is_literal() const { return kind_ == TermKind::Literal; }

  // IRI string, blank-node label, or literal lexical form.
  const std::string& value() const { return value_; }
  // Lowercased; empty when the literal carries no language tag.
  const std::string& language() const { return language_; }
  // Empty for plain and language-tagged literals.
  const std::string& datatype() const { return datatype_; }

  // Canonical N-Triples form of the term.
  std::string to_ntriples() const;

  friend bool operator==(const Term&, const Term&) = default;

 private:
  Term(TermKind kind, std::string value, std::string language, std::string datatype)
      : kind_(kind), value_(std::move(value)), language_(std::move(language)),
        datatype_(std::move(datatype)) {}

  TermKind kind_;
  std::string value_;
  std::string language_;
  std::string datatype_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const;
};

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  std::string to_ntriples() const;
  friend bool operator==(const Triple&, const Triple&) = default;
};

// Throws RdfError when the subject is a literal or the predicate is not an IRI.
void check_triple(const Term& s, const Term& p, const Term& o);

// N-Triples escaping shared by the serializers.
std::string escape_literal(std::string_view lexical);
std::string escape_iri(std::string_view iri);

class PrefixMap {
 public:
  PrefixMap() = default;
  PrefixMap(std::initializer_list<std::pair<const std::string, std::string>> init)
      : entries_(init) {}

  void add(std::string name, std::string iri) { entries_[std::move(name)] = std::move(iri); }
  bool contains(const std::string& name) const { return entries_.count(name) != 0; }
  const std::map<std::string, std::string>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  // "prefix:local" -> IRI; throws UnknownPrefix.
  Term expand(std::string_view curie) const;

  // Longest registered namespace that yields a local name usable in a Turtle
  // prefixed name.
  std::optional<std::string> compact(std::string_view iri) const;

 private:
  std::map<std::string, std::string> entries_;
};

Term expand_curie(const PrefixMap& prefixes, std::string_view curie);

using TermId = std::uint32_t;

struct IdTriple {
  TermId s;
  TermId p;
  TermId o;
  friend bool operator==(const IdTriple&, const IdTriple&) = default;
};

struct IdTripleHash {
  std::size_t operator()(const IdTriple& t) const {
    std::uint64_t h = t.s;
    h = h * 0x9E3779B97F4A7C15ULL ^ t.p;
    h = h * 0x9E3779B97F4A7C15ULL ^ t.o;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

class Graph {
 public:
  Graph() = default;

  // Returns true iff the triple was not yet present. Throws RdfError on a
  // malformed triple or when the graph is frozen.
  bool insert(const Triple& triple);
  bool insert(const Term& s, const Term& p, const Term& o);
  // Ids must come from intern() on this graph.
  bool insert_ids(const IdTriple& t);

  TermId intern(const Term& term);
  std::optional<TermId> find(const Term& term) const;
  const Term& term(TermId id) const { return terms_[id]; }
  // N-Triples form of the term, cached for ordering.
  const std::string& key(TermId id) const { return keys_[id]; }

  bool contains(const Triple& triple) const;
  bool contains_ids(const IdTriple& t) const { return set_.count(t) != 0; }

  // Triples agreeing with every bound position, ordered by serialized terms.
  std::vector<Triple> match(const std::optional<Term>& s, const std::optional<Term>& p,
                            const std::optional<Term>& o) const;

  // Unordered id-level scan using the most selective index.
  template <class Fn>
  void for_each_match(std::optional<TermId> s, std::optional<TermId> p, std::optional<TermId> o,
                      Fn&& fn) const;

  std::vector<Triple> triples() const { return match(std::nullopt, std::nullopt, std::nullopt); }
  const std::vector<IdTriple>& id_triples() const { return triples_; }
  Triple to_triple(const IdTriple& t) const { return {terms_[t.s], terms_[t.p], terms_[t.o]}; }

  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }

  PrefixMap& prefixes() { return prefixes_; }
  const PrefixMap& prefixes() const { return prefixes_; }

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }
  // Unfrozen deep copy.
  Graph mutable_copy() const;

  // Compares triple sets; prefix maps and interned-but-unused terms are ignored.
  friend bool operator==(const Graph& a, const Graph& b);

 private:
  using Posting = std::vector<std::uint32_t>;
  static const Posting kEmpty;

  const Posting& postings(const std::unordered_map<TermId, Posting>& index, TermId id) const {
    auto it = index.find(id);
    return it == index.end() ? kEmpty : it->second;
  }
  bool less(const IdTriple& a, const IdTriple& b) const;

  std::vector<Term> terms_;
  std::vector<std::string> keys_;
  std::unordered_map<Term, TermId, TermHash> ids_;

  std::vector<IdTriple> triples_;
  std::unordered_set<IdTriple, IdTripleHash> set_;
  std::unordered_map<TermId, Posting> by_subject_;
  std::unordered_map<TermId, Posting> by_predicate_;
  std::unordered_map<TermId, Posting> by_object_;

  PrefixMap prefixes_;
  bool frozen_ = false;
};

template <class Fn>
void Graph::for_each_match(std::optional<TermId> s, std::optional<TermId> p,
                           std::optional<TermId> o, Fn&& fn) const {
  if (s && p && o) {
    IdTriple t{*s, *p, *o};
    if (set_.count(t)) fn(t);
    return;
  }
  const Posting* best = nullptr;
  auto consider = [&](const std::unordered_map<TermId, Posting>& index, std::optional<TermId> id) {
    if (!id) return;
    const Posting& list = postings(index, *id);
    if (!best || list.size() < best->size()) best = &list;
  };
  consider(by_subject_, s);
  consider(by_predicate_, p);
  consider(by_object_, o);
  auto fits = [&](const IdTriple& t) {
    return (!s || t.s == *s) && (!p || t.p == *p) && (!o || t.o == *o);
  };
  if (!best) {
    for (const auto& t : triples_) fn(t);
    return;
  }
  for (auto idx : *best) {
    const auto& t = triples_[idx];
    if (fits(t)) fn(t);
  }
}

}  // namespace msc::rdf
