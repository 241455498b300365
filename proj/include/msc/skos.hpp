#pragma once

// Builds the non-redundant SKOS master graph from parsed source records and
// the auxiliary TSV inputs (translations, version mappings, collections,
// external mappings). Only the child->parent direction of the hierarchy is
// written; inverse and transitive links are left to entailment.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "msc/rdf.hpp"
#include "msc/source.hpp"
#include "msc/vocab.hpp"

namespace msc::skos {

using source::Diagnostic;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SchemeConfig {
  std::string base_iri{vocab::kDefaultBase};
  std::string scheme_iri;  // empty: same as base_iri
  std::string vocab_iri;   // empty: base_iri + "vocab#"
  std::string default_language = "en";
  // Scheme version ("2000", "1991") -> IRI base. Missing versions default to
  // a sibling of base_iri, e.g. .../MSC/2000/.
  std::map<std::string, std::string> old_scheme_bases;

  std::string scheme() const { return scheme_iri.empty() ? base_iri : scheme_iri; }
  std::string vocab() const { return vocab_iri.empty() ? base_iri + "vocab#" : vocab_iri; }
  std::string old_base(const std::string& version) const;

  // Throws ConfigError.
  void validate() const;
};

// All IRIs the builder, entailment rules and validator agree on.
struct Vocabulary {
  rdf::Term type, sub_property_of, xml_literal;
  rdf::Term concept_class, concept_scheme, collection;
  rdf::Term in_scheme, notation, pref_label, alt_label, note, member;
  rdf::Term broader, narrower, broader_transitive, related;
  rdf::Term top_concept_of, has_top_concept;
  rdf::Term exact_match, close_match, narrow_match, broad_match;
  rdf::Term see_also, see_mainly, scoped_relation, scope, target, scoped_relation_class;
  rdf::Term math_label;
};

Vocabulary vocabulary(const SchemeConfig& config = {});

// rdf, rdfs, xsd, skos, dct, msc (base), ext (extension vocabulary).
rdf::PrefixMap default_prefixes(const SchemeConfig& config = {});

// base_iri + code; throws source::InvalidCode.
rdf::Term mint_iri(const SchemeConfig& config, std::string_view code);

// Label with "$" delimiters removed.
std::string plain_label(std::string_view label);
// XML content for the markup label: text is escaped, each $...$ span becomes
// a MathML element carrying the TeX source as an annotation.
std::string math_label_xml(std::string_view label);

struct Translation {
  std::string code;
  std::string language;
  std::string text;
  std::size_t line = 0;
};

enum class MatchRelation { Exact, Close, Narrow, Broad };

struct VersionMapping {
  std::string old_code;
  MatchRelation relation = MatchRelation::Exact;
  std::string new_code;
  std::string version;  // "2000" or "1991"
  std::size_t line = 0;
};

struct CollectionSpec {
  std::string id;
  std::vector<std::pair<std::string, std::string>> labels;  // (language, text)
  std::vector<std::string> members;
};

struct ExternalMapping {
  std::string code;
  std::string property;  // CURIE or absolute IRI
  std::string target;
  std::size_t line = 0;
};

template <class Row>
struct TsvResult {
  std::vector<Row> rows;
  std::vector<Diagnostic> diagnostics;
};

// code \t lang \t label
TsvResult<Translation> parse_translations(std::string_view text);
// old-code \t exact|close|narrow|broad \t new-code \t 2000|1991
TsvResult<VersionMapping> parse_version_mappings(std::string_view text);
// collection-id \t lang \t label \t member-code, one row per member
TsvResult<CollectionSpec> parse_collections(std::string_view text);
// code \t property-curie \t target-iri
TsvResult<ExternalMapping> parse_external_mappings(std::string_view text);

struct BuildInputs {
  std::vector<source::SourceRecord> records;
  std::vector<Translation> translations;
  std::vector<VersionMapping> version_mappings;
  std::vector<CollectionSpec> collections;
  std::vector<ExternalMapping> external_mappings;
};

struct BuildResult {
  rdf::Graph graph;
  std::vector<Diagnostic> diagnostics;
};

BuildResult build_graph(const BuildInputs& inputs, const SchemeConfig& config = {});

// Adds one prefLabel per row. Rows naming an unknown concept, or a language
// the concept already has a prefLabel for, are reported and skipped.
std::vector<Diagnostic> add_labels(rdf::Graph& graph, const std::vector<Translation>& rows,
                                   const SchemeConfig& config = {});

}  // namespace msc::skos
