#include "msc/skos.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "msc/text.hpp"

namespace msc::skos {

using rdf::Term;

namespace {

constexpr std::string_view kMathMl = "http://www.w3.org/1998/Math/MathML";

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

template <class Row, class Fn>
TsvResult<Row> parse_tsv(std::string_view text, std::size_t columns, Fn&& convert) {
  TsvResult<Row> result;
  if (auto bad = text::find_invalid_utf8(text)) {
    result.diagnostics.push_back({0, "input is not valid UTF-8 (byte offset " +
                                         std::to_string(*bad) + ")"});
    return result;
  }
  auto lines = text::split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    auto line = lines[n];
    if (text::trim(line).empty() || line.front() == '#') continue;
    auto fields = text::split(line, '\t');
    if (fields.size() != columns) {
      result.diagnostics.push_back({n + 1, "expected " + std::to_string(columns) +
                                               " tab-separated fields, found " +
                                               std::to_string(fields.size())});
      continue;
    }
    for (auto& f : fields) f = text::trim(f);
    convert(fields, n + 1, result);
  }
  return result;
}

bool valid_collection_id(std::string_view id) {
  return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-';
  });
}

}  // namespace

std::string SchemeConfig::old_base(const std::string& version) const {
  auto it = old_scheme_bases.find(version);
  if (it != old_scheme_bases.end()) return it->second;
  // strip the last path segment of base_iri ("2010/") and append the version
  std::string_view base = base_iri;
  base.remove_suffix(1);
  auto slash = base.rfind('/');
  return std::string(base.substr(0, slash + 1)) + version + "/";
}

void SchemeConfig::validate() const {
  if (!rdf::is_absolute_iri(base_iri) || base_iri.back() != '/') {
    throw ConfigError("base IRI must be absolute and end with '/': " + base_iri);
  }
  if (!rdf::is_absolute_iri(scheme())) throw ConfigError("invalid scheme IRI: " + scheme());
  if (!rdf::is_absolute_iri(vocab())) throw ConfigError("invalid vocabulary IRI: " + vocab());
  if (!rdf::is_valid_language_tag(default_language)) {
    throw ConfigError("invalid default language tag: " + default_language);
  }
}

Vocabulary vocabulary(const SchemeConfig& config) {
  auto skos = [](std::string_view local) { return Term::iri(vocab::skos(local)); };
  auto ext = [&](std::string_view local) { return Term::iri(config.vocab() + std::string(local)); };
  return Vocabulary{
      .type = Term::iri(vocab::kType),
      .sub_property_of = Term::iri(vocab::rdfs("subPropertyOf")),
      .xml_literal = Term::iri(vocab::kXmlLiteral),
      .concept_class = skos("Concept"),
      .concept_scheme = skos("ConceptScheme"),
      .collection = skos("Collection"),
      .in_scheme = skos("inScheme"),
      .notation = skos("notation"),
      .pref_label = skos("prefLabel"),
      .alt_label = skos("altLabel"),
      .note = skos("note"),
      .member = skos("member"),
      .broader = skos("broader"),
      .narrower = skos("narrower"),
      .broader_transitive = skos("broaderTransitive"),
      .related = skos("related"),
      .top_concept_of = skos("topConceptOf"),
      .has_top_concept = skos("hasTopConcept"),
      .exact_match = skos("exactMatch"),
      .close_match = skos("closeMatch"),
      .narrow_match = skos("narrowMatch"),
      .broad_match = skos("broadMatch"),
      .see_also = ext("seeAlso"),
      .see_mainly = ext("seeMainly"),
      .scoped_relation = ext("scopedRelation"),
      .scope = ext("scope"),
      .target = ext("target"),
      .scoped_relation_class = ext("ScopedRelation"),
      .math_label = ext("mathLabel"),
  };
}

rdf::PrefixMap default_prefixes(const SchemeConfig& config) {
  return rdf::PrefixMap{
      {"rdf", std::string(vocab::kRdf)},   {"rdfs", std::string(vocab::kRdfs)},
      {"xsd", std::string(vocab::kXsd)},   {"skos", std::string(vocab::kSkos)},
      {"dct", std::string(vocab::kDct)},   {"msc", config.base_iri},
      {"ext", config.vocab()},
  };
}

Term mint_iri(const SchemeConfig& config, std::string_view code) {
  if (!source::is_valid_code(code)) throw source::InvalidCode(std::string(code));
  return Term::iri(config.base_iri + std::string(code));
}

std::string plain_label(std::string_view label) {
  std::string out;
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (label[i] == '$' && (i == 0 || label[i - 1] != '\\')) continue;
    out += label[i];
  }
  return out;
}

std::string math_label_xml(std::string_view label) {
  std::string out;
  std::size_t pos = 0;
  while (pos < label.size()) {
    auto open = label.find('$', pos);
    auto close = open == std::string_view::npos ? open : label.find('$', open + 1);
    if (close == std::string_view::npos) {
      out += xml_escape(label.substr(pos));
      break;
    }
    out += xml_escape(label.substr(pos, open - pos));
    out += "<math xmlns=\"" + std::string(kMathMl) +
           "\"><semantics><annotation encoding=\"application/x-tex\">" +
           xml_escape(label.substr(open + 1, close - open - 1)) +
           "</annotation></semantics></math>";
    pos = close + 1;
  }
  return out;
}

TsvResult<Translation> parse_translations(std::string_view text) {
  return parse_tsv<Translation>(text, 3, [](const auto& f, std::size_t line, auto& result) {
    if (!source::is_valid_code(f[0])) {
      result.diagnostics.push_back({line, "invalid class code '" + std::string(f[0]) + "'"});
    } else if (!rdf::is_valid_language_tag(f[1])) {
      result.diagnostics.push_back({line, "invalid language tag '" + std::string(f[1]) + "'"});
    } else if (f[2].empty()) {
      result.diagnostics.push_back({line, "empty label"});
    } else {
      result.rows.push_back({std::string(f[0]), std::string(f[1]), std::string(f[2]), line});
    }
  });
}

TsvResult<VersionMapping> parse_version_mappings(std::string_view text) {
  return parse_tsv<VersionMapping>(text, 4, [](const auto& f, std::size_t line, auto& result) {
    static const std::map<std::string_view, MatchRelation> relations{
        {"exact", MatchRelation::Exact},
        {"close", MatchRelation::Close},
        {"narrow", MatchRelation::Narrow},
        {"broad", MatchRelation::Broad}};
    auto rel = relations.find(f[1]);
    if (!source::is_valid_code(f[0]) || !source::is_valid_code(f[2])) {
      result.diagnostics.push_back({line, "invalid class code in mapping '" + std::string(f[0]) +
                                              "' -> '" + std::string(f[2]) + "'"});
    } else if (rel == relations.end()) {
      result.diagnostics.push_back({line, "unknown mapping relation '" + std::string(f[1]) + "'"});
    } else if (f[3] != "2000" && f[3] != "1991") {
      result.diagnostics.push_back({line, "unknown scheme version '" + std::string(f[3]) + "'"});
    } else {
      result.rows.push_back(
          {std::string(f[0]), rel->second, std::string(f[2]), std::string(f[3]), line});
    }
  });
}

TsvResult<CollectionSpec> parse_collections(std::string_view text) {
  std::map<std::string, std::size_t> index;
  return parse_tsv<CollectionSpec>(text, 4, [&](const auto& f, std::size_t line, auto& result) {
    if (!valid_collection_id(f[0])) {
      result.diagnostics.push_back({line, "invalid collection id '" + std::string(f[0]) + "'"});
      return;
    }
    if (!rdf::is_valid_language_tag(f[1])) {
      result.diagnostics.push_back({line, "invalid language tag '" + std::string(f[1]) + "'"});
      return;
    }
    if (!source::is_valid_code(f[3])) {
      result.diagnostics.push_back({line, "invalid member code '" + std::string(f[3]) + "'"});
      return;
    }
    std::string id(f[0]);
    auto [it, fresh] = index.emplace(id, result.rows.size());
    if (fresh) result.rows.push_back({id, {}, {}});
    auto& spec = result.rows[it->second];
    auto lang = text::to_lower(f[1]);
    auto label = std::find_if(spec.labels.begin(), spec.labels.end(),
                              [&](const auto& l) { return l.first == lang; });
    if (label == spec.labels.end()) {
      spec.labels.emplace_back(lang, std::string(f[2]));
    } else if (label->second != f[2]) {
      result.diagnostics.push_back({line, "conflicting " + lang + " label for collection " + id});
    }
    if (std::find(spec.members.begin(), spec.members.end(), f[3]) == spec.members.end()) {
      spec.members.emplace_back(f[3]);
    }
  });
}

TsvResult<ExternalMapping> parse_external_mappings(std::string_view text) {
  return parse_tsv<ExternalMapping>(text, 3, [](const auto& f, std::size_t line, auto& result) {
    std::string_view target = f[2];
    if (target.size() >= 2 && target.front() == '<' && target.back() == '>') {
      target = target.substr(1, target.size() - 2);
    }
    if (!source::is_valid_code(f[0])) {
      result.diagnostics.push_back({line, "invalid class code '" + std::string(f[0]) + "'"});
    } else if (!rdf::is_absolute_iri(target)) {
      result.diagnostics.push_back({line, "invalid target IRI '" + std::string(f[2]) + "'"});
    } else {
      result.rows.push_back({std::string(f[0]), std::string(f[1]), std::string(target), line});
    }
  });
}

std::vector<Diagnostic> add_labels(rdf::Graph& graph, const std::vector<Translation>& rows,
                                   const SchemeConfig& config) {
  const auto v = vocabulary(config);
  std::vector<Diagnostic> diagnostics;
  for (const auto& row : rows) {
    if (!source::is_valid_code(row.code)) {
      diagnostics.push_back({row.line, "invalid class code '" + row.code + "'"});
      continue;
    }
    auto subject = mint_iri(config, row.code);
    if (!graph.contains({subject, v.type, v.concept_class})) {
      diagnostics.push_back({row.line, "label for unknown code " + row.code});
      continue;
    }
    if (!rdf::is_valid_language_tag(row.language)) {
      diagnostics.push_back({row.line, "invalid language tag '" + row.language + "'"});
      continue;
    }
    auto lang = text::to_lower(row.language);
    auto existing = graph.match(subject, v.pref_label, std::nullopt);
    bool taken = std::any_of(existing.begin(), existing.end(),
                             [&](const auto& t) { return t.object.language() == lang; });
    if (taken) {
      diagnostics.push_back(
          {row.line, "duplicate prefLabel language '" + lang + "' for " + row.code});
      continue;
    }
    graph.insert(subject, v.pref_label, Term::lang_literal(row.text, lang));
  }
  return diagnostics;
}

BuildResult build_graph(const BuildInputs& inputs, const SchemeConfig& config) {
  config.validate();
  const auto v = vocabulary(config);
  const auto& lang = config.default_language;
  BuildResult result;
  auto& g = result.graph;
  g.prefixes() = default_prefixes(config);

  const auto scheme = Term::iri(config.scheme());
  g.insert(scheme, v.type, v.concept_scheme);

  std::unordered_set<std::string> known;
  for (const auto& r : inputs.records) known.insert(r.code.text);

  bool uses_see_also = false, uses_see_mainly = false;
  for (const auto& r : inputs.records) {
    auto subject = mint_iri(config, r.code.text);
    g.insert(subject, v.type, v.concept_class);
    g.insert(subject, v.in_scheme, scheme);
    g.insert(subject, v.notation, Term::literal(r.code.text));
    g.insert(subject, v.pref_label, Term::lang_literal(plain_label(r.label), lang));
    if (r.has_math_markup) {
      g.insert(subject, v.math_label,
               Term::typed_literal(math_label_xml(r.label), vocab::kXmlLiteral));
    }
    if (r.code.parent) {
      g.insert(subject, v.broader, mint_iri(config, *r.code.parent));
    } else {
      g.insert(subject, v.top_concept_of, scheme);
    }
    for (std::size_t i = 0; i < r.crossrefs.size(); ++i) {
      const auto& ref = r.crossrefs[i];
      switch (ref.kind) {
        case source::CrossRefKind::SeeAlso:
        case source::CrossRefKind::SeeMainly: {
          bool also = ref.kind == source::CrossRefKind::SeeAlso;
          (also ? uses_see_also : uses_see_mainly) = true;
          for (const auto& t : ref.targets) {
            g.insert(subject, also ? v.see_also : v.see_mainly, mint_iri(config, t));
          }
          break;
        }
        case source::CrossRefKind::ForSee: {
          auto node = Term::blank("sr-" + r.code.text + "-" + std::to_string(i));
          g.insert(subject, v.scoped_relation, node);
          g.insert(node, v.type, v.scoped_relation_class);
          g.insert(node, v.scope, Term::lang_literal(ref.scope.value_or(""), lang));
          for (const auto& t : ref.targets) g.insert(node, v.target, mint_iri(config, t));
          break;
        }
      }
    }
    if (r.note) g.insert(subject, v.note, Term::lang_literal(*r.note, lang));
  }
  if (uses_see_also) g.insert(v.see_also, v.sub_property_of, v.related);
  if (uses_see_mainly) g.insert(v.see_mainly, v.sub_property_of, v.related);

  auto labels = add_labels(g, inputs.translations, config);
  result.diagnostics.insert(result.diagnostics.end(), labels.begin(), labels.end());

  for (const auto& m : inputs.version_mappings) {
    if (!known.count(m.new_code)) {
      result.diagnostics.push_back({m.line, "version mapping to unknown code " + m.new_code});
      continue;
    }
    const Term* property = nullptr;
    switch (m.relation) {
      case MatchRelation::Exact: property = &v.exact_match; break;
      case MatchRelation::Close: property = &v.close_match; break;
      case MatchRelation::Narrow: property = &v.narrow_match; break;
      case MatchRelation::Broad: property = &v.broad_match; break;
    }
    g.insert(mint_iri(config, m.new_code), *property,
             Term::iri(config.old_base(m.version) + m.old_code));
  }

  for (const auto& c : inputs.collections) {
    if (!valid_collection_id(c.id)) {
      result.diagnostics.push_back({0, "invalid collection id '" + c.id + "'"});
      continue;
    }
    auto node = Term::iri(config.base_iri + "collection/" + c.id);
    std::vector<Term> members;
    for (const auto& code : c.members) {
      if (known.count(code)) {
        members.push_back(mint_iri(config, code));
      } else {
        result.diagnostics.push_back(
            {0, "collection " + c.id + " lists unknown member code " + code});
      }
    }
    g.insert(node, v.type, v.collection);
    for (const auto& [label_lang, text] : c.labels) {
      g.insert(node, v.pref_label, Term::lang_literal(text, label_lang));
    }
    for (const auto& m : members) g.insert(node, v.member, m);
  }

  for (const auto& e : inputs.external_mappings) {
    if (!known.count(e.code)) {
      result.diagnostics.push_back({e.line, "external mapping for unknown code " + e.code});
      continue;
    }
    try {
      auto property = rdf::is_absolute_iri(e.property) && e.property.find("://") != std::string::npos
                          ? Term::iri(e.property)
                          : g.prefixes().expand(e.property);
      g.insert(mint_iri(config, e.code), property, Term::iri(e.target));
    } catch (const rdf::RdfError& err) {
      result.diagnostics.push_back({e.line, err.what()});
    }
  }
  return result;
}

}  // namespace msc::skos
