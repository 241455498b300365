#include "fixtures.hpp"

#include "msc/entailment.hpp"
#include "msc/serializer.hpp"
#include "msc/source.hpp"
#include "msc/text.hpp"

namespace msc::testing {

std::string fixture_path(const std::string& name) { return std::string(MSC_FIXTURE_DIR) + "/" + name; }

std::string read_fixture(const std::string& name) { return text::read_file(fixture_path(name)); }

skos::BuildInputs fixture_inputs() {
  skos::BuildInputs in;
  in.records = source::parse_source(read_fixture("fixture.msc")).records;
  in.translations = skos::parse_translations(read_fixture("labels.tsv")).rows;
  in.version_mappings = skos::parse_version_mappings(read_fixture("mappings.tsv")).rows;
  in.collections = skos::parse_collections(read_fixture("collections.tsv")).rows;
  in.external_mappings = skos::parse_external_mappings(read_fixture("external.tsv")).rows;
  return in;
}

rdf::Graph fixture_master() {
  auto g = skos::build_graph(fixture_inputs()).graph;
  g.freeze();
  return g;
}

rdf::Graph fixture_expanded() { return entail::expand(fixture_master(), entail::builtin_ruleset()); }

rdf::Graph fixture_with_articles() {
  auto g = fixture_expanded().mutable_copy();
  for (const auto& t : serial::parse_ntriples(read_fixture("articles.nt")).triples()) g.insert(t);
  g.freeze();
  return g;
}

rdf::Graph tiny_master() {
  skos::BuildInputs in;
  in.records = source::parse_source(read_fixture("tiny.msc")).records;
  auto g = skos::build_graph(in).graph;
  g.freeze();
  return g;
}

rdf::Graph tiny_expanded() { return entail::expand(tiny_master(), entail::builtin_ruleset()); }

std::map<std::string, Defect> defective_fixtures() {
  const auto v = skos::vocabulary();
  auto master = [] { return fixture_master().mutable_copy(); };
  std::map<std::string, Defect> out;

  auto g = master();
  g.insert(msc_iri("53A04"), v.notation, rdf::Term::literal("53A05"));
  out["V1"] = {std::move(g)};

  g = master();
  g.insert(msc_iri("53A45"), v.pref_label, rdf::Term::lang_literal("Vector analysis", "en"));
  out["V2"] = {std::move(g)};

  g = master();
  g.insert(msc_iri("53A45"), v.alt_label, rdf::Term::lang_literal("Vector and tensor analysis", "en"));
  out["V3"] = {std::move(g)};

  g = master();
  g.insert(msc_iri("53Axx"), v.broader, msc_iri("53A45"));
  g.insert(msc_iri("53-XX"), v.broader, msc_iri("53Axx"));
  out["V4"] = {std::move(g)};

  g = master();
  g.insert(msc_iri("53A45"), v.broader, msc_iri("53A04"));
  out["V5"] = {std::move(g)};

  g = master();
  g.insert(msc_iri("53A45"), v.see_also, msc_iri("99Z99"));
  out["V6"] = {std::move(g)};

  g = fixture_expanded().mutable_copy();
  g.insert(msc_iri("53Axx"), v.narrower, msc_iri("58A10"));
  out["V7"] = {std::move(g), true};

  for (auto& [check, defect] : out) defect.graph.freeze();
  return out;
}

}  // namespace msc::testing
