#pragma once

// Paths and prebuilt graphs for the files under tests/fixtures.

#include <map>
#include <string>

#include "msc/rdf.hpp"
#include "msc/skos.hpp"

namespace msc::testing {

std::string fixture_path(const std::string& name);
std::string read_fixture(const std::string& name);

// Inputs parsed from fixture.msc and its TSV companions.
skos::BuildInputs fixture_inputs();
// Master graph built from fixture_inputs(); frozen.
rdf::Graph fixture_master();
// Builtin expansion of fixture_master(); frozen.
rdf::Graph fixture_expanded();
// fixture_expanded() plus articles.nt; frozen.
rdf::Graph fixture_with_articles();

// Master and expansion of tiny.msc (53-XX, 53Axx, 53A45).
rdf::Graph tiny_master();
rdf::Graph tiny_expanded();

// One planted defect per check, keyed by check id ("V1".."V7"). Each graph is
// the clean fixture plus the smallest change that breaks the check; `expanded`
// tells which validation phase it is meant for.
struct Defect {
  rdf::Graph graph;
  bool expanded = false;
};
std::map<std::string, Defect> defective_fixtures();

inline const std::string kMsc = "http://msc2010.org/resources/MSC/2010/";
inline rdf::Term msc_iri(const std::string& code) { return rdf::Term::iri(kMsc + code); }

}  // namespace msc::testing
