#pragma once

// Structural checks over master and expanded graphs.
//
//   V1  one notation per concept, equal to its code; notations globally unique
//   V2  at most one prefLabel per (concept, language)
//   V3  prefLabel and altLabel values disjoint per concept
//   V4  broader is acyclic
//   V5  tree shape: top concepts have no broader, all others exactly one
//   V6  cross-reference, mapping and member targets resolve (warning)
//   V7  broader/narrower are mutual inverses (expanded phase only)
//   V8  level counts and markup-label fraction (statistics block)

#include <cstddef>
#include <string>
#include <vector>

#include "msc/rdf.hpp"
#include "msc/skos.hpp"

namespace msc::validate {

enum class Phase { Master, Expanded };
enum class Severity { Error, Warning };

const char* to_string(Severity severity);

struct Finding {
  std::string check;    // "V1" .. "V7"
  Severity severity = Severity::Error;
  std::string subject;  // class code, or the full IRI / blank label when not a concept
  std::string message;

  friend bool operator==(const Finding&, const Finding&) = default;
};

struct Stats {
  std::size_t concepts = 0;
  std::size_t top = 0;
  std::size_t intermediate = 0;
  std::size_t leaves = 0;
  std::size_t unclassified = 0;  // concepts whose code does not parse
  std::size_t math_labels = 0;
  double math_fraction() const {
    return concepts ? static_cast<double>(math_labels) / static_cast<double>(concepts) : 0.0;
  }

  friend bool operator==(const Stats&, const Stats&) = default;
};

struct Report {
  std::vector<Finding> findings;  // ordered by check id, then subject
  Stats stats;

  std::size_t errors() const;
  std::size_t warnings() const;
  friend bool operator==(const Report&, const Report&) = default;
};

Report validate(const rdf::Graph& graph, Phase phase, const skos::SchemeConfig& config = {});

std::string to_text(const Report& report);
// check-id \t severity \t subject \t message
std::string to_tsv(const Report& report);
std::string stats_text(const Stats& stats);

}  // namespace msc::validate
