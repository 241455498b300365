#pragma once

// Forward-chaining materialization over a Graph. Rules are plain data: a
// conjunction of premise patterns implying a conjunction of conclusion
// patterns. Evaluation is semi-naive and stops at the least fixpoint.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "msc/rdf.hpp"
#include "msc/skos.hpp"

namespace msc::entail {

class RuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Variable {
  std::string name;
  friend bool operator==(const Variable&, const Variable&) = default;
};

using PatternTerm = std::variant<rdf::Term, Variable>;

struct TriplePattern {
  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;
  friend bool operator==(const TriplePattern&, const TriplePattern&) = default;
};

struct Rule {
  std::string id;
  std::vector<TriplePattern> premises;
  std::vector<TriplePattern> conclusions;
  friend bool operator==(const Rule&, const Rule&) = default;
};

// Rejects rules whose conclusions use a variable absent from the premises,
// or whose conclusion predicates are not IRIs.
void check_rule(const Rule& rule);

// R1..R9: inverse, transitive and symmetric SKOS properties, scheme
// membership, and projection of the extension cross-references to
// skos:related.
std::vector<Rule> builtin_ruleset(const skos::SchemeConfig& config = {});

// "id: p(?x, ?y) & q(?y, ?z) => r(?x, ?z)", one rule per line, '#' comments.
// Terms are ?variables, CURIEs, <iris> or "literals"[@lang].
std::vector<Rule> parse_rules(std::string_view text, const rdf::PrefixMap& prefixes);

std::string render_rule(const Rule& rule, const rdf::PrefixMap& prefixes);

struct ExpandStats {
  std::size_t rounds = 0;
  std::size_t derived = 0;
};

// Least fixpoint of `graph` under `rules`. The input is left untouched; the
// result is a new, frozen graph carrying the same prefixes.
rdf::Graph expand(const rdf::Graph& graph, const std::vector<Rule>& rules,
                  ExpandStats* stats = nullptr);

}  // namespace msc::entail
