#pragma once

// A small SELECT query language over a frozen Graph: prefixed names, basic
// graph patterns with ';' / ',' abbreviations, OPTIONAL blocks,
// FILTER langMatches(lang(?v), "range"), COUNT(?v) with GROUP BY, DISTINCT.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "msc/rdf.hpp"

namespace msc::query {

class QueryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Syntax errors carry the 1-based line and column of the offending token.
class SyntaxError : public QueryError {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& message)
      : QueryError("syntax error at line " + std::to_string(line) + ", column " +
                   std::to_string(column) + ": " + message),
        line_(line), column_(column), message_(message) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

struct Var {
  std::string name;
  friend bool operator==(const Var&, const Var&) = default;
};

using PatternTerm = std::variant<rdf::Term, Var>;

struct Pattern {
  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;
};

struct Bgp {
  std::vector<Pattern> patterns;
};

struct OptionalBlock {
  std::vector<Pattern> patterns;
};

struct LangFilter {
  std::string variable;
  std::string range;
};

using WhereElement = std::variant<Bgp, OptionalBlock, LangFilter>;

struct Projection {
  std::string variable;
  bool count = false;
  std::string column;  // output name; "count_<var>" unless given with AS
};

struct Query {
  rdf::PrefixMap prefixes;
  bool distinct = false;
  std::vector<Projection> projection;
  std::vector<WhereElement> where;
  std::vector<std::string> group_by;
};

// Parses and validates. Throws SyntaxError, rdf::UnknownPrefix (wrapped as
// QueryError) or QueryError for invalid projections.
Query parse_query(std::string_view text, const rdf::PrefixMap& predefined = {});

void validate(const Query& query);

using Value = std::variant<std::monostate, rdf::Term, std::uint64_t>;

struct ResultTable {
  std::vector<std::string> header;
  std::vector<bool> count_column;
  std::vector<std::vector<Value>> rows;
};

// Basic language-range filtering; "*" matches any non-empty tag.
bool lang_matches(std::string_view tag, std::string_view range);

ResultTable evaluate(const rdf::Graph& graph, const Query& query);

std::string to_tsv(const ResultTable& table);
// W3C query-results JSON layout.
std::string to_json(const ResultTable& table);

}  // namespace msc::query
