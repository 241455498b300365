#pragma once

// Reader for the line-oriented master source.
//
//   % comment                     (column 1)
//   53A45 Vector and tensor analysis [See also 58A10] | optional note
//
// Descriptions may embed "[See also CODES]", "[See mainly CODES]" and
// "{For SCOPE, see CODES}" clauses; CODES are separated by ", " or " and ".
// The hierarchy is not written down: each code's parent follows from the
// numbering scheme.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace msc::source {

class InvalidCode : public std::runtime_error {
 public:
  explicit InvalidCode(std::string code)
      : std::runtime_error("invalid class code '" + code + "'"), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Unrecoverable input problems (unreadable file, malformed UTF-8).
class SourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Level { Top, Middle, Leaf };

const char* to_string(Level level);

struct ClassCode {
  std::string text;
  Level level = Level::Top;
  std::optional<std::string> parent;

  friend bool operator==(const ClassCode&, const ClassCode&) = default;
};

// Top "NN-XX"; middle "NNLxx"; leaf "NNLNN" or "NN-NN".
ClassCode parse_code(std::string_view text);
bool is_valid_code(std::string_view text);

enum class CrossRefKind { SeeAlso, SeeMainly, ForSee };

struct CrossRef {
  CrossRefKind kind = CrossRefKind::SeeAlso;
  std::optional<std::string> scope;  // ForSee only
  std::vector<std::string> targets;

  friend bool operator==(const CrossRef&, const CrossRef&) = default;
};

struct Diagnostic {
  std::size_t line = 0;  // 0 when not tied to a line
  std::string message;

  std::string to_string() const;
};

struct Extracted {
  std::string label;
  std::vector<CrossRef> crossrefs;
  // Clauses that could not be converted; they stay in the label verbatim.
  std::vector<std::string> problems;
};

Extracted extract_crossrefs(std::string_view description);

bool has_math_markup(std::string_view label);

struct SourceRecord {
  ClassCode code;
  std::string label;
  std::vector<CrossRef> crossrefs;
  bool has_math_markup = false;
  std::optional<std::string> note;
  std::size_t line = 0;

  // Line numbers are provenance and do not take part in equality.
  friend bool operator==(const SourceRecord& a, const SourceRecord& b) {
    return a.code == b.code && a.label == b.label && a.crossrefs == b.crossrefs &&
           a.has_math_markup == b.has_math_markup && a.note == b.note;
  }
};

// Renders a record back into a source line that parses to an equal record.
std::string render_record(const SourceRecord& record);

struct ParseResult {
  std::vector<SourceRecord> records;
  std::vector<Diagnostic> diagnostics;
};

// Throws SourceError when the input is not valid UTF-8.
ParseResult parse_source(std::string_view text);

}  // namespace msc::source
