#include "msc/source.hpp"

#include <algorithm>
#include <unordered_set>

#include "msc/text.hpp"

namespace msc::source {

namespace {

bool digit(char c) { return c >= '0' && c <= '9'; }
bool upper(char c) { return c >= 'A' && c <= 'Z'; }

std::optional<ClassCode> try_parse_code(std::string_view s) {
  if (s.size() != 5 || !digit(s[0]) || !digit(s[1])) return std::nullopt;
  std::string text(s);
  std::string top = text.substr(0, 2) + "-XX";
  if (s[2] == '-') {
    if (s.substr(3) == "XX") return ClassCode{text, Level::Top, std::nullopt};
    if (digit(s[3]) && digit(s[4])) return ClassCode{text, Level::Leaf, top};
    return std::nullopt;
  }
  if (!upper(s[2])) return std::nullopt;
  if (s.substr(3) == "xx") return ClassCode{text, Level::Middle, top};
  if (digit(s[3]) && digit(s[4])) return ClassCode{text, Level::Leaf, text.substr(0, 3) + "xx"};
  return std::nullopt;
}

// Index of the next unescaped '$' toggling math mode, used to skip spans.
bool toggles_math(std::string_view s, std::size_t i) {
  return s[i] == '$' && (i == 0 || s[i - 1] != '\\');
}

std::size_t find_outside_math(std::string_view s, char wanted, std::size_t from) {
  bool math = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (toggles_math(s, i)) {
      math = !math;
      continue;
    }
    if (!math && i >= from && s[i] == wanted) return i;
  }
  return std::string_view::npos;
}

// Splits "A, B and C" into codes; nullopt when any item is not a code.
std::optional<std::vector<std::string>> parse_code_list(std::string_view list) {
  std::vector<std::string> codes;
  std::vector<std::string_view> pieces;
  std::size_t start = 0;
  while (start <= list.size()) {
    auto comma = list.find(", ", start);
    auto conj = list.find(" and ", start);
    auto cut = std::min(comma, conj);
    if (cut == std::string_view::npos) {
      pieces.push_back(list.substr(start));
      break;
    }
    pieces.push_back(list.substr(start, cut - start));
    start = cut + (cut == comma ? 2 : 5);
  }
  for (auto piece : pieces) {
    auto code = text::trim(piece);
    if (!is_valid_code(code)) return std::nullopt;
    codes.emplace_back(code);
  }
  if (codes.empty()) return std::nullopt;
  return codes;
}

std::optional<CrossRef> parse_clause(char open, std::string_view body) {
  if (open == '[') {
    CrossRefKind kind;
    std::string_view rest;
    if (body.starts_with("See also ")) {
      kind = CrossRefKind::SeeAlso;
      rest = body.substr(9);
    } else if (body.starts_with("See mainly ")) {
      kind = CrossRefKind::SeeMainly;
      rest = body.substr(11);
    } else {
      return std::nullopt;
    }
    auto codes = parse_code_list(rest);
    if (!codes) return std::nullopt;
    return CrossRef{kind, std::nullopt, std::move(*codes)};
  }
  if (!body.starts_with("For ")) return std::nullopt;
  auto sep = body.rfind(", see ");
  if (sep == std::string_view::npos || sep < 4) return std::nullopt;
  auto scope = text::trim(body.substr(4, sep - 4));
  if (scope.empty()) return std::nullopt;
  auto codes = parse_code_list(body.substr(sep + 6));
  if (!codes) return std::nullopt;
  return CrossRef{CrossRefKind::ForSee, std::string(scope), std::move(*codes)};
}

void append_without_double_space(std::string& out, std::string_view piece) {
  if (!out.empty() && out.back() == ' ' && !piece.empty() && piece.front() == ' ') {
    piece.remove_prefix(1);
  }
  out.append(piece);
}

std::string render_codes(const std::vector<std::string>& codes) {
  std::string out;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (i) out += ", ";
    out += codes[i];
  }
  return out;
}

}  // namespace

const char* to_string(Level level) {
  switch (level) {
    case Level::Top: return "top";
    case Level::Middle: return "intermediate";
    case Level::Leaf: return "leaf";
  }
  return "?";
}

ClassCode parse_code(std::string_view text) {
  auto code = try_parse_code(text);
  if (!code) throw InvalidCode(std::string(text));
  return *code;
}

bool is_valid_code(std::string_view text) { return try_parse_code(text).has_value(); }

std::string Diagnostic::to_string() const {
  return line ? "line " + std::to_string(line) + ": " + message : message;
}

Extracted extract_crossrefs(std::string_view description) {
  Extracted result;
  std::string label;
  std::size_t copied = 0;
  bool math = false;
  for (std::size_t i = 0; i < description.size(); ++i) {
    if (toggles_math(description, i)) {
      math = !math;
      continue;
    }
    char c = description[i];
    if (math || (c != '[' && c != '{')) continue;
    char close = c == '[' ? ']' : '}';
    auto end = find_outside_math(description, close, i + 1);
    if (end == std::string_view::npos) {
      result.problems.push_back("unterminated clause: " + std::string(description.substr(i)));
      break;
    }
    auto clause = description.substr(i, end - i + 1);
    auto ref = parse_clause(c, description.substr(i + 1, end - i - 1));
    if (!ref) {
      result.problems.push_back("unrecognized cross-reference clause: " + std::string(clause));
    } else {
      append_without_double_space(label, description.substr(copied, i - copied));
      copied = end + 1;
      result.crossrefs.push_back(std::move(*ref));
    }
    i = end;
  }
  append_without_double_space(label, description.substr(copied));
  result.label = std::string(text::trim(label));
  return result;
}

bool has_math_markup(std::string_view label) {
  auto open = label.find('$');
  if (open == std::string_view::npos) return false;
  auto close = label.find('$', open + 1);
  return close != std::string_view::npos && close > open + 1;
}

std::string render_record(const SourceRecord& record) {
  std::string line = record.code.text + " " + record.label;
  for (const auto& ref : record.crossrefs) {
    switch (ref.kind) {
      case CrossRefKind::SeeAlso: line += " [See also " + render_codes(ref.targets) + "]"; break;
      case CrossRefKind::SeeMainly:
        line += " [See mainly " + render_codes(ref.targets) + "]";
        break;
      case CrossRefKind::ForSee:
        line += " {For " + ref.scope.value_or("") + ", see " + render_codes(ref.targets) + "}";
        break;
    }
  }
  if (record.note) line += " | " + *record.note;
  return line;
}

ParseResult parse_source(std::string_view input) {
  if (auto bad = text::find_invalid_utf8(input)) {
    throw SourceError("input is not valid UTF-8 (byte offset " + std::to_string(*bad) + ")");
  }
  if (input.starts_with("\xEF\xBB\xBF")) input.remove_prefix(3);

  ParseResult result;
  std::unordered_set<std::string> seen;
  auto lines = text::split_lines(input);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    std::size_t lineno = n + 1;
    auto line = lines[n];
    if (!line.empty() && line.front() == '%') continue;
    if (text::trim(line).empty()) continue;
    auto diag = [&](std::string message) {
      result.diagnostics.push_back({lineno, std::move(message)});
    };

    auto trimmed = text::trim(line);
    auto space = trimmed.find_first_of(" \t");
    auto code_text = trimmed.substr(0, space);
    auto code = try_parse_code(code_text);
    if (!code) {
      diag("invalid class code '" + std::string(code_text) + "'");
      continue;
    }
    if (space == std::string_view::npos) {
      diag("missing description for " + code->text);
      continue;
    }
    auto rest = text::trim(trimmed.substr(space));

    std::optional<std::string> note;
    auto bar = find_outside_math(rest, '|', 0);
    if (bar != std::string_view::npos) {
      auto note_text = text::trim(rest.substr(bar + 1));
      if (note_text.empty()) {
        diag("empty note for " + code->text);
      } else {
        note = std::string(note_text);
      }
      rest = text::trim(rest.substr(0, bar));
    }

    auto extracted = extract_crossrefs(rest);
    for (auto& problem : extracted.problems) diag(code->text + ": " + problem);
    if (extracted.label.empty()) {
      diag("empty label for " + code->text);
      continue;
    }
    if (!seen.insert(code->text).second) {
      diag("duplicate class code " + code->text + " (first occurrence kept)");
      continue;
    }

    SourceRecord record;
    record.code = std::move(*code);
    record.has_math_markup = has_math_markup(extracted.label);
    record.label = std::move(extracted.label);
    record.crossrefs = std::move(extracted.crossrefs);
    record.note = std::move(note);
    record.line = lineno;
    result.records.push_back(std::move(record));
  }

  for (const auto& record : result.records) {
    if (record.code.parent && !seen.count(*record.code.parent)) {
      result.diagnostics.push_back(
          {record.line, "dangling parent: " + *record.code.parent + " (parent of " +
                            record.code.text + ") does not appear in the source"});
    }
  }
  std::stable_sort(result.diagnostics.begin(), result.diagnostics.end(),
                   [](const auto& a, const auto& b) { return a.line < b.line; });
  return result;
}

}  // namespace msc::source
