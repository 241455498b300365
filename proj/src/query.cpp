#include "msc/query.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>

#include "json.hpp"
#include "msc/text.hpp"
#include "msc/vocab.hpp"

namespace msc::query {

using rdf::Term;
using rdf::TermId;

namespace {

enum class Tok { Word, Iri, Var, String, LangTag, DoubleCaret, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip();
      Token t;
      t.offset = pos_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (c == '<') {
        auto end = src_.find('>', pos_);
        if (end == std::string_view::npos) fail(pos_, "unterminated IRI");
        t.kind = Tok::Iri;
        t.text = std::string(src_.substr(pos_ + 1, end - pos_ - 1));
        pos_ = end + 1;
      } else if (c == '?' || c == '$') {
        auto start = ++pos_;
        while (pos_ < src_.size() && word_char(src_[pos_]) && src_[pos_] != '.' &&
               src_[pos_] != ':' && src_[pos_] != '-') {
          ++pos_;
        }
        if (pos_ == start) fail(t.offset, "empty variable name");
        t.kind = Tok::Var;
        t.text = std::string(src_.substr(start, pos_ - start));
      } else if (c == '"' || c == '\'') {
        t.kind = Tok::String;
        t.text = string(c);
      } else if (c == '@') {
        auto start = ++pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '-')) {
          ++pos_;
        }
        t.kind = Tok::LangTag;
        t.text = std::string(src_.substr(start, pos_ - start));
      } else if (src_.substr(pos_, 2) == "^^") {
        t.kind = Tok::DoubleCaret;
        pos_ += 2;
      } else if (std::string_view("{}().;,").find(c) != std::string_view::npos) {
        t.kind = Tok::Punct;
        t.text = std::string(1, c);
        ++pos_;
      } else if (word_char(c)) {
        auto start = pos_;
        while (pos_ < src_.size() && word_char(src_[pos_])) ++pos_;
        // a prefixed name never ends with '.'
        while (pos_ > start + 1 && src_[pos_ - 1] == '.') --pos_;
        t.kind = Tok::Word;
        t.text = std::string(src_.substr(start, pos_ - start));
      } else {
        fail(pos_, std::string("unexpected character '") + c + "'");
      }
      out.push_back(std::move(t));
    }
  }

  [[noreturn]] void fail(std::size_t offset, const std::string& msg) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SyntaxError(line, col, msg);
  }

 private:
  static bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == '-' ||
           c == '.';
  }

  void skip() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string string(char quote) {
    auto start = pos_++;
    std::string out;
    while (pos_ < src_.size() && src_[pos_] != quote) {
      if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) {
        char e = src_[pos_ + 1];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          default: out += e;
        }
        pos_ += 2;
      } else {
        out += src_[pos_++];
      }
    }
    if (pos_ >= src_.size()) fail(start, "unterminated string");
    ++pos_;
    return out;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  Parser(std::string_view src, const rdf::PrefixMap& predefined)
      : lexer_(src), tokens_(lexer_.run()) {
    query_.prefixes = predefined;
  }

  Query parse() {
    while (keyword("PREFIX")) {
      const auto& name = expect(Tok::Word, "prefix name");
      if (name.text.empty() || name.text.back() != ':' ||
          name.text.find(':') != name.text.size() - 1) {
        fail(name, "expected 'name:' after PREFIX");
      }
      const auto& iri = expect(Tok::Iri, "namespace IRI");
      query_.prefixes.add(name.text.substr(0, name.text.size() - 1), iri.text);
    }
    if (!keyword("SELECT")) fail(peek(), "expected SELECT");
    query_.distinct = keyword("DISTINCT");
    projection();
    keyword("WHERE");
    punct("{", true);
    group();
    punct("}", true);
    if (keyword("GROUP")) {
      if (!keyword("BY")) fail(peek(), "expected BY after GROUP");
      do {
        query_.group_by.push_back(expect(Tok::Var, "variable").text);
      } while (peek().kind == Tok::Var);
    }
    if (peek().kind != Tok::End) fail(peek(), "unexpected trailing input");
    return std::move(query_);
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }

  const Token& next() {
    const auto& t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    lexer_.fail(t.offset, msg);
  }

  bool is_keyword(const Token& t, std::string_view kw) const {
    return t.kind == Tok::Word && text::equals_ci(t.text, kw);
  }

  bool keyword(std::string_view kw) {
    if (!is_keyword(peek(), kw)) return false;
    next();
    return true;
  }

  bool punct(std::string_view p, bool required = false) {
    if (peek().kind == Tok::Punct && peek().text == p) {
      next();
      return true;
    }
    if (required) fail(peek(), "expected '" + std::string(p) + "'");
    return false;
  }

  const Token& expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) fail(peek(), "expected " + what);
    return next();
  }

  void projection() {
    for (;;) {
      if (peek().kind == Tok::Var) {
        auto name = next().text;
        query_.projection.push_back({name, false, name});
      } else if (is_keyword(peek(), "COUNT")) {
        next();
        auto var = count_argument();
        query_.projection.push_back({var, true, "count_" + var});
      } else if (peek().kind == Tok::Punct && peek().text == "(" && is_keyword(peek(1), "COUNT")) {
        next();
        next();
        auto var = count_argument();
        if (!keyword("AS")) fail(peek(), "expected AS");
        auto alias = expect(Tok::Var, "alias variable").text;
        punct(")", true);
        query_.projection.push_back({var, true, alias});
      } else {
        break;
      }
    }
    if (query_.projection.empty()) fail(peek(), "expected a variable or COUNT(...) to select");
  }

  std::string count_argument() {
    punct("(", true);
    auto var = expect(Tok::Var, "variable inside COUNT").text;
    punct(")", true);
    return var;
  }

  void group() {
    Bgp* current = nullptr;
    for (;;) {
      const auto& t = peek();
      if (t.kind == Tok::Punct && t.text == "}") return;
      if (t.kind == Tok::End) fail(t, "unterminated group, expected '}'");
      if (keyword("OPTIONAL")) {
        punct("{", true);
        OptionalBlock block;
        while (!(peek().kind == Tok::Punct && peek().text == "}")) {
          if (peek().kind == Tok::End) fail(peek(), "unterminated OPTIONAL block");
          triples(block.patterns);
        }
        punct("}", true);
        query_.where.emplace_back(std::move(block));
        current = nullptr;
      } else if (keyword("FILTER")) {
        query_.where.emplace_back(filter());
        current = nullptr;
      } else {
        if (!current) {
          query_.where.emplace_back(Bgp{});
          current = &std::get<Bgp>(query_.where.back());
        }
        triples(current->patterns);
      }
    }
  }

  LangFilter filter() {
    bool wrapped = punct("(");
    if (!keyword("langMatches")) fail(peek(), "only langMatches(lang(?v), \"range\") filters are supported");
    punct("(", true);
    if (!keyword("lang")) fail(peek(), "expected lang(?v)");
    punct("(", true);
    auto var = expect(Tok::Var, "variable").text;
    punct(")", true);
    punct(",", true);
    auto range = expect(Tok::String, "language range string").text;
    punct(")", true);
    if (wrapped) punct(")", true);
    return {var, range};
  }

  // s p o (, o)* (; p o (, o)*)* '.'?
  void triples(std::vector<Pattern>& out) {
    auto subject = term(false);
    for (;;) {
      auto predicate = term(true);
      for (;;) {
        out.push_back({subject, predicate, term(false)});
        if (!punct(",")) break;
      }
      if (!punct(";")) break;
      // trailing ';' before '.' or '}'
      if ((peek().kind == Tok::Punct && (peek().text == "." || peek().text == "}"))) break;
    }
    punct(".");
  }

  PatternTerm term(bool predicate_position) {
    const auto& t = next();
    try {
      switch (t.kind) {
        case Tok::Var: return Var{t.text};
        case Tok::Iri: return Term::iri(t.text);
        case Tok::Word:
          if (predicate_position && t.text == "a") return Term::iri(vocab::kType);
          if (t.text.find(':') == std::string::npos) fail(t, "expected a term, found '" + t.text + "'");
          return query_.prefixes.expand(t.text);
        case Tok::String: {
          if (peek().kind == Tok::LangTag) return Term::lang_literal(t.text, next().text);
          if (peek().kind == Tok::DoubleCaret) {
            next();
            const auto& dt = next();
            if (dt.kind == Tok::Iri) return Term::typed_literal(t.text, dt.text);
            if (dt.kind == Tok::Word) {
              return Term::typed_literal(t.text, query_.prefixes.expand(dt.text).value());
            }
            fail(dt, "expected datatype IRI");
          }
          return Term::literal(t.text);
        }
        default: fail(t, "expected a term");
      }
    } catch (const rdf::UnknownPrefix& e) {
      throw QueryError(e.what());
    } catch (const rdf::RdfError& e) {
      fail(t, e.what());
    }
  }

  Lexer lexer_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Query query_;
};

void collect_pattern_vars(const std::vector<Pattern>& patterns, std::set<std::string>& out) {
  for (const auto& p : patterns) {
    for (const auto* t : {&p.subject, &p.predicate, &p.object}) {
      if (const auto* v = std::get_if<Var>(t)) out.insert(v->name);
    }
  }
}

constexpr TermId kUnbound = std::numeric_limits<TermId>::max();
using Row = std::vector<TermId>;

struct Slot {
  bool is_var = false;
  std::size_t var = 0;
  std::optional<TermId> id;  // constant not present in the graph -> nullopt
};

struct CompiledPattern {
  Slot s, p, o;
};

class Evaluator {
 public:
  Evaluator(const rdf::Graph& graph, const Query& query) : graph_(graph), query_(query) {}

  ResultTable run() {
    std::vector<Row> rows{Row{}};
    std::vector<const LangFilter*> filters;
    for (const auto& element : query_.where) {
      if (const auto* bgp = std::get_if<Bgp>(&element)) {
        for (const auto& p : bgp->patterns) rows = join(rows, compile(p));
      } else if (const auto* opt = std::get_if<OptionalBlock>(&element)) {
        rows = left_join(rows, opt->patterns);
      } else {
        filters.push_back(&std::get<LangFilter>(element));
      }
    }
    for (auto* f : filters) {
      auto idx = var_index(f->variable);
      std::erase_if(rows, [&](Row& r) {
        r.resize(vars_.size(), kUnbound);
        if (r[idx] == kUnbound) return true;
        const auto& term = graph_.term(r[idx]);
        if (!term.is_literal()) return true;
        return !lang_matches(term.language(), f->range);
      });
    }
    for (auto& r : rows) r.resize(vars_.size(), kUnbound);
    return project(rows);
  }

 private:
  std::size_t var_index(const std::string& name) {
    auto [it, fresh] = vars_.emplace(name, vars_.size());
    return it->second;
  }

  Slot slot(const PatternTerm& t) {
    if (const auto* v = std::get_if<Var>(&t)) return {true, var_index(v->name), std::nullopt};
    return {false, 0, graph_.find(std::get<Term>(t))};
  }

  CompiledPattern compile(const Pattern& p) {
    return {slot(p.subject), slot(p.predicate), slot(p.object)};
  }

  // Calls fn with each extension of row matching the pattern.
  template <class Fn>
  void extend(const Row& row, const CompiledPattern& p, Fn&& fn) {
    auto resolve = [&](const Slot& s, bool& impossible) -> std::optional<TermId> {
      if (!s.is_var) {
        if (!s.id) impossible = true;
        return s.id;
      }
      if (s.var < row.size() && row[s.var] != kUnbound) return row[s.var];
      return std::nullopt;
    };
    bool impossible = false;
    auto s = resolve(p.s, impossible);
    auto pr = resolve(p.p, impossible);
    auto o = resolve(p.o, impossible);
    if (impossible) return;
    graph_.for_each_match(s, pr, o, [&](const rdf::IdTriple& t) {
      Row next = row;
      next.resize(vars_.size(), kUnbound);
      auto bind = [&](const Slot& sl, TermId id) {
        if (!sl.is_var) return true;
        auto& cur = next[sl.var];
        if (cur == kUnbound) {
          cur = id;
          return true;
        }
        return cur == id;
      };
      if (bind(p.s, t.s) && bind(p.p, t.p) && bind(p.o, t.o)) fn(std::move(next));
    });
  }

  std::vector<Row> join(const std::vector<Row>& rows, const CompiledPattern& p) {
    std::vector<Row> out;
    for (const auto& row : rows) extend(row, p, [&](Row r) { out.push_back(std::move(r)); });
    return out;
  }

  std::vector<Row> left_join(const std::vector<Row>& rows, const std::vector<Pattern>& patterns) {
    std::vector<CompiledPattern> compiled;
    for (const auto& p : patterns) compiled.push_back(compile(p));
    std::vector<Row> out;
    for (const auto& row : rows) {
      std::vector<Row> ext{row};
      for (const auto& p : compiled) ext = join(ext, p);
      if (ext.empty()) {
        out.push_back(row);
      } else {
        for (auto& r : ext) out.push_back(std::move(r));
      }
    }
    return out;
  }

  Value cell(TermId id) const {
    if (id == kUnbound) return std::monostate{};
    return graph_.term(id);
  }

  ResultTable project(const std::vector<Row>& rows) {
    ResultTable table;
    for (const auto& p : query_.projection) {
      table.header.push_back(p.column);
      table.count_column.push_back(p.count);
    }
    auto index_of = [&](const std::string& name) -> std::optional<std::size_t> {
      auto it = vars_.find(name);
      if (it == vars_.end()) return std::nullopt;
      return it->second;
    };
    auto value_of = [&](const Row& r, const std::string& name) -> TermId {
      auto idx = index_of(name);
      return idx && *idx < r.size() ? r[*idx] : kUnbound;
    };

    if (query_.group_by.empty()) {
      for (const auto& r : rows) {
        std::vector<Value> out;
        for (const auto& p : query_.projection) out.push_back(cell(value_of(r, p.variable)));
        table.rows.push_back(std::move(out));
      }
    } else {
      std::map<std::vector<TermId>, std::vector<std::uint64_t>> groups;
      for (const auto& r : rows) {
        std::vector<TermId> key;
        for (const auto& g : query_.group_by) key.push_back(value_of(r, g));
        auto& counts = groups[key];
        counts.resize(query_.projection.size(), 0);
        for (std::size_t i = 0; i < query_.projection.size(); ++i) {
          const auto& p = query_.projection[i];
          if (p.count && value_of(r, p.variable) != kUnbound) ++counts[i];
        }
      }
      for (const auto& [key, counts] : groups) {
        std::vector<Value> out;
        for (std::size_t i = 0; i < query_.projection.size(); ++i) {
          const auto& p = query_.projection[i];
          if (p.count) {
            out.emplace_back(counts[i]);
          } else {
            auto pos = std::find(query_.group_by.begin(), query_.group_by.end(), p.variable);
            out.push_back(cell(key[static_cast<std::size_t>(pos - query_.group_by.begin())]));
          }
        }
        table.rows.push_back(std::move(out));
      }
    }

    // canonical order: cell by cell, unbound first, terms by serialized form
    auto sort_key = [](const Value& v) -> std::pair<int, std::string> {
      if (std::holds_alternative<std::monostate>(v)) return {0, {}};
      if (const auto* n = std::get_if<std::uint64_t>(&v)) {
        auto digits = std::to_string(*n);
        return {1, std::string(20 - digits.size(), '0') + digits};
      }
      return {2, std::get<Term>(v).to_ntriples()};
    };
    std::vector<std::pair<std::vector<std::pair<int, std::string>>, std::size_t>> keyed;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      std::vector<std::pair<int, std::string>> k;
      for (const auto& v : table.rows[i]) k.push_back(sort_key(v));
      keyed.emplace_back(std::move(k), i);
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::vector<Value>> sorted;
    for (std::size_t i = 0; i < keyed.size(); ++i) {
      if (query_.distinct && i > 0 && keyed[i].first == keyed[i - 1].first) continue;
      sorted.push_back(std::move(table.rows[keyed[i].second]));
    }
    table.rows = std::move(sorted);
    return table;
  }

  const rdf::Graph& graph_;
  const Query& query_;
  std::unordered_map<std::string, std::size_t> vars_;
};

}  // namespace

Query parse_query(std::string_view text, const rdf::PrefixMap& predefined) {
  auto query = Parser(text, predefined).parse();
  validate(query);
  return query;
}

void validate(const Query& query) {
  std::set<std::string> where_vars;
  for (const auto& e : query.where) {
    if (const auto* b = std::get_if<Bgp>(&e)) collect_pattern_vars(b->patterns, where_vars);
    if (const auto* o = std::get_if<OptionalBlock>(&e)) collect_pattern_vars(o->patterns, where_vars);
  }
  bool any_count = std::any_of(query.projection.begin(), query.projection.end(),
                               [](const auto& p) { return p.count; });
  if (any_count && query.group_by.empty()) {
    throw QueryError("COUNT requires an explicit GROUP BY clause");
  }
  std::set<std::string> columns;
  for (const auto& p : query.projection) {
    if (!columns.insert(p.column).second) {
      throw QueryError("duplicate result column ?" + p.column);
    }
    if (p.count && !where_vars.count(p.variable)) {
      throw QueryError("COUNT(?" + p.variable + ") uses a variable absent from WHERE");
    }
    if (!p.count && !query.group_by.empty() &&
        std::find(query.group_by.begin(), query.group_by.end(), p.variable) ==
            query.group_by.end()) {
      throw QueryError("projected variable ?" + p.variable + " is not listed in GROUP BY");
    }
  }
}

bool lang_matches(std::string_view tag, std::string_view range) {
  if (tag.empty()) return false;
  if (range == "*") return true;
  if (range.empty()) return false;
  if (tag.size() == range.size()) return text::equals_ci(tag, range);
  return tag.size() > range.size() && tag[range.size()] == '-' && text::starts_with_ci(tag, range);
}

ResultTable evaluate(const rdf::Graph& graph, const Query& query) {
  return Evaluator(graph, query).run();
}

std::string to_tsv(const ResultTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += '\t';
    out += "?" + table.header[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += '\t';
      if (const auto* t = std::get_if<Term>(&row[i])) {
        out += t->to_ntriples();
      } else if (const auto* n = std::get_if<std::uint64_t>(&row[i])) {
        out += std::to_string(*n);
      }
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const ResultTable& table) {
  using nlohmann::json;
  json bindings = json::array();
  for (const auto& row : table.rows) {
    json b = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const auto& name = table.header[i];
      if (const auto* n = std::get_if<std::uint64_t>(&row[i])) {
        b[name] = {{"type", "literal"}, {"datatype", vocab::kXsdInteger},
                   {"value", std::to_string(*n)}};
      } else if (const auto* t = std::get_if<Term>(&row[i])) {
        json v;
        if (t->is_iri()) {
          v = {{"type", "uri"}, {"value", t->value()}};
        } else if (t->is_blank()) {
          v = {{"type", "bnode"}, {"value", t->value()}};
        } else {
          v = {{"type", "literal"}, {"value", t->value()}};
          if (!t->language().empty()) v["xml:lang"] = t->language();
          if (!t->datatype().empty()) v["datatype"] = t->datatype();
        }
        b[name] = std::move(v);
      }
    }
    bindings.push_back(std::move(b));
  }
  json doc = {{"head", {{"vars", table.header}}}, {"results", {{"bindings", bindings}}}};
  return doc.dump(2) + "\n";
}

}  // namespace msc::query
