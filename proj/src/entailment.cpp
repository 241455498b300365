#include "msc/entailment.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

#include "msc/text.hpp"

namespace msc::entail {

using rdf::Term;
using rdf::TermId;

namespace {

constexpr TermId kUnbound = std::numeric_limits<TermId>::max();

struct Slot {
  bool is_var = false;
  std::uint32_t value = 0;  // variable index or term id
};

struct CompiledPattern {
  Slot s, p, o;
};

struct CompiledRule {
  std::vector<CompiledPattern> premises;
  std::vector<CompiledPattern> conclusions;
  std::size_t variables = 0;
};

class Compiler {
 public:
  explicit Compiler(rdf::Graph& graph) : graph_(graph) {}

  CompiledRule compile(const Rule& rule) {
    vars_.clear();
    CompiledRule out;
    for (const auto& p : rule.premises) out.premises.push_back(compile(p));
    for (const auto& c : rule.conclusions) out.conclusions.push_back(compile(c));
    out.variables = vars_.size();
    return out;
  }

 private:
  CompiledPattern compile(const TriplePattern& p) {
    return {slot(p.subject), slot(p.predicate), slot(p.object)};
  }

  Slot slot(const PatternTerm& t) {
    if (const auto* v = std::get_if<Variable>(&t)) {
      auto [it, fresh] = vars_.emplace(v->name, static_cast<std::uint32_t>(vars_.size()));
      return {true, it->second};
    }
    return {false, graph_.intern(std::get<Term>(t))};
  }

  rdf::Graph& graph_;
  std::unordered_map<std::string, std::uint32_t> vars_;
};

using Binding = std::vector<TermId>;

std::optional<TermId> resolve(const Slot& slot, const Binding& b) {
  if (!slot.is_var) return slot.value;
  if (b[slot.value] == kUnbound) return std::nullopt;
  return b[slot.value];
}

// Binds pattern variables against a triple; returns false on conflict.
bool unify(const CompiledPattern& p, const rdf::IdTriple& t, Binding& b) {
  auto bind = [&](const Slot& slot, TermId id) {
    if (!slot.is_var) return slot.value == id;
    auto& cur = b[slot.value];
    if (cur == kUnbound) {
      cur = id;
      return true;
    }
    return cur == id;
  };
  return bind(p.s, t.s) && bind(p.p, t.p) && bind(p.o, t.o);
}

class Evaluator {
 public:
  Evaluator(rdf::Graph& graph, std::vector<CompiledRule> rules)
      : graph_(graph), rules_(std::move(rules)) {}

  ExpandStats run() {
    ExpandStats stats;
    std::vector<rdf::IdTriple> delta = graph_.id_triples();
    while (!delta.empty()) {
      ++stats.rounds;
      std::unordered_map<TermId, std::vector<rdf::IdTriple>> by_predicate;
      for (const auto& t : delta) by_predicate[t.p].push_back(t);

      fresh_.clear();
      next_.clear();
      for (const auto& rule : rules_) {
        for (std::size_t i = 0; i < rule.premises.size(); ++i) {
          const auto& first = rule.premises[i];
          auto fire = [&](const rdf::IdTriple& t) {
            Binding b(rule.variables, kUnbound);
            if (unify(first, t, b)) join(rule, i, 0, b);
          };
          if (first.p.is_var) {
            for (const auto& t : delta) fire(t);
          } else if (auto it = by_predicate.find(first.p.value); it != by_predicate.end()) {
            for (const auto& t : it->second) fire(t);
          }
        }
      }
      for (const auto& t : next_) graph_.insert_ids(t);
      stats.derived += next_.size();
      delta.swap(next_);
    }
    return stats;
  }

 private:
  // Extends the binding with premises other than `skip`, in order, against
  // the full graph.
  void join(const CompiledRule& rule, std::size_t skip, std::size_t k, Binding& b) {
    if (k == skip) ++k;
    if (k >= rule.premises.size()) {
      emit(rule, b);
      return;
    }
    const auto& p = rule.premises[k];
    graph_.for_each_match(resolve(p.s, b), resolve(p.p, b), resolve(p.o, b),
                          [&](const rdf::IdTriple& t) {
                            Binding next = b;
                            if (unify(p, t, next)) join(rule, skip, k + 1, next);
                          });
  }

  void emit(const CompiledRule& rule, const Binding& b) {
    for (const auto& c : rule.conclusions) {
      rdf::IdTriple t{*resolve(c.s, b), *resolve(c.p, b), *resolve(c.o, b)};
      // conclusions that would put a literal in subject position are dropped
      if (graph_.term(t.s).is_literal() || !graph_.term(t.p).is_iri()) continue;
      if (graph_.contains_ids(t)) continue;
      if (fresh_.insert(t).second) next_.push_back(t);
    }
  }

  rdf::Graph& graph_;
  std::vector<CompiledRule> rules_;
  std::unordered_set<rdf::IdTriple, rdf::IdTripleHash> fresh_;
  std::vector<rdf::IdTriple> next_;
};

// ---- rule text format ----

class RuleLexer {
 public:
  RuleLexer(std::string_view text, std::size_t line, const rdf::PrefixMap& prefixes)
      : text_(text), line_(line), prefixes_(prefixes) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw RuleError("rule line " + std::to_string(line_) + ", column " +
                    std::to_string(pos_ + 1) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  bool accept(std::string_view token) {
    skip_ws();
    if (text_.substr(pos_).starts_with(token)) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  std::string identifier() {
    skip_ws();
    auto start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ':' && text_[pos_] != ' ') ++pos_;
    if (pos_ == start) fail("expected rule id");
    return std::string(text_.substr(start, pos_ - start));
  }

  PatternTerm term() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected term");
    char c = text_[pos_];
    if (c == '?') {
      auto start = ++pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '_')) {
        ++pos_;
      }
      if (pos_ == start) fail("empty variable name");
      return Variable{std::string(text_.substr(start, pos_ - start))};
    }
    try {
      if (c == '<') {
        auto end = text_.find('>', pos_);
        if (end == std::string_view::npos) fail("unterminated IRI");
        auto iri = std::string(text_.substr(pos_ + 1, end - pos_ - 1));
        pos_ = end + 1;
        return Term::iri(iri);
      }
      if (c == '"') {
        auto end = text_.find('"', pos_ + 1);
        if (end == std::string_view::npos) fail("unterminated literal");
        auto lexical = std::string(text_.substr(pos_ + 1, end - pos_ - 1));
        pos_ = end + 1;
        if (pos_ < text_.size() && text_[pos_] == '@') {
          auto start = ++pos_;
          while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                         text_[pos_] == '-')) {
            ++pos_;
          }
          return Term::lang_literal(lexical, text_.substr(start, pos_ - start));
        }
        return Term::literal(lexical);
      }
      auto start = pos_;
      while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != '(' &&
             text_[pos_] != ')' && text_[pos_] != ' ') {
        ++pos_;
      }
      return prefixes_.expand(text_.substr(start, pos_ - start));
    } catch (const rdf::RdfError& e) {
      fail(e.what());
    }
  }

  TriplePattern pattern() {
    auto predicate = term();
    expect("(");
    auto subject = term();
    expect(",");
    auto object = term();
    expect(")");
    return {std::move(subject), std::move(predicate), std::move(object)};
  }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
  const rdf::PrefixMap& prefixes_;
};

void collect_vars(const TriplePattern& p, std::set<std::string>& out) {
  for (const auto* t : {&p.subject, &p.predicate, &p.object}) {
    if (const auto* v = std::get_if<Variable>(t)) out.insert(v->name);
  }
}

std::string render_term(const PatternTerm& t, const rdf::PrefixMap& prefixes) {
  if (const auto* v = std::get_if<Variable>(&t)) return "?" + v->name;
  const auto& term = std::get<Term>(t);
  if (term.is_iri()) {
    if (auto curie = prefixes.compact(term.value())) return *curie;
    return "<" + term.value() + ">";
  }
  if (term.is_literal()) {
    auto out = "\"" + term.value() + "\"";
    if (!term.language().empty()) out += "@" + term.language();
    return out;
  }
  return "_:" + term.value();
}

}  // namespace

void check_rule(const Rule& rule) {
  if (rule.premises.empty()) throw RuleError("rule " + rule.id + " has no premises");
  if (rule.conclusions.empty()) throw RuleError("rule " + rule.id + " has no conclusions");
  std::set<std::string> bound;
  for (const auto& p : rule.premises) collect_vars(p, bound);
  for (const auto& c : rule.conclusions) {
    std::set<std::string> used;
    collect_vars(c, used);
    for (const auto& name : used) {
      if (!bound.count(name)) {
        throw RuleError("rule " + rule.id + ": conclusion variable ?" + name +
                        " does not occur in any premise");
      }
    }
    const auto* pred = std::get_if<Term>(&c.predicate);
    if (!pred || !pred->is_iri()) {
      throw RuleError("rule " + rule.id + ": conclusion predicate must be an IRI");
    }
  }
}

std::vector<Rule> builtin_ruleset(const skos::SchemeConfig& config) {
  const auto v = skos::vocabulary(config);
  const Variable x{"x"}, y{"y"}, z{"z"}, s{"s"}, n{"n"};
  auto tp = [](PatternTerm a, const Term& p, PatternTerm b) {
    return TriplePattern{std::move(a), p, std::move(b)};
  };
  return {
      {"R1", {tp(x, v.broader, y)}, {tp(y, v.narrower, x)}},
      {"R2", {tp(x, v.narrower, y)}, {tp(y, v.broader, x)}},
      {"R3a", {tp(x, v.broader, y)}, {tp(x, v.broader_transitive, y)}},
      {"R3b",
       {tp(x, v.broader_transitive, y), tp(y, v.broader_transitive, z)},
       {tp(x, v.broader_transitive, z)}},
      {"R4a", {tp(x, v.top_concept_of, s)}, {tp(s, v.has_top_concept, x)}},
      {"R4b", {tp(s, v.has_top_concept, x)}, {tp(x, v.top_concept_of, s)}},
      {"R4c", {tp(x, v.top_concept_of, s)}, {tp(x, v.in_scheme, s)}},
      {"R5", {tp(x, v.related, y)}, {tp(y, v.related, x)}},
      {"R6a", {tp(x, v.see_also, y)}, {tp(x, v.related, y)}},
      {"R6b", {tp(x, v.see_mainly, y)}, {tp(x, v.related, y)}},
      {"R6c", {tp(x, v.scoped_relation, n), tp(n, v.target, y)}, {tp(x, v.related, y)}},
      {"R7", {tp(x, v.broader, y), tp(y, v.in_scheme, s)}, {tp(x, v.in_scheme, s)}},
      {"R8a", {tp(x, v.exact_match, y)}, {tp(y, v.exact_match, x)}},
      {"R8b",
       {tp(x, v.exact_match, y), tp(y, v.exact_match, z)},
       {tp(x, v.exact_match, z)}},
      {"R8c", {tp(x, v.close_match, y)}, {tp(y, v.close_match, x)}},
      {"R9", {tp(x, v.broader, y)}, {tp(x, v.type, v.concept_class), tp(y, v.type, v.concept_class)}},
  };
}

std::vector<Rule> parse_rules(std::string_view text, const rdf::PrefixMap& prefixes) {
  std::vector<Rule> rules;
  auto lines = text::split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    auto line = text::trim(lines[n]);
    if (line.empty() || line.front() == '#') continue;
    RuleLexer lex(line, n + 1, prefixes);
    Rule rule;
    rule.id = lex.identifier();
    lex.expect(":");
    do {
      rule.premises.push_back(lex.pattern());
    } while (lex.accept("&"));
    lex.expect("=>");
    do {
      rule.conclusions.push_back(lex.pattern());
    } while (lex.accept("&"));
    if (!lex.at_end()) lex.fail("unexpected trailing text");
    try {
      check_rule(rule);
    } catch (const RuleError& e) {
      throw RuleError("rule line " + std::to_string(n + 1) + ": " + e.what());
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::string render_rule(const Rule& rule, const rdf::PrefixMap& prefixes) {
  auto patterns = [&](const std::vector<TriplePattern>& list) {
    std::string out;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (i) out += " & ";
      out += render_term(list[i].predicate, prefixes) + "(" +
             render_term(list[i].subject, prefixes) + ", " +
             render_term(list[i].object, prefixes) + ")";
    }
    return out;
  };
  return rule.id + ": " + patterns(rule.premises) + " => " + patterns(rule.conclusions);
}

rdf::Graph expand(const rdf::Graph& graph, const std::vector<Rule>& rules, ExpandStats* stats) {
  for (const auto& rule : rules) check_rule(rule);
  rdf::Graph result = graph.mutable_copy();
  Compiler compiler(result);
  std::vector<CompiledRule> compiled;
  compiled.reserve(rules.size());
  for (const auto& rule : rules) compiled.push_back(compiler.compile(rule));
  auto s = Evaluator(result, std::move(compiled)).run();
  if (stats) *stats = s;
  result.freeze();
  return result;
}

}  // namespace msc::entail
