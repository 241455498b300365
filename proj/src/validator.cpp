#include "msc/validator.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>
#include <tuple>
#include <unordered_set>

namespace msc::validate {

using rdf::Term;
using rdf::TermId;

namespace {

class Checker {
 public:
  Checker(const rdf::Graph& g, Phase phase, const skos::SchemeConfig& config)
      : g_(g), phase_(phase), config_(config), v_(skos::vocabulary(config)) {}

  Report run() {
    collect_concepts();
    check_notations();
    check_labels();
    check_cycles();
    check_tree();
    check_targets();
    if (phase_ == Phase::Expanded) check_inverses();
    stats();
    std::stable_sort(report_.findings.begin(), report_.findings.end(),
                     [](const Finding& a, const Finding& b) {
                       return std::tie(a.check, a.subject, a.message) <
                              std::tie(b.check, b.subject, b.message);
                     });
    return std::move(report_);
  }

 private:
  std::optional<TermId> id(const Term& t) const { return g_.find(t); }

  std::vector<TermId> objects(TermId s, const std::optional<TermId>& p) const {
    std::vector<TermId> out;
    if (!p) return out;
    g_.for_each_match(s, p, std::nullopt, [&](const rdf::IdTriple& t) { out.push_back(t.o); });
    return out;
  }

  std::string code_of(TermId node) const {
    const auto& t = g_.term(node);
    if (!t.is_iri()) return t.value();
    const auto& iri = t.value();
    if (iri.starts_with(config_.base_iri)) return iri.substr(config_.base_iri.size());
    return iri;
  }

  void add(const char* check, Severity sev, TermId subject, std::string message) {
    report_.findings.push_back({check, sev, code_of(subject), std::move(message)});
  }

  void collect_concepts() {
    auto type = id(v_.type);
    auto cls = id(v_.concept_class);
    if (!type || !cls) return;
    g_.for_each_match(std::nullopt, type, cls, [&](const rdf::IdTriple& t) {
      concepts_.push_back(t.s);
      concept_set_.insert(t.s);
    });
    std::sort(concepts_.begin(), concepts_.end(),
              [&](TermId a, TermId b) { return g_.key(a) < g_.key(b); });
    auto in_scheme = id(v_.in_scheme);
    auto scheme = id(Term::iri(config_.scheme()));
    for (auto c : concepts_) {
      if (in_scheme && scheme && g_.contains_ids({c, *in_scheme, *scheme})) in_scheme_.insert(c);
    }
  }

  void check_notations() {
    auto notation = id(v_.notation);
    std::map<std::string, std::vector<TermId>> by_value;
    for (auto c : concepts_) {
      auto values = objects(c, notation);
      if (values.size() != 1) {
        add("V1", Severity::Error, c,
            "expected exactly one skos:notation, found " + std::to_string(values.size()));
      }
      for (auto n : values) {
        const auto& lit = g_.term(n);
        if (!lit.is_literal()) {
          add("V1", Severity::Error, c, "notation is not a literal");
          continue;
        }
        by_value[lit.value()].push_back(c);
        if (values.size() == 1 && lit.value() != last_segment(c)) {
          add("V1", Severity::Error, c,
              "notation \"" + lit.value() + "\" differs from the code in the IRI");
        }
      }
    }
    for (const auto& [value, owners] : by_value) {
      if (owners.size() < 2) continue;
      std::string names;
      for (auto o : owners) names += (names.empty() ? "" : ", ") + code_of(o);
      add("V1", Severity::Error, owners.front(),
          "notation \"" + value + "\" is shared by " + names);
    }
  }

  std::string last_segment(TermId c) const {
    const auto& iri = g_.term(c).value();
    auto cut = iri.find_last_of("/#");
    return cut == std::string::npos ? iri : iri.substr(cut + 1);
  }

  void check_labels() {
    auto pref = id(v_.pref_label);
    auto alt = id(v_.alt_label);
    for (auto c : concepts_) {
      auto prefs = objects(c, pref);
      std::map<std::string, std::size_t> per_lang;
      for (auto l : prefs) ++per_lang[g_.term(l).language()];
      for (const auto& [lang, count] : per_lang) {
        if (count > 1) {
          add("V2", Severity::Error, c,
              std::to_string(count) + " prefLabels for language '" +
                  (lang.empty() ? std::string("none") : lang) + "'");
        }
      }
      auto alts = objects(c, alt);
      std::set<TermId> alt_set(alts.begin(), alts.end());
      for (auto l : prefs) {
        if (alt_set.count(l)) {
          add("V3", Severity::Error, c, "label " + g_.key(l) + " is both prefLabel and altLabel");
        }
      }
    }
  }

  // Tarjan's SCC over all broader edges.
  void check_cycles() {
    auto broader = id(v_.broader);
    if (!broader) return;
    std::unordered_map<TermId, std::vector<TermId>> succ;
    std::set<TermId> nodes;
    g_.for_each_match(std::nullopt, broader, std::nullopt, [&](const rdf::IdTriple& t) {
      succ[t.s].push_back(t.o);
      nodes.insert(t.s);
      nodes.insert(t.o);
    });
    std::vector<TermId> ordered(nodes.begin(), nodes.end());
    std::sort(ordered.begin(), ordered.end(),
              [&](TermId a, TermId b) { return g_.key(a) < g_.key(b); });
    for (auto& [n, list] : succ) {
      std::sort(list.begin(), list.end(), [&](TermId a, TermId b) { return g_.key(a) < g_.key(b); });
    }

    std::unordered_map<TermId, std::size_t> index, low;
    std::unordered_set<TermId> on_stack;
    std::vector<TermId> stack;
    std::size_t counter = 0;
    struct Frame {
      TermId node;
      std::size_t next;
    };
    for (auto root : ordered) {
      if (index.count(root)) continue;
      std::vector<Frame> frames{{root, 0}};
      index[root] = low[root] = counter++;
      stack.push_back(root);
      on_stack.insert(root);
      while (!frames.empty()) {
        auto& f = frames.back();
        const auto& out = succ[f.node];
        if (f.next < out.size()) {
          auto w = out[f.next++];
          if (!index.count(w)) {
            index[w] = low[w] = counter++;
            stack.push_back(w);
            on_stack.insert(w);
            frames.push_back({w, 0});
          } else if (on_stack.count(w)) {
            low[f.node] = std::min(low[f.node], index[w]);
          }
          continue;
        }
        auto node = f.node;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().node] = std::min(low[frames.back().node], low[node]);
        if (low[node] != index[node]) continue;
        std::vector<TermId> component;
        TermId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack.erase(w);
          component.push_back(w);
        } while (w != node);
        bool self_loop = component.size() == 1 &&
                         std::count(succ[node].begin(), succ[node].end(), node) > 0;
        if (component.size() > 1 || self_loop) report_cycle(component, succ);
      }
    }
  }

  void report_cycle(std::vector<TermId> component,
                    std::unordered_map<TermId, std::vector<TermId>>& succ) {
    std::sort(component.begin(), component.end(),
              [&](TermId a, TermId b) { return code_of(a) < code_of(b); });
    std::set<TermId> members(component.begin(), component.end());
    auto start = component.front();
    // shortest path start -> ... -> start inside the component
    std::unordered_map<TermId, TermId> parent;
    std::deque<TermId> queue{start};
    bool found = false;
    TermId last = start;
    while (!queue.empty() && !found) {
      auto n = queue.front();
      queue.pop_front();
      for (auto w : succ[n]) {
        if (!members.count(w)) continue;
        if (w == start) {
          last = n;
          found = true;
          break;
        }
        if (!parent.count(w)) {
          parent[w] = n;
          queue.push_back(w);
        }
      }
    }
    std::vector<TermId> path{start};
    for (auto n = last; n != start; n = parent[n]) path.insert(path.begin() + 1, n);
    std::string text;
    for (auto n : path) text += code_of(n) + " -> ";
    text += code_of(start);
    add("V4", Severity::Error, start, "broader cycle: " + text);
  }

  void check_tree() {
    auto broader = id(v_.broader);
    auto top_of = id(v_.top_concept_of);
    for (auto c : concepts_) {
      auto parents = objects(c, broader);
      bool has_top = !objects(c, top_of).empty();
      std::optional<source::ClassCode> code;
      if (source::is_valid_code(last_segment(c))) code = source::parse_code(last_segment(c));
      bool top_code = code && code->level == source::Level::Top;
      if (code && top_code != has_top) {
        add("V5", Severity::Error, c,
            top_code ? "top-level code without skos:topConceptOf"
                     : "skos:topConceptOf on a non-top code");
      }
      bool is_top = top_code || has_top;
      if (is_top && !parents.empty()) {
        add("V5", Severity::Error, c,
            "top concept has " + std::to_string(parents.size()) + " broader concept(s)");
      } else if (!is_top && parents.size() != 1) {
        add("V5", Severity::Error, c,
            "expected exactly one broader concept, found " + std::to_string(parents.size()));
      }
    }
  }

  bool resolves(TermId target) const {
    return concept_set_.count(target) && in_scheme_.count(target);
  }

  void check_targets() {
    auto check = [&](const Term& property, bool own_namespace_only) {
      auto p = id(property);
      if (!p) return;
      std::vector<rdf::IdTriple> hits;
      g_.for_each_match(std::nullopt, p, std::nullopt,
                        [&](const rdf::IdTriple& t) { hits.push_back(t); });
      for (const auto& t : hits) {
        const auto& target = g_.term(t.o);
        if (!target.is_iri()) continue;
        if (own_namespace_only && !target.value().starts_with(config_.base_iri)) continue;
        if (!resolves(t.o)) {
          add("V6", Severity::Warning, t.s,
              property_name(property) + " target " + code_of(t.o) +
                  " is not a concept of the scheme");
        }
      }
    };
    check(v_.broader, false);
    check(v_.related, false);
    check(v_.see_also, false);
    check(v_.see_mainly, false);
    check(v_.target, false);
    check(v_.member, false);
    for (const auto* m : {&v_.exact_match, &v_.close_match, &v_.narrow_match, &v_.broad_match}) {
      check(*m, true);
    }
  }

  static std::string property_name(const Term& p) {
    const auto& iri = p.value();
    auto cut = iri.find_last_of("/#");
    return cut == std::string::npos ? iri : iri.substr(cut + 1);
  }

  void check_inverses() {
    auto broader = id(v_.broader);
    auto narrower = id(v_.narrower);
    auto scan = [&](std::optional<TermId> from, std::optional<TermId> to, const char* have,
                    const char* want) {
      if (!from) return;
      g_.for_each_match(std::nullopt, from, std::nullopt, [&](const rdf::IdTriple& t) {
        if (!to || !g_.contains_ids({t.o, *to, t.s})) {
          add("V7", Severity::Error, t.s,
              std::string(have) + " " + code_of(t.o) + " without inverse " + want);
        }
      });
    };
    scan(broader, narrower, "broader", "narrower");
    scan(narrower, broader, "narrower", "broader");
  }

  void stats() {
    auto& s = report_.stats;
    auto math = id(v_.math_label);
    s.concepts = concepts_.size();
    for (auto c : concepts_) {
      auto seg = last_segment(c);
      if (!source::is_valid_code(seg)) {
        ++s.unclassified;
      } else {
        switch (source::parse_code(seg).level) {
          case source::Level::Top: ++s.top; break;
          case source::Level::Middle: ++s.intermediate; break;
          case source::Level::Leaf: ++s.leaves; break;
        }
      }
      if (!objects(c, math).empty()) ++s.math_labels;
    }
  }

  const rdf::Graph& g_;
  Phase phase_;
  const skos::SchemeConfig& config_;
  skos::Vocabulary v_;
  std::vector<TermId> concepts_;
  std::unordered_set<TermId> concept_set_;
  std::unordered_set<TermId> in_scheme_;
  Report report_;
};

}  // namespace

const char* to_string(Severity severity) {
  return severity == Severity::Error ? "error" : "warning";
}

std::size_t Report::errors() const {
  return static_cast<std::size_t>(std::count_if(
      findings.begin(), findings.end(), [](const auto& f) { return f.severity == Severity::Error; }));
}

std::size_t Report::warnings() const { return findings.size() - errors(); }

Report validate(const rdf::Graph& graph, Phase phase, const skos::SchemeConfig& config) {
  return Checker(graph, phase, config).run();
}

std::string stats_text(const Stats& s) {
  char fraction[64];
  std::snprintf(fraction, sizeof fraction, "%.4f%%", 100.0 * s.math_fraction());
  std::string out;
  out += "concepts:      " + std::to_string(s.concepts) + "\n";
  out += "top:           " + std::to_string(s.top) + "\n";
  out += "intermediate:  " + std::to_string(s.intermediate) + "\n";
  out += "leaves:        " + std::to_string(s.leaves) + "\n";
  if (s.unclassified) out += "unclassified:  " + std::to_string(s.unclassified) + "\n";
  out += "math labels:   " + std::to_string(s.math_labels) + " (" + fraction + ")\n";
  return out;
}

std::string to_text(const Report& report) {
  std::string out;
  for (const auto& f : report.findings) {
    out += f.check + " " + to_string(f.severity) + " " + f.subject + ": " + f.message + "\n";
  }
  out += std::to_string(report.errors()) + " error(s), " + std::to_string(report.warnings()) +
         " warning(s)\n";
  out += stats_text(report.stats);
  return out;
}

std::string to_tsv(const Report& report) {
  std::string out;
  for (const auto& f : report.findings) {
    out += f.check + "\t" + to_string(f.severity) + "\t" + f.subject + "\t" + f.message + "\n";
  }
  return out;
}

}  // namespace msc::validate
