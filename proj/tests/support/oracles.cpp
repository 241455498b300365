#include "support/oracles.hpp"

#include <functional>
#include <map>

namespace msc::testing {

using rdf::Term;

bool subset(const rdf::Graph& a, const rdf::Graph& b) {
  for (const auto& t : a.triples()) {
    if (!b.contains(t)) return false;
  }
  return true;
}

std::set<std::pair<std::string, std::string>> closure_by_search(const rdf::Graph& g, const Term& predicate) {
  std::map<std::string, std::vector<std::string>> up;
  for (const auto& t : g.match(std::nullopt, predicate, std::nullopt)) {
    up[t.subject.value()].push_back(t.object.value());
  }
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& [start, _] : up) {
    std::vector<std::string> stack = up[start];
    std::set<std::string> seen;
    while (!stack.empty()) {
      auto node = stack.back();
      stack.pop_back();
      if (!seen.insert(node).second) continue;
      out.emplace(start, node);
      if (auto it = up.find(node); it != up.end()) {
        for (const auto& next : it->second) stack.push_back(next);
      }
    }
  }
  return out;
}

RandomBgp random_bgp(Gen& gen, const std::vector<rdf::Triple>& triples) {
  static const std::vector<std::string> names{"a", "b", "c"};
  RandomBgp out;
  int n = gen.uniform(1, 3);
  std::set<std::string> used;
  auto slot = [&](const Term& seed) -> query::PatternTerm {
    if (seed.is_blank() || gen.chance(0.65)) {
      auto name = gen.pick(names);
      used.insert(name);
      return query::Var{name};
    }
    return seed;
  };
  for (int i = 0; i < n; ++i) {
    rdf::Triple seed = triples.empty()
                           ? rdf::Triple{Term::iri("http://example.org/r0"), Term::iri("http://example.org/p0"),
                                         Term::literal("v0")}
                           : gen.pick(triples);
    out.patterns.push_back({slot(seed.subject), slot(seed.predicate), slot(seed.object)});
  }
  out.vars.assign(used.begin(), used.end());
  return out;
}

std::set<std::vector<std::string>> brute_force_bgp(const rdf::Graph& g, const RandomBgp& bgp) {
  std::vector<Term> domain;
  std::set<std::string> seen;
  for (const auto& t : g.triples()) {
    for (const auto* term : {&t.subject, &t.predicate, &t.object}) {
      if (seen.insert(term->to_ntriples()).second) domain.push_back(*term);
    }
  }

  std::set<std::vector<std::string>> expected;
  std::map<std::string, Term> assignment;
  std::function<void(std::size_t)> enumerate = [&](std::size_t k) {
    if (k == bgp.vars.size()) {
      auto resolve = [&](const query::PatternTerm& p) {
        if (const auto* var = std::get_if<query::Var>(&p)) return assignment.at(var->name);
        return std::get<Term>(p);
      };
      for (const auto& p : bgp.patterns) {
        auto s = resolve(p.subject), pr = resolve(p.predicate), o = resolve(p.object);
        if (s.is_literal() || !pr.is_iri() || !g.contains({s, pr, o})) return;
      }
      std::vector<std::string> row;
      for (const auto& name : bgp.vars) row.push_back(assignment.at(name).to_ntriples());
      expected.insert(row);
      return;
    }
    for (const auto& term : domain) {
      assignment.insert_or_assign(bgp.vars[k], term);
      enumerate(k + 1);
    }
  };
  enumerate(0);
  return expected;
}

std::vector<std::vector<std::string>> engine_bgp(const rdf::Graph& g, const RandomBgp& bgp) {
  query::Query q;
  for (const auto& name : bgp.vars) q.projection.push_back({name, false, name});
  q.where.push_back(query::Bgp{bgp.patterns});
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : query::evaluate(g, q).rows) {
    std::vector<std::string> r;
    for (const auto& value : row) r.push_back(std::get<Term>(value).to_ntriples());
    rows.push_back(r);
  }
  return rows;
}

}  // namespace msc::testing
