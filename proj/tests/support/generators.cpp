#include "generators.hpp"

#include "msc/text.hpp"
#include "msc/vocab.hpp"

namespace msc::testing {

using rdf::Term;

namespace {

std::string two_digits(int n) { return {static_cast<char>('0' + n / 10), static_cast<char>('0' + n % 10)}; }

}  // namespace

std::string synthetic_source(int tops, int middles, int leaves, int math_every) {
  std::string out;
  int middle_index = 0, leaf_index = 0;
  for (int t = 0; t < tops; ++t) {
    auto top = two_digits(t);
    out += top + "-XX Subject area " + top + "\n";
    int m_count = middles / tops + (t < middles % tops ? 1 : 0);
    for (int m = 0; m < m_count; ++m, ++middle_index) {
      auto middle = top + static_cast<char>('A' + m);
      out += middle + "xx Topic " + middle + "\n";
      int l_count = leaves / middles + (middle_index < leaves % middles ? 1 : 0);
      for (int l = 0; l < l_count; ++l, ++leaf_index) {
        auto leaf = middle + two_digits(l);
        out += leaf + " Subtopic " + leaf;
        if (math_every && leaf_index % math_every == 0) out += " on $\\mathbb{R}^n$";
        out += "\n";
      }
    }
  }
  return out;
}

std::string Gen::text(int max_len) {
  static const std::vector<std::string> pieces{
      "a", "b", "Z", "0", " ", "\"", "\\", "\n", "\t", "\r", "<", ">", "&", "'", "é", "ß", "∂", "𝔽", "x y"};
  std::string out;
  int len = uniform(0, max_len);
  for (int i = 0; i < len; ++i) out += pick(pieces);
  return out;
}

Term Gen::iri(int pool) { return Term::iri("http://example.org/r" + std::to_string(uniform(0, pool))); }

Term Gen::blank(int pool) { return Term::blank("b" + std::to_string(uniform(0, pool))); }

Term Gen::literal(int pool) {
  switch (uniform(0, 3)) {
    case 0: return Term::literal("v" + std::to_string(uniform(0, pool)));
    case 1: return Term::lang_literal(text(6), chance(0.5) ? "en" : "it-CH");
    case 2: return Term::typed_literal(std::to_string(uniform(0, pool)), std::string(vocab::kXsdInteger));
    default: return Term::literal(text(8));
  }
}

Term Gen::subject(int pool) { return chance(0.8) ? iri(pool) : blank(pool / 2); }

Term Gen::object(int pool) {
  switch (uniform(0, 4)) {
    case 0:
    case 1: return iri(pool);
    case 2: return blank(pool / 2);
    default: return literal(pool);
  }
}

rdf::Graph Gen::graph(int triples, int pool) {
  rdf::Graph g;
  for (int i = 0; i < triples; ++i) {
    g.insert(subject(pool), Term::iri("http://example.org/p" + std::to_string(uniform(0, 4))),
             object(pool));
  }
  return g;
}

rdf::Graph Gen::hierarchy(int concepts) {
  rdf::Graph g;
  auto v = skos::vocabulary();
  auto scheme = Term::iri(std::string(vocab::kDefaultBase));
  auto node = [](int i) { return Term::iri("http://example.org/c" + std::to_string(i)); };
  g.insert(scheme, v.type, v.concept_scheme);
  for (int i = 0; i < concepts; ++i) {
    if (i == 0 || chance(0.15)) {
      g.insert(node(i), v.top_concept_of, scheme);
    } else {
      g.insert(node(i), v.broader, node(uniform(0, i - 1)));
      // Occasional extra parents make the broader relation a DAG, sometimes cyclic.
      if (chance(0.05)) g.insert(node(i), v.broader, node(uniform(0, concepts - 1)));
    }
    if (chance(0.2)) g.insert(node(i), v.related, node(uniform(0, concepts - 1)));
    if (chance(0.1)) g.insert(node(i), v.exact_match, node(uniform(0, concepts - 1)));
    if (chance(0.1)) g.insert(node(i), v.close_match, node(uniform(0, concepts - 1)));
    if (chance(0.1)) g.insert(node(i), v.see_also, node(uniform(0, concepts - 1)));
    if (chance(0.05)) {
      auto sr = Term::blank("sr" + std::to_string(i));
      g.insert(node(i), v.scoped_relation, sr);
      g.insert(sr, v.target, node(uniform(0, concepts - 1)));
    }
  }
  return g;
}

}  // namespace msc::testing
