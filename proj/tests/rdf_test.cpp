#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "msc/rdf.hpp"
#include "msc/vocab.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

namespace msc {
namespace {

using rdf::Graph;
using rdf::Term;
using rdf::Triple;
using testing::msc_iri;

const Term kPrefLabel = Term::iri(vocab::skos("prefLabel"));
const Term kNarrower = Term::iri(vocab::skos("narrower"));

TEST(Term, IriMustBeAbsolute) {
  EXPECT_NO_THROW(Term::iri("http://example.org/x"));
  EXPECT_NO_THROW(Term::iri("urn:isbn:123"));
  EXPECT_THROW(Term::iri(""), rdf::RdfError);
  EXPECT_THROW(Term::iri("relative/path"), rdf::RdfError);
  EXPECT_THROW(Term::iri("http://example.org/a b"), rdf::RdfError);
  EXPECT_THROW(Term::iri("1http://x"), rdf::RdfError);
}

TEST(Term, LanguageTagsAreValidatedAndLowercased) {
  auto a = Term::lang_literal("x", "EN");
  auto b = Term::lang_literal("x", "en");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.language(), "en");
  EXPECT_EQ(Term::lang_literal("x", "en-US").language(), "en-us");
  EXPECT_THROW(Term::lang_literal("x", ""), rdf::RdfError);
  EXPECT_THROW(Term::lang_literal("x", "toolonglang"), rdf::RdfError);
  EXPECT_THROW(Term::lang_literal("x", "en_US"), rdf::RdfError);
  EXPECT_THROW(Term::lang_literal("x", "en-"), rdf::RdfError);
}

TEST(Term, EqualityDistinguishesKindsAndFields) {
  EXPECT_NE(Term::literal("x"), Term::lang_literal("x", "en"));
  EXPECT_NE(Term::literal("x"), Term::typed_literal("x", vocab::kXsdInteger));
  EXPECT_NE(Term::iri("http://x/a"), Term::literal("http://x/a"));
  EXPECT_NE(Term::blank("a"), Term::literal("a"));
  EXPECT_EQ(Term::typed_literal("1", vocab::kXsdInteger), Term::typed_literal("1", vocab::kXsdInteger));
}

TEST(Term, NTriplesForm) {
  EXPECT_EQ(Term::iri("http://x/a").to_ntriples(), "<http://x/a>");
  EXPECT_EQ(Term::blank("b1").to_ntriples(), "_:b1");
  EXPECT_EQ(Term::lang_literal("say \"hi\"", "en").to_ntriples(), "\"say \\\"hi\\\"\"@en");
  EXPECT_EQ(Term::typed_literal("3", vocab::kXsdInteger).to_ntriples(),
            "\"3\"^^<http://www.w3.org/2001/XMLSchema#integer>");
  EXPECT_EQ(Term::literal("é\n").to_ntriples(), "\"\\u00E9\\n\"");
}

TEST(Graph, InsertReturnsWhetherNew) {
  Graph g;
  Triple t{msc_iri("53A45"), kPrefLabel, Term::lang_literal("Vector and tensor analysis", "en")};
  EXPECT_TRUE(g.insert(t));
  EXPECT_EQ(g.size(), 1u);
  EXPECT_FALSE(g.insert(t));
  EXPECT_EQ(g.size(), 1u);
  EXPECT_TRUE(g.contains(t));
}

TEST(Graph, RejectsMalformedTriples) {
  Graph g;
  EXPECT_THROW(g.insert(Term::literal("s"), kPrefLabel, Term::literal("o")), rdf::RdfError);
  EXPECT_THROW(g.insert(msc_iri("53A45"), Term::blank("p"), Term::literal("o")), rdf::RdfError);
  EXPECT_THROW(g.insert(msc_iri("53A45"), Term::literal("p"), Term::literal("o")), rdf::RdfError);
  EXPECT_TRUE(g.empty());
}

TEST(Graph, FrozenGraphRejectsInsertButCopiesAreMutable) {
  Graph g;
  g.insert(msc_iri("53A45"), kPrefLabel, Term::literal("x"));
  g.freeze();
  EXPECT_TRUE(g.frozen());
  EXPECT_THROW(g.insert(msc_iri("53A04"), kPrefLabel, Term::literal("y")), rdf::RdfError);
  auto copy = g.mutable_copy();
  EXPECT_FALSE(copy.frozen());
  EXPECT_TRUE(copy.insert(msc_iri("53A04"), kPrefLabel, Term::literal("y")));
  EXPECT_EQ(g.size(), 1u);
  EXPECT_EQ(copy.size(), 2u);
}

TEST(Graph, MatchNarrowerOfFixtureMiddleClass) {
  auto g = testing::fixture_expanded();
  auto found = g.match(msc_iri("53Axx"), kNarrower, std::nullopt);
  ASSERT_EQ(found.size(), 3u);
  EXPECT_EQ(found[0].object, msc_iri("53A04"));
  EXPECT_EQ(found[1].object, msc_iri("53A05"));
  EXPECT_EQ(found[2].object, msc_iri("53A45"));
}

TEST(Graph, WildcardMatchReturnsEverything) {
  auto g = testing::tiny_master();
  EXPECT_EQ(g.match(std::nullopt, std::nullopt, std::nullopt).size(), g.size());
}

TEST(Graph, MatchOnEmptyGraph) {
  Graph g;
  EXPECT_TRUE(g.match(msc_iri("53A45"), std::nullopt, std::nullopt).empty());
  EXPECT_TRUE(g.match(std::nullopt, std::nullopt, std::nullopt).empty());
  EXPECT_TRUE(g.match(std::nullopt, kPrefLabel, Term::literal("x")).empty());
}

TEST(Graph, EqualityIgnoresInsertionOrderAndPrefixes) {
  Graph a, b;
  a.insert(msc_iri("A"), kPrefLabel, Term::literal("1"));
  a.insert(msc_iri("B"), kPrefLabel, Term::literal("2"));
  b.prefixes().add("msc", testing::kMsc);
  b.insert(msc_iri("B"), kPrefLabel, Term::literal("2"));
  b.insert(msc_iri("A"), kPrefLabel, Term::literal("1"));
  EXPECT_TRUE(a == b);
  b.insert(msc_iri("C"), kPrefLabel, Term::literal("3"));
  EXPECT_FALSE(a == b);
}

TEST(PrefixMap, ExpandCurie) {
  rdf::PrefixMap msc{{"msc", "http://msc2010.org/resources/MSC/2010/"}};
  EXPECT_EQ(rdf::expand_curie(msc, "msc:53A45"),
            Term::iri("http://msc2010.org/resources/MSC/2010/53A45"));
  rdf::PrefixMap skos{{"skos", "http://www.w3.org/2004/02/skos/core#"}};
  EXPECT_EQ(rdf::expand_curie(skos, "skos:narrower"),
            Term::iri("http://www.w3.org/2004/02/skos/core#narrower"));
}

TEST(PrefixMap, UnknownPrefixNamesThePrefix) {
  try {
    rdf::expand_curie({}, "msc:53A45");
    FAIL() << "expected UnknownPrefix";
  } catch (const rdf::UnknownPrefix& e) {
    EXPECT_EQ(e.prefix(), "msc");
    EXPECT_NE(std::string(e.what()).find("msc"), std::string::npos);
  }
  EXPECT_THROW(rdf::expand_curie({}, "nocolon"), rdf::RdfError);
}

TEST(PrefixMap, CompactPrefersLongestNamespace) {
  rdf::PrefixMap m{{"msc", testing::kMsc}, {"ext", testing::kMsc + "vocab#"}};
  EXPECT_EQ(m.compact(testing::kMsc + "vocab#seeAlso"), "ext:seeAlso");
  EXPECT_EQ(m.compact(testing::kMsc + "53A45"), "msc:53A45");
  EXPECT_EQ(m.compact(testing::kMsc), "msc:");
  EXPECT_FALSE(m.compact("http://elsewhere.org/x").has_value());
  EXPECT_FALSE(m.compact(testing::kMsc + "a/b").has_value());
}

// Properties.

TEST(GraphProperty, SetSemantics) {
  testing::Gen gen(11);
  for (int round = 0; round < 100; ++round) {
    auto g = gen.graph(gen.uniform(0, 60), 10);
    std::set<std::string> seen;
    for (const auto& t : g.triples()) seen.insert(t.to_ntriples());
    EXPECT_EQ(seen.size(), g.size());
    for (const auto& t : g.triples()) {
      auto before = g.size();
      EXPECT_FALSE(g.insert(t));
      EXPECT_EQ(g.size(), before);
    }
  }
}

TEST(GraphProperty, MatchAgreesWithBruteForce) {
  testing::Gen gen(12);
  for (int round = 0; round < 60; ++round) {
    auto g = gen.graph(gen.uniform(0, 1000), 25);
    auto all = g.triples();
    for (int q = 0; q < 20; ++q) {
      std::optional<Term> s, p, o;
      if (!all.empty()) {
        const auto& seed = gen.pick(all);
        if (gen.chance(0.5)) s = gen.chance(0.8) ? seed.subject : gen.subject(25);
        if (gen.chance(0.5)) p = gen.chance(0.8) ? seed.predicate : Term::iri("http://example.org/p9");
        if (gen.chance(0.5)) o = gen.chance(0.8) ? seed.object : gen.object(25);
      }
      std::vector<Triple> expected;
      for (const auto& t : all) {
        if ((!s || t.subject == *s) && (!p || t.predicate == *p) && (!o || t.object == *o)) {
          expected.push_back(t);
        }
      }
      auto got = g.match(s, p, o);
      ASSERT_EQ(got, expected);
    }
  }
}

TEST(GraphProperty, MatchOrderIsLexicographicBySerializedTerms) {
  testing::Gen gen(13);
  auto g = gen.graph(300, 30);
  auto all = g.triples();
  auto key = [](const Triple& t) {
    return std::make_tuple(t.subject.to_ntriples(), t.predicate.to_ntriples(), t.object.to_ntriples());
  };
  EXPECT_TRUE(std::is_sorted(all.begin(), all.end(),
                             [&](const Triple& a, const Triple& b) { return key(a) < key(b); }));
}

TEST(TermProperty, EqualityIsAnEquivalence) {
  testing::Gen gen(14);
  std::vector<Term> terms;
  for (int i = 0; i < 60; ++i) terms.push_back(gen.object(6));
  for (const auto& a : terms) {
    EXPECT_EQ(a, a);
    for (const auto& b : terms) {
      EXPECT_EQ(a == b, b == a);
      EXPECT_EQ(a == b, a.to_ntriples() == b.to_ntriples());
      for (const auto& c : terms) {
        if (a == b && b == c) {
          EXPECT_EQ(a, c);
        }
      }
    }
  }
}

}  // namespace
}  // namespace msc
