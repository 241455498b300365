#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "msc/cli.hpp"
#include "msc/serializer.hpp"
#include "msc/text.hpp"
#include "msc/vocab.hpp"
#include "nlohmann/json.hpp"
#include "support/fixtures.hpp"
#include "support/readers.hpp"

namespace msc::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("msc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string at(const std::string& name) const { return (dir_ / name).string(); }

  std::vector<std::string> convert_args(const std::string& output) const {
    return {"convert", testing::fixture_path("fixture.msc"),
            "--labels", testing::fixture_path("labels.tsv"),
            "--mappings", testing::fixture_path("mappings.tsv"),
            "--collections", testing::fixture_path("collections.tsv"),
            "--external", testing::fixture_path("external.tsv"),
            "-o", output};
  }

  fs::path dir_;
};

TEST_F(Cli, PipelineProducesTheFixtureGraphs) {
  auto conv = run_cli(convert_args(at("master.nt")));
  ASSERT_EQ(conv.code, kOk) << conv.err;
  EXPECT_EQ(conv.err, "");
  EXPECT_TRUE(serial::parse_ntriples(text::read_file(at("master.nt"))) == testing::fixture_master());

  auto exp = run_cli({"expand", at("master.nt"), "-o", at("expanded.nt")});
  ASSERT_EQ(exp.code, kOk) << exp.err;
  EXPECT_NE(exp.err.find("triples derived in"), std::string::npos);
  EXPECT_TRUE(serial::parse_ntriples(text::read_file(at("expanded.nt"))) == testing::fixture_expanded());

  auto master_check = run_cli({"validate", at("master.nt"), "--phase", "master"});
  EXPECT_EQ(master_check.code, kOk) << master_check.out;
  auto val = run_cli({"validate", at("expanded.nt"), "--phase", "expanded"});
  EXPECT_EQ(val.code, kOk) << val.out;
  EXPECT_NE(val.out.find("0 error(s), 0 warning(s)"), std::string::npos) << val.out;
}

TEST_F(Cli, ValidateReportsCycle) {
  auto r = run_cli({"validate", testing::fixture_path("cyclic.nt")});
  EXPECT_EQ(r.code, kValidationErrors);
  EXPECT_NE(r.out.find("V4 error"), std::string::npos) << r.out;
  auto tsv = run_cli({"validate", testing::fixture_path("cyclic.nt"), "--tsv"});
  EXPECT_EQ(tsv.code, kValidationErrors);
  EXPECT_NE(tsv.out.find("V4\terror\t53A45\t"), std::string::npos) << tsv.out;
}

TEST_F(Cli, QueryPrintsListingTable) {
  text::write_file(at("expanded.nt"), serial::to_ntriples(testing::fixture_expanded()));
  auto r = run_cli({"query", at("expanded.nt"), testing::fixture_path("articles.nt"), "-q",
                    testing::fixture_path("listing.rq")});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out,
            "?subclass\t?notation\t?label\t?count_article\n"
            "<http://msc2010.org/resources/MSC/2010/53A04>\t\"53A04\"\t\"Curves in Euclidean space\"@en\t0\n"
            "<http://msc2010.org/resources/MSC/2010/53A05>\t\"53A05\"\t\"Surfaces in Euclidean space\"@en\t0\n"
            "<http://msc2010.org/resources/MSC/2010/53A45>\t\"53A45\"\t\"Vector and tensor analysis\"@en\t2\n");
  auto js = run_cli({"query", at("expanded.nt"), testing::fixture_path("articles.nt"), "-q",
                     testing::fixture_path("listing.rq"), "--json"});
  ASSERT_EQ(js.code, kOk);
  EXPECT_EQ(nlohmann::json::parse(js.out)["results"]["bindings"].size(), 3u);
}

TEST_F(Cli, RepeatedRunsAreByteIdentical) {
  ASSERT_EQ(run_cli(convert_args(at("a.nt"))).code, kOk);
  ASSERT_EQ(run_cli(convert_args(at("b.nt"))).code, kOk);
  EXPECT_EQ(text::read_file(at("a.nt")), text::read_file(at("b.nt")));

  ASSERT_EQ(run_cli({"expand", at("a.nt"), "-o", at("ea.nt")}).code, kOk);
  ASSERT_EQ(run_cli({"expand", at("b.nt"), "-o", at("eb.nt")}).code, kOk);
  EXPECT_EQ(text::read_file(at("ea.nt")), text::read_file(at("eb.nt")));

  for (const char* format : {"nt", "ttl", "rdf"}) {
    ASSERT_EQ(run_cli({"split", at("ea.nt"), "-d", at(std::string("sa-") + format), "--format", format}).code, kOk);
    ASSERT_EQ(run_cli({"split", at("eb.nt"), "-d", at(std::string("sb-") + format), "--format", format}).code, kOk);
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(at(std::string("sa-") + format))) {
      auto twin = fs::path(at(std::string("sb-") + format)) / entry.path().filename();
      ASSERT_TRUE(fs::exists(twin)) << twin;
      EXPECT_EQ(text::read_file(entry.path().string()), text::read_file(twin.string()));
      ++files;
    }
    EXPECT_EQ(files, 17u) << format;
  }

  ASSERT_EQ(run_cli({"export", at("ea.nt"), "-o", at("xa.rdf")}).code, kOk);
  ASSERT_EQ(run_cli({"export", at("eb.nt"), "-o", at("xb.rdf")}).code, kOk);
  EXPECT_EQ(text::read_file(at("xa.rdf")), text::read_file(at("xb.rdf")));
}

TEST_F(Cli, SplitSlicesReparse) {
  text::write_file(at("expanded.nt"), serial::to_ntriples(testing::fixture_expanded()));
  ASSERT_EQ(run_cli({"split", at("expanded.nt"), "-d", at("out"), "--format", "ttl"}).code, kOk);
  auto slices = serial::split_per_concept(testing::fixture_expanded());
  for (const auto& [code, slice] : slices) {
    EXPECT_TRUE(testing::read_turtle(text::read_file(at("out/" + code + ".ttl"))) == slice) << code;
  }
}

TEST_F(Cli, ConvertWritesNothingOnFatalInput) {
  text::write_file(at("broken.msc"), "53-XX Differential geometry\n53A45 Vector \xFF analysis\n");
  auto r = run_cli({"convert", at("broken.msc"), "-o", at("out.nt")});
  EXPECT_EQ(r.code, kUsage);
  EXPECT_NE(r.err.find("UTF-8"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(at("out.nt")));
}

TEST_F(Cli, ConvertReportsLineDiagnostics) {
  text::write_file(at("noisy.msc"), "53-XX Differential geometry\nbogus line here\n53Axx Classical differential geometry\n");
  auto r = run_cli({"convert", at("noisy.msc"), "-o", at("out.nt")});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.err.rfind(at("noisy.msc") + ":2: ", 0), 0u) << r.err;
  EXPECT_TRUE(fs::exists(at("out.nt")));
}

TEST_F(Cli, ParseErrorsNameFileAndLine) {
  text::write_file(at("bad.nt"), "<http://a/s> <http://a/p> <http://a/o> .\n<http://a/s> <http://a/p>\n");
  auto r = run_cli({"stats", at("bad.nt")});
  EXPECT_EQ(r.code, kUsage);
  EXPECT_EQ(r.err.rfind("msckos: " + at("bad.nt") + ":2: ", 0), 0u) << r.err;

  text::write_file(at("bad.rq"), "SELECT ?x WHERE {\n  ?x ?y }\n");
  auto q = run_cli({"query", testing::fixture_path("cyclic.nt"), "-q", at("bad.rq")});
  EXPECT_EQ(q.code, kUsage);
  EXPECT_NE(q.err.find(at("bad.rq") + ":2:"), std::string::npos) << q.err;
}

TEST_F(Cli, ExpandWithCustomRules) {
  text::write_file(at("master.nt"), serial::to_ntriples(testing::fixture_master()));
  text::write_file(at("mine.rules"), "mine: skos:broader(?x, ?y) => skos:related(?y, ?x)\n");
  auto only = run_cli({"expand", at("master.nt"), "-o", at("only.nt"), "--rules", at("mine.rules"), "--no-builtin"});
  ASSERT_EQ(only.code, kOk) << only.err;
  auto g = serial::parse_ntriples(text::read_file(at("only.nt")));
  auto oracle = testing::fixture_master().mutable_copy();
  for (const auto& t : testing::fixture_master().match(std::nullopt, rdf::Term::iri(vocab::skos("broader")), std::nullopt)) {
    oracle.insert(t.object, rdf::Term::iri(vocab::skos("related")), t.subject);
  }
  EXPECT_TRUE(g == oracle);

  auto both = run_cli({"expand", at("master.nt"), "-o", at("both.nt"), "--rules", at("mine.rules")});
  ASSERT_EQ(both.code, kOk);
  EXPECT_GT(serial::parse_ntriples(text::read_file(at("both.nt"))).size(), testing::fixture_expanded().size());

  text::write_file(at("junk.rules"), "junk: => nothing\n");
  auto junk = run_cli({"expand", at("master.nt"), "-o", at("junk.nt"), "--rules", at("junk.rules")});
  EXPECT_EQ(junk.code, kUsage);
  EXPECT_NE(junk.err.find(at("junk.rules")), std::string::npos);
}

TEST_F(Cli, ExportPicksFormatFromExtension) {
  text::write_file(at("expanded.nt"), serial::to_ntriples(testing::fixture_expanded()));
  ASSERT_EQ(run_cli({"export", at("expanded.nt"), "-o", at("out.ttl")}).code, kOk);
  EXPECT_TRUE(testing::read_turtle(text::read_file(at("out.ttl"))) == testing::fixture_expanded());
  ASSERT_EQ(run_cli({"export", at("expanded.nt"), "-o", at("out.xml"), "--format", "rdf"}).code, kOk);
  EXPECT_TRUE(testing::read_rdfxml(text::read_file(at("out.xml"))) == testing::fixture_expanded());
  EXPECT_EQ(run_cli({"export", at("expanded.nt"), "-o", at("out.json")}).code, kUsage);
}

TEST_F(Cli, Stats) {
  text::write_file(at("expanded.nt"), serial::to_ntriples(testing::fixture_expanded()));
  auto r = run_cli({"stats", at("expanded.nt")});
  ASSERT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("concepts:      17"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("top:           5"), std::string::npos);
  EXPECT_NE(r.out.find("intermediate:  3"), std::string::npos);
  EXPECT_NE(r.out.find("leaves:        9"), std::string::npos);
  EXPECT_NE(r.out.find("math labels:   1"), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, kUsage);
  EXPECT_EQ(run_cli({"frobnicate"}).code, kUsage);
  EXPECT_EQ(run_cli({"convert"}).code, kUsage);
  EXPECT_EQ(run_cli({"split", "x.nt", "-d", at("d"), "--format", "json"}).code, kUsage);
  EXPECT_EQ(run_cli({"validate", at("missing.nt")}).code, kUsage);
  EXPECT_EQ(run_cli({"validate", testing::fixture_path("cyclic.nt"), "--phase", "later"}).code, kUsage);
  auto help = run_cli({"--help"});
  EXPECT_EQ(help.code, kOk);
  EXPECT_NE(help.out.find("convert"), std::string::npos);
}

TEST_F(Cli, ServeRejectsBadConfig) {
  text::write_file(at("server.conf"), "port = 80\n");
  auto r = run_cli({"serve", "--config", at("server.conf")});
  EXPECT_EQ(r.code, kUsage);
  EXPECT_NE(r.err.find(at("server.conf")), std::string::npos);
}

}  // namespace
}  // namespace msc::cli
