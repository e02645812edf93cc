#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "gtest/gtest.h"

namespace medcons {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("medcons_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name));
    return {std::istreambuf_iterator<char>(in), {}};
  }

  int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "medcons");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return cli::run(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  // Value of a "report <group> <key> <value>" line from the last run.
  std::string report(const std::string& key, const std::string& group = "0") const {
    std::istringstream lines(err_.str());
    std::string line;
    while (std::getline(lines, line)) {
      std::istringstream fields(line);
      std::string tag, g, k, v;
      std::getline(fields, tag, '\t');
      std::getline(fields, g, '\t');
      std::getline(fields, k, '\t');
      std::getline(fields, v, '\t');
      if (tag == "report" && g == group && k == key) return v;
    }
    return "";
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, CompareIdenticalFilesIsAllZero) {
  write("a.part", "3\n3\n1\n2\n");
  ASSERT_EQ(cli({"compare", path("a.part"), path("a.part")}), 0);
  EXPECT_EQ(out_.str(), "mirkin 0\nrand 0.000000\nsplit_join 0.000000\nvi 0.000000\n");
}

TEST_F(CliTest, CompareWorkedExample) {
  write("a.part", "0\n0\n1\n1\n");
  write("b.part", "0\n0\n0\n1\n");
  ASSERT_EQ(cli({"compare", path("a.part"), path("b.part")}), 0);
  EXPECT_EQ(out_.str(), "mirkin 3\nrand 0.500000\nsplit_join 0.250000\nvi 0.823959\n");
}

TEST_F(CliTest, CompareLengthMismatchIsRuntimeError) {
  write("a.part", "0\n0\n1\n");
  write("b.part", "0\n1\n");
  EXPECT_EQ(cli({"compare", path("a.part"), path("b.part")}), 1);
  EXPECT_NE(err_.str().find("load-parts"), std::string::npos);
}

TEST_F(CliTest, MissingGraphIsUsageError) {
  write("ens.tsv", "0\t0\n0\t1\n");
  EXPECT_EQ(cli({"consensus", "--parts", path("ens.tsv"), "--out", path("c.part")}), 2);
  EXPECT_EQ(cli({}), 2);
  EXPECT_EQ(cli({"consensus", "--graph", "g", "--parts", "p", "--out", "o", "--engine", "nope"}), 2);
}

TEST_F(CliTest, MissingInputFileIsRuntimeError) {
  EXPECT_EQ(cli({"consensus", "--graph", path("none.el"), "--parts", path("none.tsv"), "--out",
                 path("c.part")}),
            1);
  EXPECT_NE(err_.str().find("error: load-parts"), std::string::npos);
}

TEST_F(CliTest, GenConsensusCompareRoundTrip) {
  ASSERT_EQ(cli({"gen", "--q", "4", "--s", "25", "--p-in", "0.3", "--p-out", "0.02", "--seed",
                 "4", "--ensemble", "6", "--epsilon", "0.1", "--out-graph", path("g.el"),
                 "--out-truth", path("t.part"), "--out-parts", path("ens.tsv")}),
            0);
  ASSERT_EQ(cli({"consensus", "--graph", path("g.el"), "--parts", path("ens.tsv"), "--out",
                 path("c.part"), "--workers", "2"}),
            0);
  EXPECT_EQ(report("converged"), "1");
  EXPECT_EQ(report("lambda_used"), "none");
  const std::int64_t final_total = std::stoll(report("final_total_mirkin"));

  // Split the ensemble into single-column files and compare each against c.part.
  std::ifstream ens(path("ens.tsv"));
  std::vector<std::string> columns(6);
  std::string line;
  while (std::getline(ens, line)) {
    std::istringstream fields(line);
    for (auto& col : columns) {
      std::string label;
      fields >> label;
      col += label + "\n";
    }
  }
  std::int64_t sum = 0;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    write("p" + std::to_string(j) + ".part", columns[j]);
    ASSERT_EQ(cli({"compare", path("c.part"), path("p" + std::to_string(j) + ".part")}), 0);
    std::istringstream result(out_.str());
    std::string key;
    std::int64_t m;
    result >> key >> m;
    sum += m;
  }
  EXPECT_EQ(sum, final_total);
}

TEST_F(CliTest, PipelineIsDeterministic) {
  std::vector<std::string> gen = {"gen", "--q", "3", "--s", "20", "--seed", "9", "--ensemble",
                                  "5", "--out-graph", path("g.el"), "--out-parts", path("e.tsv")};
  ASSERT_EQ(cli(gen), 0);
  const std::string graph1 = read("g.el"), ens1 = read("e.tsv");
  ASSERT_EQ(cli(gen), 0);
  EXPECT_EQ(read("g.el"), graph1);
  EXPECT_EQ(read("e.tsv"), ens1);

  auto strip_wall = [](const std::string& s) {
    std::string out;
    std::istringstream lines(s);
    std::string line;
    while (std::getline(lines, line))
      if (line.find("wall_time") == std::string::npos) out += line + "\n";
    return out;
  };
  std::vector<std::string> cons = {"consensus", "--graph", path("g.el"), "--parts", path("e.tsv"),
                                   "--auto-lambda", "--out", path("c.part")};
  ASSERT_EQ(cli(cons), 0);
  const std::string c1 = read("c.part"), r1 = strip_wall(err_.str());
  ASSERT_EQ(cli(cons), 0);
  EXPECT_EQ(read("c.part"), c1);
  EXPECT_EQ(strip_wall(err_.str()), r1);
}

TEST_F(CliTest, GroupReportsSweepAndMembers) {
  std::ostringstream tsv;
  save_ensemble(testing::two_family_ensemble(), tsv);
  write("fam.tsv", tsv.str());
  ASSERT_EQ(cli({"group", "--parts", path("fam.tsv")}), 0);
  const std::string text = out_.str();
  EXPECT_EQ(text.rfind("lambda\tn_groups\tlargest_size\n1.000000\t1\t10\n", 0), 0u);
  EXPECT_NE(text.find("0: 0 1 2 3 4\n1: 5 6 7 8 9\n"), std::string::npos);
  EXPECT_NE(text.find("selected_lambda\t"), std::string::npos);
}

TEST_F(CliTest, ConsensusOnAllGroupsWritesOneFilePerGroup) {
  std::ostringstream tsv;
  save_ensemble(testing::two_family_ensemble(), tsv);
  write("fam.tsv", tsv.str());
  std::string edges;
  for (int v = 0; v + 1 < 40; ++v) edges += std::to_string(v) + " " + std::to_string(v + 1) + "\n";
  write("g.el", edges);
  ASSERT_EQ(cli({"consensus", "--graph", path("g.el"), "--parts", path("fam.tsv"),
                 "--auto-lambda", "--group", "all", "--out", path("c.part")}),
            0);
  EXPECT_TRUE(fs::exists(path("c.part.group0")));
  EXPECT_TRUE(fs::exists(path("c.part.group1")));
  EXPECT_EQ(report("group_sizes", "1"), "5,5");
}

TEST_F(CliTest, PartsDirectoryAndAlternativeEngines) {
  fs::create_directories(path("parts"));
  write("parts/a.part", "0\n0\n1\n1\n");
  write("parts/b.part", "0\n0\n0\n1\n");
  write("g.el", "0 1\n1 2\n2 3\n");
  for (std::string engine : {"median", "boem", "exact"}) {
    ASSERT_EQ(cli({"consensus", "--graph", path("g.el"), "--parts", path("parts"), "--engine",
                   engine, "--out", path("c.part")}),
              0)
        << err_.str();
    EXPECT_EQ(report("final_total_mirkin"), "3") << engine;
  }
}

TEST_F(CliTest, MetricsSelftestPasses) {
  ASSERT_EQ(cli({"metrics-selftest", "--trials", "200"}), 0);
  EXPECT_NE(out_.str().find("mirkin_oracle\tpass"), std::string::npos);
}

}  // namespace
}  // namespace medcons
