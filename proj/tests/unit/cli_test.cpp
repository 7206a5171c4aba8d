#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "hetfair/graph.hpp"
#include "hetfair/synthetic.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace hetfair;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            (std::string("hetfair_cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  int run(const std::string& args) const {
    const std::string cmd = std::string("\"") + HETFAIR_CLI_PATH + "\" " + args + " > \"" +
                            (root_ / "stdout.txt").string() + "\" 2>&1";
    return std::system(cmd.c_str());
  }

  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream f(root_ / name, std::ios::binary);
    f << text;
    return root_ / name;
  }

  std::string read(const fs::path& p) const {
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
  }

  json read_json(const fs::path& p) const { return json::parse(read(p)); }

  void write_sbm(std::size_t n, double h, std::uint64_t seed) const {
    const LabeledGraph sbm = planted_partition(n, 2, 8.0, h, seed);
    save_edge_list(sbm.graph, root_ / "g.edges");
    std::ofstream nodes(root_ / "g.csv", std::ios::binary);
    nodes << "node_id,label,sensitive\n";
    for (NodeId i = 0; i < sbm.table.size(); ++i) {
      nodes << i << ',' << sbm.table.label(i) << ',' << sbm.table.sensitive(i) << '\n';
    }
  }

  std::string io() const {
    return "--graph \"" + (root_ / "g.edges").string() + "\" --nodes \"" + (root_ / "g.csv").string() + "\"";
  }
  std::string out(const std::string& name) const { return " --out \"" + (root_ / name).string() + "\""; }

  fs::path root_;
};

const char* kFixture =
    "node_id,y_true,y_pred,sensitive\n"
    "0,1,1,0\n1,1,1,0\n2,0,1,0\n3,1,0,0\n"
    "4,0,1,1\n5,0,0,1\n6,1,0,1\n7,0,0,1\n";

}  // namespace

TEST_F(CliTest, AnalyzeSameLabelGraph) {
  write("g.edges", "0 1\n1 2\n2 0\n2 3\n");
  write("g.csv", "node_id,label,sensitive\n0,1,0\n1,1,1\n2,1,0\n3,1,1\n");
  ASSERT_EQ(run("analyze " + io() + out("a")), 0) << read(root_ / "stdout.txt");
  const json s = read_json(root_ / "a" / "summary.json");
  EXPECT_EQ(s["nodes"], 4);
  EXPECT_EQ(s["edges"], 4);
  EXPECT_EQ(s["global_homophily"].get<double>(), 1.0);
  EXPECT_TRUE(fs::exists(root_ / "a" / "local_homophily.csv"));
  const json config = read_json(root_ / "a" / "analyze.config.json");
  EXPECT_EQ(config["seed"], 0);
}

TEST_F(CliTest, HistogramMassesSumToOne) {
  write_sbm(300, 0.6, 3);
  ASSERT_EQ(run("analyze " + io() + " --bins 7" + out("a")), 0);
  std::istringstream csv(read(root_ / "a" / "histogram.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "bin_lo,bin_hi,mass");
  double total = 0.0;
  int rows = 0;
  while (std::getline(csv, line)) {
    total += std::stod(line.substr(line.rfind(',') + 1));
    ++rows;
  }
  EXPECT_EQ(rows, 7);
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST_F(CliTest, BadInputFails) {
  write("g.edges", "0 1\n1 oops\n");
  write("g.csv", "node_id,label,sensitive\n0,1,0\n1,1,1\n");
  EXPECT_NE(run("analyze " + io() + out("a")), 0);
  EXPECT_NE(read(root_ / "stdout.txt").find("error"), std::string::npos);
  EXPECT_NE(run("nonsense"), 0);
  EXPECT_NE(run("analyze --graph missing.edges --nodes missing.csv"), 0);
}

TEST_F(CliTest, GenerateReportsImprovementAndWritesReplayableLog) {
  write_sbm(400, 0.5, 4);
  ASSERT_EQ(run("generate " + io() + " --alpha 3 --beta 10 --seed 9" + out("gen")), 0);
  const json report = read_json(root_ / "gen" / "report.json");
  EXPECT_LT(report["emd_generated_goal"].get<double>(), report["emd_original_goal"].get<double>());
  EXPECT_TRUE(fs::exists(root_ / "gen" / "generated.edges"));
  EXPECT_TRUE(fs::exists(root_ / "gen" / "edits.jsonl"));
  EXPECT_EQ(read_json(root_ / "gen" / "generate.config.json")["seed"], 9);
}

TEST_F(CliTest, SplitGammaZeroKeepsEightyPercent) {
  write_sbm(1000, 0.7, 5);
  ASSERT_EQ(run("split " + io() + " --gamma 0 --gamma 3" + out("s")), 0);
  const json d0 = read_json(root_ / "s" / "split_gamma0.json");
  const json& shares = d0["per_bin_train_share"];
  const json& nodes = d0["per_bin_nodes"];
  for (std::size_t b = 0; b < shares.size(); ++b) {
    if (nodes[b].get<int>() >= 50) EXPECT_NEAR(shares[b].get<double>(), 0.8, 0.02) << "bin " << b;
  }
  EXPECT_TRUE(fs::exists(root_ / "s" / "split_gamma3.csv"));
  std::istringstream csv(read(root_ / "s" / "split_gamma0.csv"));
  std::string line;
  std::getline(csv, line);
  std::size_t rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 1000u);
}

TEST_F(CliTest, MetricsFixture) {
  const auto p = write("p.csv", kFixture);
  ASSERT_EQ(run("metrics --predictions \"" + p.string() + "\" --compare \"" + p.string() + "\" --baseline \"" +
                p.string() + "\"" + out("m")),
            0)
      << read(root_ / "stdout.txt");
  const json m = read_json(root_ / "m" / "metrics.json");
  EXPECT_EQ(m["scores"]["sp"].get<double>(), 0.5);
  EXPECT_EQ(m["scores"]["micro_f1"].get<double>(), 0.5);
  EXPECT_EQ(m["delta"]["f1"].get<double>(), 0.0);
  EXPECT_EQ(m["delta"]["sp"].get<double>(), 0.0);
  EXPECT_EQ(m["adjusted"]["f1"].get<double>(), 0.0);
  EXPECT_EQ(m["adjusted"]["sp"].get<double>(), 0.0);
}

TEST_F(CliTest, TheoryClosedFormColumn) {
  ASSERT_EQ(run("theory --alpha 0.2 --alpha 0.5 --lambda 0 --trials 0" + out("t")), 0);
  std::istringstream csv(read(root_ / "t" / "sweep.csv"));
  std::string line;
  std::getline(csv, line);
  ASSERT_TRUE(std::getline(csv, line));
  EXPECT_EQ(line.rfind("0.2,0.45", 0), 0u) << line;
  EXPECT_FALSE(std::getline(csv, line));  // h + 0.5 > 1 is skipped
  EXPECT_NE(read(root_ / "stdout.txt").find("skip"), std::string::npos);

  ASSERT_EQ(run("theory --mu-s 0 --trials 0" + out("z")), 0);
  const json sweep = read_json(root_ / "z" / "sweep.json");
  ASSERT_EQ(sweep["rows"].size(), 7u);
  for (const auto& row : sweep["rows"]) EXPECT_EQ(row["closed_form"].get<double>(), 0.0);
  EXPECT_TRUE(fs::exists(root_ / "z" / "theory.config.json"));
}
