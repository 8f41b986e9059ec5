#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "torsionlab/json_io.hpp"
#include "torsionlab/report.hpp"

using torsionlab::json_io::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "torsionlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = torsionlab::cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string sample(const std::string& name) { return std::string(TORSIONLAB_SAMPLES_DIR) + "/" + name; }

std::vector<std::string> lines(const std::string& path) {
  std::ifstream f(path);
  std::vector<std::string> out;
  for (std::string line; std::getline(f, line);) out.push_back(line);
  return out;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("torsionlab_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, MahlerEvalOnLehmer) {
  const auto r = run({"mahler", "eval", "--poly", sample("lehmer.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j.at("log_measure").get<double>(), 0.1623576, 1e-6);
}

TEST_F(CliTest, KroneckerVerdict) {
  const auto r = run({"mahler", "kronecker", "--poly", sample("t_minus_2.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_FALSE(json::parse(r.out).at("cyclotomic_product").get<bool>());
}

TEST_F(CliTest, UnknownFlagIsAUsageError) {
  const auto r = run({"mahler", "eval", "--poly", sample("lehmer.json"), "--bogus"});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, MissingFileAndBadJsonAreUsageErrors) {
  EXPECT_EQ(run({"mahler", "eval", "--poly", path("absent.json")}).code, 2);
  std::ofstream(path("bad.json")) << "{not json";
  EXPECT_EQ(run({"mahler", "eval", "--poly", path("bad.json")}).code, 2);
}

TEST_F(CliTest, TorsionScanWritesCsvAndManifest) {
  const auto csv = path("scan.csv");
  const auto r = run({"--out", csv, "torsion", "scan", "--binf", sample("binf_t_minus_2.json"), "--qmax", "50"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(csv);
  ASSERT_EQ(rows.size(), 51u);
  EXPECT_EQ(rows.front(), "q,torsion_order,betti,log_torsion_over_q");
  EXPECT_EQ(rows[4].substr(0, 5), "4,15,");
  const auto manifest = json::parse(std::ifstream(csv + ".manifest.json"));
  EXPECT_EQ(manifest.at("schema"), "torsionlab-manifest/1");
  EXPECT_EQ(manifest.at("subcommand"), "torsion scan");
  ASSERT_EQ(manifest.at("inputs").size(), 1u);
  EXPECT_EQ(manifest.at("inputs")[0].at("sha256").get<std::string>().size(), 64u);
  const auto summary = json::parse(r.out);
  EXPECT_FALSE(summary.contains("reports"));
  EXPECT_NEAR(summary.at("mahler_measure").get<double>(), std::log(2.0), 1e-12);
}

TEST_F(CliTest, TorsionScanNeedsOut) {
  EXPECT_EQ(run({"torsion", "scan", "--binf", sample("binf_t_minus_2.json"), "--qmax", "5"}).code, 2);
}

TEST_F(CliTest, ScanPlotDataHasTwoSeries) {
  const auto plot = path("plot.csv");
  const auto r = run({"--out", path("scan.csv"), "torsion", "scan", "--binf", sample("binf_t_minus_2.json"), "--qmax", "10",
                      "--plot", plot});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(plot);
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows.front(), "series,x,y,stderr");
  std::set<std::string> series;
  for (std::size_t k = 1; k < rows.size(); ++k) series.insert(rows[k].substr(0, rows[k].find(',')));
  EXPECT_EQ(series.size(), 2u);
}

TEST_F(CliTest, EmptyReportGivesHeaderOnlyPlotData) {
  std::ostringstream os;
  torsionlab::emit_plot_data(os, torsionlab::WalkReport{});
  EXPECT_EQ(os.str(), "series,x,y,stderr\n");
}

TEST_F(CliTest, ManifestIsReproducible) {
  const auto a = path("a.csv"), b = path("b.csv");
  ASSERT_EQ(run({"--out", a, "torsion", "scan", "--binf", sample("binf_2x2.json"), "--qmax", "12"}).code, 0);
  ASSERT_EQ(run({"--out", b, "torsion", "scan", "--binf", sample("binf_2x2.json"), "--qmax", "12"}).code, 0);
  EXPECT_EQ(torsionlab::read_file(a), torsionlab::read_file(b));
  auto ma = json::parse(torsionlab::read_file(a + ".manifest.json"));
  auto mb = json::parse(torsionlab::read_file(b + ".manifest.json"));
  EXPECT_EQ(ma.at("inputs"), mb.at("inputs"));
  ma["parameters"].erase("plot");
  mb["parameters"].erase("plot");
  EXPECT_EQ(ma, mb);
}

TEST_F(CliTest, TorsionCoverAndBetti) {
  const auto cover = run({"torsion", "cover", "--binf", sample("binf_t_minus_2.json"), "--q", "4"});
  ASSERT_EQ(cover.code, 0) << cover.err;
  EXPECT_EQ(json::parse(cover.out).at("torsion_order"), "15");
  const auto betti = run({"torsion", "betti", "--binf", sample("binf_t_minus_2.json"), "--q", "4", "--root", "2"});
  EXPECT_EQ(betti.code, 2);
}

TEST_F(CliTest, HeegaardJson) {
  const auto id = run({"heegaard", "--matrix", sample("heegaard_identity.json")});
  ASSERT_EQ(id.code, 0) << id.err;
  const auto j = json::parse(id.out);
  EXPECT_EQ(j.at("g"), 3);
  EXPECT_EQ(j.at("betti"), 3);
  EXPECT_EQ(j.at("torsion"), "1");
  const auto g1 = json::parse(run({"heegaard", "--matrix", sample("heegaard_genus1.json")}).out);
  EXPECT_EQ(g1.at("betti"), 0);
  EXPECT_EQ(g1.at("torsion"), "2");
  EXPECT_EQ(g1.at("det_agrees"), true);
}

TEST_F(CliTest, RepAcceptsPositionalMatrix) {
  const auto positional = run({"rep", "block", sample("word_g3.json")});
  const auto flagged = run({"rep", "block", "--matrix", sample("word_g3.json")});
  ASSERT_EQ(positional.code, 0) << positional.err;
  EXPECT_EQ(positional.out, flagged.out);
  const auto check = json::parse(run({"rep", "check-form", sample("word_g3.json")}).out);
  EXPECT_EQ(check.at("form_preserved"), true);
}

TEST_F(CliTest, RepIotaRejectsNonPrimitiveRoot) {
  EXPECT_EQ(run({"rep", "iota", sample("word_g3.json"), "--q", "4", "--root", "2"}).code, 2);
  EXPECT_EQ(run({"rep", "iota", sample("word_g3.json"), "--q", "5", "--root", "2"}).code, 0);
}

TEST_F(CliTest, WalkRunWritesAllFiles) {
  const auto out = path("walk");
  const auto r = run({"--out", out, "--threads", "2", "walk", "run", "--config", sample("walk_config_small.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"report.json", "series.csv", "plot.csv", "manifest.json"}) EXPECT_TRUE(fs::exists(out + "/" + f)) << f;
  const auto report = json::parse(std::ifstream(out + "/report.json"));
  EXPECT_EQ(report.at("n_trials"), 50);
  EXPECT_EQ(report.at("lyapunov").size(), 2u);
  const auto manifest = json::parse(std::ifstream(out + "/manifest.json"));
  EXPECT_EQ(manifest.at("master_seed"), 1);
  const auto reseeded = path("walk2");
  ASSERT_EQ(run({"--out", reseeded, "--seed", "9", "walk", "run", "--config", sample("walk_config_small.json")}).code, 0);
  EXPECT_EQ(json::parse(std::ifstream(reseeded + "/manifest.json")).at("master_seed"), 9);
  EXPECT_NE(torsionlab::read_file(reseeded + "/report.json"), torsionlab::read_file(out + "/report.json"));
}

TEST_F(CliTest, WalkRunIsIndependentOfThreads) {
  const auto a = path("a"), b = path("b");
  ASSERT_EQ(run({"--out", a, "--threads", "1", "walk", "run", "--config", sample("walk_config_small.json")}).code, 0);
  ASSERT_EQ(run({"--out", b, "--threads", "3", "walk", "run", "--config", sample("walk_config_small.json")}).code, 0);
  for (const char* f : {"report.json", "series.csv", "plot.csv"})
    EXPECT_EQ(torsionlab::read_file(a + "/" + f), torsionlab::read_file(b + "/" + f)) << f;
}

TEST_F(CliTest, UnknownConfigKeyIsRejected) {
  std::ofstream(path("cfg.json")) << R"({"g": 3, "generators": "torelli_like", "n_stepz": 4})";
  EXPECT_EQ(run({"--out", path("w"), "walk", "run", "--config", path("cfg.json")}).code, 2);
}

TEST_F(CliTest, HelpAndVersion) {
  EXPECT_EQ(run({"--help"}).code, 0);
  const auto v = run({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("torsionlab"), std::string::npos);
}
