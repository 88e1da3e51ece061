#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>
#include <sys/wait.h>

#include "json.hpp"
#include "test_support.hpp"

namespace aura {
namespace {

using testing::data_file;

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr discarded.
Run cli(const std::string& args, const std::string& stdin_text = {}) {
  std::string cmd = std::string(AURA_CLI_PATH) + " " + args + " 2>/dev/null";
  if (!stdin_text.empty()) cmd = "printf '%s' '" + stdin_text + "' | " + cmd;
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  while (auto n = fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(cli("").code, 1);
  EXPECT_EQ(cli("frobnicate").code, 1);
  EXPECT_EQ(cli("priors").code, 1);
  EXPECT_EQ(cli("--config /nonexistent.conf score hello").code, 1);
  EXPECT_EQ(cli("--help").code, 0);
}

TEST(CliTest, ScoreJson) {
  const auto r = cli("--json score I love my friends here");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["length"].get<double>(), 5.0 / 29.0, 1e-12);
  EXPECT_NEAR(j["disclosure"].get<double>(), 2.0 / 3.0, 1e-12);
  const double composite = 0.20 * j["length"].get<double>() +
                           0.20 * j["disclosure"].get<double>() +
                           0.35 * j["emotion"].get<double>() +
                           0.25 * j["specificity"].get<double>();
  EXPECT_NEAR(j["composite"].get<double>(), composite, 1e-12);
  EXPECT_EQ(cli("--json score", "from stdin").code, 0);
}

TEST(CliTest, StatsOnFixture) {
  const auto r = cli("--json stats " + data_file("corpus_fixture.jsonl"));
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["n_conversations"], 96);
  EXPECT_EQ(j["n_pairs"], 371);
  EXPECT_EQ(j["raw_records"], 683);
  EXPECT_EQ(cli("stats /nonexistent.jsonl").code, 2);
}

TEST(CliTest, BadLogIsDataError) {
  const auto path = ::testing::TempDir() + "/bad.jsonl";
  std::ofstream(path) << "{\"conversation_id\": \"a\"}\n";
  EXPECT_EQ(cli("priors " + path).code, 2);
}

TEST(CliTest, PriorsFromPairsFile) {
  const auto out = ::testing::TempDir() + "/cli_prior.tsv";
  const auto r = cli("priors --pairs " + data_file("prior_fixture_pairs.tsv") + " -o " + out);
  ASSERT_EQ(r.code, 0);
  const auto built = load_ev_table(out);
  const auto shipped = load_ev_table(default_data_dir() + "/prior_ev_table.tsv");
  for (auto s : kAllStates)
    for (auto a : kAllActions) {
      EXPECT_NEAR(built.value(s, a), shipped.value(s, a), 0.0005);
      EXPECT_EQ(built.count(s, a), shipped.count(s, a));
    }
  const auto text = cli("priors --pairs " + data_file("prior_fixture_pairs.tsv"));
  EXPECT_EQ(text.code, 0);
  EXPECT_EQ(text.out.rfind("state\taction\tev\tn\tband\n", 0), 0u);
}

TEST(CliTest, SimulateSmallDesign) {
  const auto dir = ::testing::TempDir() + "/cli_sim";
  std::filesystem::remove_all(dir);
  const auto r = cli("--seed 3 simulate --reps 1 --profiles cs_sophomore --out " + dir);
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("Overall performance"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir + "/report.json"));
  EXPECT_EQ(cli("simulate --conditions nope").code, 1);
  EXPECT_EQ(cli("simulate --design other").code, 1);
}

}  // namespace
}  // namespace aura
