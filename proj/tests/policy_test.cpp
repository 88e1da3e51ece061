#include "aura/policy.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace aura {
namespace {

using testing::data_file;
using testing::read_tsv;

constexpr auto kLS = EngagementState::low_stable;
constexpr auto kSpec = ActionType::specification;
constexpr auto kTopic = ActionType::topic_probe;

TEST(ConfidenceBandTest, Thresholds) {
  EXPECT_EQ(confidence_band(0), 'N');
  EXPECT_EQ(confidence_band(1), 'L');
  EXPECT_EQ(confidence_band(4), 'L');
  EXPECT_EQ(confidence_band(5), 'M');
  EXPECT_EQ(confidence_band(19), 'M');
  EXPECT_EQ(confidence_band(20), 'R');
}

TEST(EvTableTest, ForkIsIndependent) {
  EvTable prior;
  prior.set(kLS, kSpec, 0.2, 10);
  auto session = fork_session(prior);
  update_ev(session, kLS, kSpec, 1.0, 0.5);
  EXPECT_DOUBLE_EQ(session.value(kLS, kSpec), 0.6);
  EXPECT_EQ(prior.value(kLS, kSpec), 0.2);
  EXPECT_EQ(session.count(kLS, kSpec), 10u);
  EXPECT_EQ(session.provenance(), TableProvenance::session);
}

TEST(EvTableTest, PriorTablesAreImmutable) {
  EvTable prior;
  EXPECT_THROW(update_ev(prior, kLS, kSpec, 1.0, 0.3), ContractViolation);
  auto session = fork_session(prior);
  EXPECT_THROW(session.set(kLS, kSpec, 0.1, 1), ContractViolation);
}

TEST(UpdateTest, FixedPointAndFullStep) {
  EvTable prior;
  prior.set(kLS, kSpec, 0.25, 1);
  auto s = fork_session(prior);
  EXPECT_EQ(update_ev(s, kLS, kSpec, 0.25, 0.3), 0.25);
  EXPECT_EQ(update_ev(s, kLS, kSpec, 0.9, 1.0), 0.9);
  EXPECT_EQ(update_ev(s, kLS, kSpec, -0.2, 1.0), -0.2);
  EXPECT_EQ(update_ev(s, kLS, kSpec, -0.2, 0.3), -0.2);
  EXPECT_EQ(update_ev(s, kLS, kSpec, 0.9, 1.0), 0.9);
  EXPECT_DOUBLE_EQ(update_ev(s, kLS, kSpec, 0.0, 0.3), 0.9 * 0.7);
  EXPECT_THROW(update_ev(s, kLS, kSpec, 0.0, 0.0), ContractViolation);
  EXPECT_THROW(update_ev(s, kLS, kSpec, 0.0, 1.5), ContractViolation);
}

TEST(GreedyTest, TiesGoToLowestIndex) {
  EvTable t;
  EXPECT_EQ(greedy_action(t, kLS), ActionType::specification);
  t.set(kLS, ActionType::validation, 0.3, 1);
  t.set(kLS, ActionType::elaboration, 0.3, 1);
  EXPECT_EQ(greedy_action(t, kLS), ActionType::elaboration);
  t.set(kLS, ActionType::continuation, 0.31, 1);
  EXPECT_EQ(greedy_action(t, kLS), ActionType::continuation);
}

TEST(SelectTest, ZeroEpsilonIsGreedy) {
  EvTable t;
  t.set(kLS, kTopic, 0.5, 1);
  RandomSource rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto sel = select_action(t, kLS, 0.0, rng);
    EXPECT_FALSE(sel.explored);
    EXPECT_EQ(sel.action, kTopic);
  }
  EXPECT_THROW(select_action(t, kLS, 1.1, rng), ContractViolation);
}

TEST(SelectTest, FullExplorationIsUniform) {
  EvTable t;
  RandomSource rng(2);
  std::map<ActionType, int> counts;
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    const auto sel = select_action(t, kLS, 1.0, rng);
    EXPECT_TRUE(sel.explored);
    ++counts[sel.action];
  }
  for (auto a : kAllActions) EXPECT_NEAR(counts[a] / double(n), 0.2, 0.01);
}

TEST(EpsilonTest, FixedAndDecay) {
  const auto fixed = EpsilonSchedule::fixed(0.3);
  EXPECT_EQ(epsilon_at(fixed, 1, 15), 0.3);
  EXPECT_EQ(epsilon_at(fixed, 15, 15), 0.3);
  EXPECT_THROW(epsilon_at(fixed, 16, 15), ContractViolation);
  const auto decay = EpsilonSchedule::linear_decay(0.40, 0.05, 15);
  EXPECT_NEAR(epsilon_at(decay, 1), 0.40 - 0.35 / 15.0, 1e-15);
  EXPECT_NEAR(epsilon_at(decay, 1), 0.3767, 5e-5);
  EXPECT_NEAR(epsilon_at(decay, 15), 0.05, 1e-15);
  EXPECT_THROW(epsilon_at(decay, 0), ContractViolation);
  for (int t = 1; t < 15; ++t)
    EXPECT_GT(epsilon_at(decay, t), epsilon_at(decay, t + 1));
  EXPECT_THROW(EpsilonSchedule::fixed(-0.1), ContractViolation);
  EXPECT_THROW(EpsilonSchedule::linear_decay(0.1, 0.2, 15), ContractViolation);
  EXPECT_THROW(EpsilonSchedule::linear_decay(0.4, 0.05, 0), ContractViolation);
}

TEST(BaselineTest, WeightsAreNormalized) {
  BaselinePolicy b;
  double total = 0;
  for (double w : b.weights()) total += w;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NEAR(b.weights()[0], 0.623, 1e-12);
  BaselinePolicy custom({2, 0, 0, 0, 2});
  EXPECT_DOUBLE_EQ(custom.weights()[4], 0.5);
  EXPECT_THROW(BaselinePolicy({0, 0, 0, 0, 0}), ContractViolation);
  EXPECT_THROW(BaselinePolicy({-1, 1, 0, 0, 0}), ContractViolation);
}

TEST(BaselineTest, SamplesFollowWeights) {
  BaselinePolicy b;
  RandomSource rng(3);
  std::array<int, kNumActions> counts{};
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[index_of(b.sample(rng))];
  for (std::size_t i = 0; i < kNumActions; ++i)
    EXPECT_NEAR(counts[i] / double(n), kCorpusActionWeights[i], 0.005);
  BaselinePolicy only_last({0, 0, 0, 0, 1});
  for (int i = 0; i < 100; ++i)
    EXPECT_EQ(only_last.sample(rng), ActionType::continuation);
}

TEST(PriorsTest, WorkedExample) {
  std::vector<ExchangePair> pairs;
  // 16 gains averaging 0.3815 and 4 non-gains.
  for (int i = 0; i < 16; ++i) {
    const double g = 0.3815 + (i % 2 ? 0.05 : -0.05);
    pairs.push_back({kLS, kTopic, 0.1, 0.1 + g});
  }
  for (int i = 0; i < 4; ++i) pairs.push_back({kLS, kTopic, 0.2, 0.2 - 0.01 * i});
  const auto t = compute_priors(pairs);
  // 0.80 x 0.3815 is 0.3052, published as 0.305 at three decimals.
  EXPECT_NEAR(t.value(kLS, kTopic), 0.80 * 0.3815, 1e-12);
  EXPECT_NEAR(t.value(kLS, kTopic), 0.305, 0.0005);
  EXPECT_EQ(t.count(kLS, kTopic), 20u);
  EXPECT_EQ(t.value(kLS, kSpec), 0.0);
  EXPECT_EQ(t.count(kLS, kSpec), 0u);
}

TEST(PriorsTest, ZeroGainIsNotImprovement) {
  const auto t = compute_priors({{kLS, kSpec, 0.2, 0.2}, {kLS, kSpec, 0.2, 0.1}});
  EXPECT_EQ(t.value(kLS, kSpec), 0.0);
  EXPECT_EQ(t.count(kLS, kSpec), 2u);
}

// Pairs engineered by tests/oracles/prior_fixture.py; the expected table is
// the oracle's brute-force group-by.
TEST(PriorsTest, FixturePairsMatchOracle) {
  const auto table = compute_priors(load_pairs(data_file("prior_fixture_pairs.tsv")));
  const auto rows = read_tsv(data_file("prior_fixture_expected.tsv"));
  ASSERT_EQ(rows.size(), 26u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto s = parse_state(rows[i][0]);
    const auto a = parse_action(rows[i][1]);
    EXPECT_NEAR(table.value(s, a), std::stod(rows[i][2]), 1e-12) << rows[i][0];
    EXPECT_EQ(table.count(s, a), std::stoul(rows[i][3]));
  }
}

TEST(EvTableFileTest, RoundTripIsExact) {
  EvTable t;
  t.set(kLS, kTopic, 0.1 + 0.2, 20);
  t.set(EngagementState::high_stable, ActionType::continuation, 1.0 / 3.0, 3);
  std::istringstream in(serialize(t));
  const auto back = parse_ev_table(in);
  EXPECT_EQ(back, t);
  EXPECT_EQ(serialize(back), serialize(t));
}

TEST(EvTableFileTest, RejectsIncompleteOrDuplicate) {
  std::istringstream short_in("state\taction\tev\tn\tband\nlow_stable\tspecification\t0.1\t1\tL\n");
  EXPECT_THROW(parse_ev_table(short_in), DataError);
  EvTable t;
  auto text = serialize(t) + "low_stable\tspecification\t0\t0\tN\n";
  std::istringstream dup(text);
  EXPECT_THROW(parse_ev_table(dup), DataError);
  std::istringstream bad("low_stable\tspecification\tabc\t0\n");
  EXPECT_THROW(parse_ev_table(bad), DataError);
  EXPECT_THROW(load_ev_table("/nonexistent/table.tsv"), DataError);
}

TEST(EvTableFileTest, ShippedPriorMatchesPublishedTable) {
  const auto t = load_ev_table(default_data_dir() + "/prior_ev_table.tsv");
  std::size_t total = 0;
  std::size_t populated = 0;
  for (auto s : kAllStates)
    for (auto a : kAllActions) {
      total += t.count(s, a);
      populated += t.count(s, a) > 0;
    }
  EXPECT_EQ(total, 371u);
  EXPECT_EQ(populated, 17u);
  EXPECT_EQ(t.value(kLS, kTopic), 0.305);
  EXPECT_EQ(t.value(kLS, ActionType::continuation), 0.476);
  EXPECT_EQ(t.count(kLS, kSpec), 112u);
}

TEST(PairsFileTest, RoundTripAndValidation) {
  std::vector<ExchangePair> pairs = {{kLS, kSpec, 0.1, 0.35},
                                     {EngagementState::medium, kTopic, 0.5, 0.4}};
  std::istringstream in(serialize(pairs));
  EXPECT_EQ(parse_pairs(in), pairs);
  std::istringstream out_of_range("low_stable\tspecification\t0.1\t1.5\n");
  EXPECT_THROW(parse_pairs(out_of_range), DataError);
  std::istringstream bad_state("sleepy\tspecification\t0.1\t0.2\n");
  EXPECT_THROW(parse_pairs(bad_state), DataError);
  std::istringstream short_row("low_stable\tspecification\t0.1\n");
  try {
    parse_pairs(short_row);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

}  // namespace
}  // namespace aura
