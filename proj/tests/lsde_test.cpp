#include "aura/lsde.hpp"

#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "aura/random.hpp"
#include "test_support.hpp"

namespace aura {
namespace {

using testing::fixture_scorer;
using testing::real_scorer;

std::string words(int n, const char* w = "word") {
  std::string s;
  for (int i = 0; i < n; ++i) s += (i ? " " : "") + std::string(w);
  return s;
}

TEST(LsdeTest, WeightsSumToOne) {
  EXPECT_DOUBLE_EQ(lsde::kWeightLength + lsde::kWeightDisclosure +
                       lsde::kWeightEmotion + lsde::kWeightSpecificity,
                   1.0);
}

TEST(LsdeTest, LengthCapsAtTwentyNineWords) {
  EXPECT_DOUBLE_EQ(normalize_length(ResponseText(words(10))), 10.0 / 29.0);
  EXPECT_EQ(normalize_length(ResponseText(words(29))), 1.0);
  EXPECT_EQ(normalize_length(ResponseText(words(200))), 1.0);
  EXPECT_EQ(normalize_length(ResponseText("")), 0.0);
}

TEST(LsdeTest, DisclosureCountsFirstPersonCappedAtThree) {
  EXPECT_EQ(count_first_person(ResponseText("I think my friends and I love our dorm")), 4u);
  EXPECT_EQ(score_disclosure(ResponseText("I think my friends and I love our dorm")), 1.0);
  EXPECT_DOUBLE_EQ(score_disclosure(ResponseText("We went")), 1.0 / 3.0);
  EXPECT_EQ(score_disclosure(ResponseText("you and they")), 0.0);
  // Contractions are not in the pronoun set.
  EXPECT_EQ(count_first_person(ResponseText("I'm fine")), 0u);
  EXPECT_EQ(count_first_person(ResponseText("ME, Myself, MINE!")), 3u);
}

TEST(LsdeTest, EmotionIsCompoundMagnitude) {
  FixtureSentimentScorer s({{"sad", -0.6}});
  EXPECT_DOUBLE_EQ(score_emotion(ResponseText("sad"), s), 0.6);
  FixtureSentimentScorer bad({{"x", 1.5}});
  EXPECT_THROW(score_emotion(ResponseText("x"), bad), ScoringError);
}

TEST(LsdeTest, CompositeIsWeightedSum) {
  EXPECT_DOUBLE_EQ(composite(1, 1, 1, 1), 1.0);
  EXPECT_DOUBLE_EQ(composite(0.5, 0.25, 0.4, 1.0 / 3.0),
                   0.2 * 0.5 + 0.2 * 0.25 + 0.35 * 0.4 + 0.25 / 3.0);
  EXPECT_THROW(composite(1.1, 0, 0, 0), ContractViolation);
  EXPECT_THROW(composite(0, -0.1, 0, 0), ContractViolation);
}

TEST(LsdeTest, KnownResponse) {
  const auto r = real_scorer()->score("i love it");
  EXPECT_DOUBLE_EQ(r.score.length, 3.0 / 29.0);
  EXPECT_DOUBLE_EQ(r.score.disclosure, 1.0 / 3.0);
  EXPECT_NEAR(r.score.emotion, 0.6369, 5e-5);
  EXPECT_EQ(r.score.specificity, 0.0);
  EXPECT_FALSE(r.degraded());
}

TEST(LsdeTest, StrictModePropagatesPluginFailure) {
  LsdeScorer s(std::make_shared<FixtureSentimentScorer>(
                   std::unordered_map<std::string, double>{}, true),
               std::make_shared<FixedSpecificityDetector>(SpecificityFlags{}));
  EXPECT_THROW(s.score("hello"), ScoringError);
}

TEST(LsdeTest, LenientModeZeroesFailedDimension) {
  LsdeScorer s(std::make_shared<FixtureSentimentScorer>(
                   std::unordered_map<std::string, double>{}, true),
               std::make_shared<FixedSpecificityDetector>(SpecificityFlags{}, true),
               ScoringMode::lenient);
  const auto r = s.score("I went home");
  EXPECT_TRUE(r.emotion_failed);
  EXPECT_TRUE(r.specificity_failed);
  EXPECT_EQ(r.score.emotion, 0.0);
  EXPECT_EQ(r.score.specificity, 0.0);
  EXPECT_DOUBLE_EQ(r.score.composite, 0.2 * 3.0 / 29.0 + 0.2 / 3.0);
}

TEST(LsdeTest, NullPluginsRejected) {
  EXPECT_THROW(LsdeScorer(nullptr, std::make_shared<RuleSpecificityDetector>()),
               ContractViolation);
}

class CountingSentiment : public SentimentScorer {
 public:
  double compound(std::string_view) const override {
    const int now = ++inside_;
    int seen = max_.load();
    while (now > seen && !max_.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::microseconds(200));
    --inside_;
    return 0.1;
  }
  bool concurrency_safe() const override { return false; }
  int max_concurrent() const { return max_.load(); }

 private:
  mutable std::atomic<int> inside_{0};
  mutable std::atomic<int> max_{0};
};

TEST(LsdeTest, UnsafePluginCallsAreSerialized) {
  auto sentiment = std::make_shared<CountingSentiment>();
  LsdeScorer s(sentiment, std::make_shared<FixedSpecificityDetector>(SpecificityFlags{}));
  std::vector<std::thread> threads;
  for (int i = 0; i < 4; ++i)
    threads.emplace_back([&] {
      for (int k = 0; k < 20; ++k) s.score("text");
    });
  for (auto& t : threads) t.join();
  EXPECT_EQ(sentiment->max_concurrent(), 1);
}

// Random texts from a vocabulary mixing pronouns, sentiment words, places,
// times, names and punctuation.
std::string random_text(RandomSource& rng) {
  static const std::vector<std::string> vocab = {
      "i", "me", "my", "we", "our", "us", "myself", "ourselves", "mine", "ours",
      "love", "hate", "great", "terrible", "GREAT", "sad", "happy", "not",
      "very", "the", "campus", "library", "in", "at", "yesterday", "Monday",
      "last", "week", "Jesse", "Hall", "CS101", "2024", "ok", "!!!", "?",
      ":)", "but", "and", "it", "was", "kind", "of", "\xF0\x9F\x98\x80",
      "caf\xC3\xA9", "--", "friends"};
  const auto n = rng.below(80);
  std::string s;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (i) s += rng.bernoulli(0.1) ? "  \n" : " ";
    s += vocab[rng.below(vocab.size())];
  }
  return s;
}

TEST(LsdePropertyTest, RandomTextsStayInRange) {
  RandomSource rng(5);
  const auto scorer = real_scorer();
  for (int i = 0; i < 2000; ++i) {
    const auto text = random_text(rng);
    const auto r = scorer->score(text);
    for (double v : {r.score.length, r.score.disclosure, r.score.emotion,
                     r.score.specificity, r.score.composite}) {
      ASSERT_GE(v, 0.0) << text;
      ASSERT_LE(v, 1.0) << text;
    }
    const double expect = 0.20 * r.score.length + 0.20 * r.score.disclosure +
                          0.35 * r.score.emotion + 0.25 * r.score.specificity;
    ASSERT_NEAR(r.score.composite, expect, 1e-12) << text;
  }
}

TEST(QualityBucketTest, Boundaries) {
  EXPECT_EQ(quality_bucket(0.0), 0);
  EXPECT_EQ(quality_bucket(0.2), 1);
  EXPECT_EQ(quality_bucket(0.3999), 1);
  EXPECT_EQ(quality_bucket(0.6), 3);
  EXPECT_EQ(quality_bucket(1.0), 4);
}

TEST(FixtureScorerTest, ComposesPinnedCompound) {
  const auto s = fixture_scorer({{"i i i la", 0.5}});
  const auto r = s->score("i i i la");
  EXPECT_DOUBLE_EQ(r.score.composite, 0.2 * 4.0 / 29.0 + 0.2 + 0.35 * 0.5);
}

}  // namespace
}  // namespace aura
