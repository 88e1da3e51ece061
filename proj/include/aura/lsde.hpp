#pragma once

// LSDE response quality: Length, Specificity, self-Disclosure, Emotion, and
// their weighted composite.

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>

#include "aura/error.hpp"
#include "aura/sentiment.hpp"
#include "aura/specificity.hpp"
#include "aura/text.hpp"

namespace aura {

namespace lsde {

inline constexpr double kLengthCapWords = 29.0;
inline constexpr double kPronounCap = 3.0;

inline constexpr double kWeightLength = 0.20;
inline constexpr double kWeightDisclosure = 0.20;
inline constexpr double kWeightEmotion = 0.35;
inline constexpr double kWeightSpecificity = 0.25;

inline constexpr std::array<std::string_view, 10> kFirstPersonPronouns = {
    "i", "me", "my", "mine", "myself", "we", "us", "our", "ours", "ourselves"};

}  // namespace lsde

struct LsdeScore {
  double length = 0.0;
  double specificity = 0.0;
  double disclosure = 0.0;
  double emotion = 0.0;
  double composite = 0.0;

  friend bool operator==(const LsdeScore&, const LsdeScore&) = default;
};

inline double normalize_length(const ResponseText& text) {
  return std::min(static_cast<double>(text.word_count()) / lsde::kLengthCapWords,
                  1.0);
}

inline std::size_t count_first_person(const ResponseText& text) {
  std::size_t n = 0;
  for (const auto& tok : text.tokens())
    if (std::find(lsde::kFirstPersonPronouns.begin(),
                  lsde::kFirstPersonPronouns.end(),
                  tok) != lsde::kFirstPersonPronouns.end())
      ++n;
  return n;
}

inline double score_disclosure(const ResponseText& text) {
  return std::min(static_cast<double>(count_first_person(text)) /
                      lsde::kPronounCap,
                  1.0);
}

/// Magnitude of the compound valence. Sentiment runs on the raw text so that
/// capitalization emphasis is preserved.
inline double score_emotion(const ResponseText& text,
                            const SentimentScorer& sentiment) {
  const double c = sentiment.compound(text.raw());
  if (!std::isfinite(c) || c < -1.0 || c > 1.0)
    throw ScoringError("sentiment compound outside [-1,1]: " +
                       std::to_string(c));
  return std::fabs(c);
}

inline std::pair<SpecificityFlags, double> score_specificity(
    const ResponseText& text, const SpecificityDetector& detector) {
  const auto flags = detector.detect(text.raw());
  return {flags, static_cast<double>(flags.total()) / 3.0};
}

inline double composite(double length, double disclosure, double emotion,
                        double specificity) {
  for (double v : {length, disclosure, emotion, specificity})
    if (!(v >= 0.0 && v <= 1.0))
      throw ContractViolation("LSDE dimension outside [0,1]: " +
                              std::to_string(v));
  return lsde::kWeightLength * length + lsde::kWeightDisclosure * disclosure +
         lsde::kWeightEmotion * emotion +
         lsde::kWeightSpecificity * specificity;
}

enum class ScoringMode { strict, lenient };

/// Result of scoring one response. In lenient mode a failing plug-in scores
/// its dimension as 0 and sets the matching flag.
struct LsdeResult {
  LsdeScore score;
  SpecificityFlags specificity_flags;
  bool emotion_failed = false;
  bool specificity_failed = false;

  bool degraded() const { return emotion_failed || specificity_failed; }
};

/// Scores responses with injected sentiment and specificity plug-ins. Calls
/// into plug-ins that are not concurrency-safe are serialized.
class LsdeScorer {
  template <typename F>
  auto guarded(bool safe, F&& f) const -> decltype(f()) {
    if (safe) return f();
    std::lock_guard lock(plugin_mutex_);
    return f();
  }

 public:
  LsdeScorer(std::shared_ptr<const SentimentScorer> sentiment,
             std::shared_ptr<const SpecificityDetector> detector,
             ScoringMode mode = ScoringMode::strict)
      : sentiment_(std::move(sentiment)),
        detector_(std::move(detector)),
        mode_(mode) {
    if (!sentiment_ || !detector_)
      throw ContractViolation("LsdeScorer needs a sentiment scorer and detector");
  }

  LsdeResult score(std::string_view raw) const {
    const ResponseText text{std::string(raw)};
    LsdeResult r;
    r.score.length = normalize_length(text);
    r.score.disclosure = score_disclosure(text);
    try {
      r.score.emotion = guarded(sentiment_->concurrency_safe(), [&] {
        return score_emotion(text, *sentiment_);
      });
    } catch (const std::exception& e) {
      if (mode_ == ScoringMode::strict)
        throw ScoringError(std::string("emotion scoring failed: ") + e.what());
      r.score.emotion = 0.0;
      r.emotion_failed = true;
    }
    try {
      auto [flags, s] = guarded(detector_->concurrency_safe(), [&] {
        return score_specificity(text, *detector_);
      });
      r.specificity_flags = flags;
      r.score.specificity = s;
    } catch (const std::exception& e) {
      if (mode_ == ScoringMode::strict)
        throw ScoringError(std::string("specificity scoring failed: ") +
                           e.what());
      r.score.specificity = 0.0;
      r.specificity_failed = true;
    }
    r.score.composite = composite(r.score.length, r.score.disclosure,
                                  r.score.emotion, r.score.specificity);
    return r;
  }

  ScoringMode mode() const { return mode_; }

 private:
  std::shared_ptr<const SentimentScorer> sentiment_;
  std::shared_ptr<const SpecificityDetector> detector_;
  ScoringMode mode_;
  mutable std::mutex plugin_mutex_;
};

/// Quality bucket of a composite score: [0,.2) [.2,.4) [.4,.6) [.6,.8) [.8,1].
inline int quality_bucket(double q) {
  if (q < 0.2) return 0;
  if (q < 0.4) return 1;
  if (q < 0.6) return 2;
  if (q < 0.8) return 3;
  return 4;
}

inline constexpr std::array<std::string_view, 5> kQualityBucketNames = {
    "very_low", "low", "medium", "high", "very_high"};

}  // namespace aura
