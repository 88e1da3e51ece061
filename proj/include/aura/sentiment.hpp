#pragma once

// Lexicon-based compound valence scorer following the published VADER rule
// set (v3.3.2): booster/dampener words, negation windows, ALL-CAPS emphasis,
// "but" contrast, "least", special idioms, punctuation emphasis, and emoji
// descriptions. Known divergence: case folding and the is-upper test are
// ASCII-only; the lexicons are ASCII apart from two emoticons.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "aura/error.hpp"
#include "aura/text.hpp"

namespace aura {

/// Produces a compound valence in [-1, 1] for raw text.
class SentimentScorer {
 public:
  virtual ~SentimentScorer() = default;
  virtual double compound(std::string_view text) const = 0;
  /// False when the scorer must not be called from several threads at once.
  virtual bool concurrency_safe() const { return true; }
};

namespace vader_detail {

inline constexpr double kBoostIncr = 0.293;
inline constexpr double kBoostDecr = -0.293;
inline constexpr double kCapsIncr = 0.733;
inline constexpr double kNegScalar = -0.74;

inline const std::vector<std::string>& negate_words() {
  static const std::vector<std::string> words = {
      "aint", "arent", "cannot", "cant", "couldnt", "darent", "didnt",
      "doesnt", "ain't", "aren't", "can't", "couldn't", "daren't", "didn't",
      "doesn't", "dont", "hadnt", "hasnt", "havent", "isnt", "mightnt",
      "mustnt", "neither", "don't", "hadn't", "hasn't", "haven't", "isn't",
      "mightn't", "mustn't", "neednt", "needn't", "never", "none", "nope",
      "nor", "not", "nothing", "nowhere", "oughtnt", "shant", "shouldnt",
      "uhuh", "wasnt", "werent", "oughtn't", "shan't", "shouldn't", "uh-uh",
      "wasn't", "weren't", "without", "wont", "wouldnt", "won't", "wouldn't",
      "rarely", "seldom", "despite"};
  return words;
}

inline const std::unordered_map<std::string, double>& booster_dict() {
  static const std::unordered_map<std::string, double> dict = [] {
    std::unordered_map<std::string, double> d;
    for (const char* w :
         {"absolutely", "amazingly", "awfully", "completely", "considerable",
          "considerably", "decidedly", "deeply", "effing", "enormous",
          "enormously", "entirely", "especially", "exceptional",
          "exceptionally", "extreme", "extremely", "fabulously", "flipping",
          "flippin", "frackin", "fracking", "fricking", "frickin", "frigging",
          "friggin", "fully", "fuckin", "fucking", "fuggin", "fugging",
          "greatly", "hella", "highly", "hugely", "incredible", "incredibly",
          "intensely", "major", "majorly", "more", "most", "particularly",
          "purely", "quite", "really", "remarkably", "so", "substantially",
          "thoroughly", "total", "totally", "tremendous", "tremendously",
          "uber", "unbelievably", "unusually", "utter", "utterly", "very"})
      d[w] = kBoostIncr;
    for (const char* w :
         {"almost", "barely", "hardly", "just enough", "kind of", "kinda",
          "kindof", "kind-of", "less", "little", "marginal", "marginally",
          "occasional", "occasionally", "partly", "scarce", "scarcely",
          "slight", "slightly", "somewhat", "sort of", "sorta", "sortof",
          "sort-of"})
      d[w] = kBoostDecr;
    return d;
  }();
  return dict;
}

inline const std::unordered_map<std::string, double>& special_cases() {
  static const std::unordered_map<std::string, double> dict = {
      {"the shit", 3},      {"the bomb", 3},      {"bad ass", 1.5},
      {"badass", 1.5},      {"bus stop", 0.0},    {"yeah right", -2},
      {"kiss of death", -1.5}, {"to die for", 3}, {"beating heart", 3.5}};
  return dict;
}

inline bool contains(const std::vector<std::string>& v, const std::string& w) {
  return std::find(v.begin(), v.end(), w) != v.end();
}

inline bool negated_word(const std::string& lower_word) {
  return contains(negate_words(), lower_word) ||
         lower_word.find("n't") != std::string::npos;
}

/// Python's str.isupper() restricted to ASCII letters.
inline bool is_upper(std::string_view w) {
  bool has_upper = false;
  for (char c : w) {
    if (c >= 'a' && c <= 'z') return false;
    if (c >= 'A' && c <= 'Z') has_upper = true;
  }
  return has_upper;
}

inline bool allcap_differential(const std::vector<std::string>& words) {
  std::size_t caps = 0;
  for (const auto& w : words)
    if (is_upper(w)) ++caps;
  const std::size_t diff = words.size() - caps;
  return diff > 0 && diff < words.size();
}

inline double scalar_inc_dec(const std::string& word, double valence,
                             bool is_cap_diff) {
  const auto& boosters = booster_dict();
  const auto it = boosters.find(ascii_lower(word));
  if (it == boosters.end()) return 0.0;
  double scalar = it->second;
  if (valence < 0) scalar *= -1;
  if (is_upper(word) && is_cap_diff) {
    if (valence > 0)
      scalar += kCapsIncr;
    else
      scalar -= kCapsIncr;
  }
  return scalar;
}

inline std::string strip_punc_if_word(const std::string& token) {
  auto stripped = strip_if(token, is_ascii_punct);
  if (utf8::length(stripped) <= 2) return token;
  return stripped;
}

}  // namespace vader_detail

class VaderSentimentScorer : public SentimentScorer {
 public:
  using Lexicon = std::unordered_map<std::string, double>;
  using EmojiLexicon = std::unordered_map<std::string, std::string>;

  VaderSentimentScorer(Lexicon lexicon, EmojiLexicon emojis = {})
      : lexicon_(std::move(lexicon)), emojis_(std::move(emojis)) {}

  /// Lexicon format: `token<TAB>mean_valence[<TAB>...]` per line.
  static Lexicon load_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open sentiment lexicon: " + path);
    Lexicon lex;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto trimmed = strip_if(line, is_space);
      if (trimmed.empty()) continue;
      const auto tab = trimmed.find('\t');
      if (tab == std::string::npos)
        throw DataError("expected token<TAB>valence", lineno);
      const auto rest = trimmed.substr(tab + 1);
      const auto value = rest.substr(0, rest.find('\t'));
      try {
        std::size_t used = 0;
        lex[trimmed.substr(0, tab)] = std::stod(value, &used);
      } catch (const std::exception&) {
        throw DataError("bad valence '" + value + "'", lineno);
      }
    }
    return lex;
  }

  /// Emoji format: `emoji<TAB>description` per line.
  static EmojiLexicon load_emoji_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open emoji lexicon: " + path);
    EmojiLexicon lex;
    std::string line;
    while (std::getline(in, line)) {
      const auto trimmed = strip_if(line, is_space);
      const auto tab = trimmed.find('\t');
      if (tab == std::string::npos) continue;
      const auto rest = trimmed.substr(tab + 1);
      lex[trimmed.substr(0, tab)] = rest.substr(0, rest.find('\t'));
    }
    return lex;
  }

  static std::shared_ptr<VaderSentimentScorer> from_files(
      const std::string& lexicon_path, const std::string& emoji_path = {}) {
    return std::make_shared<VaderSentimentScorer>(
        load_lexicon(lexicon_path),
        emoji_path.empty() ? EmojiLexicon{} : load_emoji_lexicon(emoji_path));
  }

  double compound(std::string_view raw) const override {
    const std::string text = replace_emojis(raw);
    std::vector<std::string> words;
    for (const auto& piece : split_whitespace(text))
      words.push_back(vader_detail::strip_punc_if_word(piece));
    std::vector<std::string> lower;
    lower.reserve(words.size());
    for (const auto& w : words) lower.push_back(ascii_lower(w));
    const bool cap_diff = vader_detail::allcap_differential(words);

    const auto& boosters = vader_detail::booster_dict();
    std::vector<double> sentiments;
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (boosters.count(lower[i])) {
        sentiments.push_back(0.0);
        continue;
      }
      if (i + 1 < words.size() && lower[i] == "kind" && lower[i + 1] == "of") {
        sentiments.push_back(0.0);
        continue;
      }
      sentiments.push_back(valence_at(words, lower, i, cap_diff));
    }
    but_check(lower, sentiments);
    return score(sentiments, text);
  }

  const Lexicon& lexicon() const { return lexicon_; }

 private:
  bool in_lexicon(const std::string& lower_word) const {
    return lexicon_.count(lower_word) != 0;
  }

  std::string replace_emojis(std::string_view raw) const {
    if (emojis_.empty()) return strip_if(raw, is_space);
    std::string out;
    bool prev_space = true;
    std::size_t pos = 0;
    while (pos < raw.size()) {
      const std::size_t start = pos;
      const char32_t cp = utf8::next(raw, pos);
      const std::string ch(raw.substr(start, pos - start));
      const auto it = emojis_.find(ch);
      if (it != emojis_.end()) {
        if (!prev_space) out.push_back(' ');
        out += it->second;
        prev_space = false;
      } else {
        out += ch;
        prev_space = cp == U' ';
      }
    }
    return strip_if(out, is_space);
  }

  double valence_at(const std::vector<std::string>& words,
                    const std::vector<std::string>& lower, std::size_t i,
                    bool cap_diff) const {
    using namespace vader_detail;
    const auto it = lexicon_.find(lower[i]);
    if (it == lexicon_.end()) return 0.0;
    const double base = it->second;
    double valence = base;
    const std::size_t n = words.size();

    // "no" directly before another lexicon word acts as a negator only.
    if (lower[i] == "no" && i != n - 1 && in_lexicon(lower[i + 1]))
      valence = 0.0;
    if ((i > 0 && lower[i - 1] == "no") || (i > 1 && lower[i - 2] == "no") ||
        (i > 2 && lower[i - 3] == "no" &&
         (lower[i - 1] == "or" || lower[i - 1] == "nor")))
      valence = base * kNegScalar;

    if (is_upper(words[i]) && cap_diff) {
      if (valence > 0)
        valence += kCapsIncr;
      else
        valence -= kCapsIncr;
    }

    for (std::size_t start = 0; start < 3; ++start) {
      if (i > start && !in_lexicon(lower[i - (start + 1)])) {
        double s = scalar_inc_dec(words[i - (start + 1)], valence, cap_diff);
        if (start == 1 && s != 0) s = s * 0.95;
        if (start == 2 && s != 0) s = s * 0.9;
        valence = valence + s;
        valence = negation_check(valence, lower, start, i);
        if (start == 2) valence = special_idioms_check(valence, lower, i);
      }
    }
    return least_check(valence, lower, i);
  }

  double least_check(double valence, const std::vector<std::string>& lower,
                     std::size_t i) const {
    if (i > 1 && !in_lexicon(lower[i - 1]) && lower[i - 1] == "least") {
      if (lower[i - 2] != "at" && lower[i - 2] != "very")
        valence = valence * vader_detail::kNegScalar;
    } else if (i > 0 && !in_lexicon(lower[i - 1]) && lower[i - 1] == "least") {
      valence = valence * vader_detail::kNegScalar;
    }
    return valence;
  }

  static double negation_check(double valence,
                               const std::vector<std::string>& lower,
                               std::size_t start, std::size_t i) {
    using vader_detail::kNegScalar;
    using vader_detail::negated_word;
    if (start == 0) {
      if (negated_word(lower[i - 1])) valence = valence * kNegScalar;
    } else if (start == 1) {
      if (lower[i - 2] == "never" &&
          (lower[i - 1] == "so" || lower[i - 1] == "this")) {
        valence = valence * 1.25;
      } else if (lower[i - 2] == "without" && lower[i - 1] == "doubt") {
      } else if (negated_word(lower[i - 2])) {
        valence = valence * kNegScalar;
      }
    } else {
      // Operator precedence mirrors the reference: (A and (B or C)) or (D or E).
      if ((lower[i - 3] == "never" &&
           (lower[i - 2] == "so" || lower[i - 2] == "this")) ||
          (lower[i - 1] == "so" || lower[i - 1] == "this")) {
        valence = valence * 1.25;
      } else if (lower[i - 3] == "without" &&
                 (lower[i - 2] == "doubt" || lower[i - 1] == "doubt")) {
      } else if (negated_word(lower[i - 3])) {
        valence = valence * kNegScalar;
      }
    }
    return valence;
  }

  static double special_idioms_check(double valence,
                                     const std::vector<std::string>& lower,
                                     std::size_t i) {
    const auto& special = vader_detail::special_cases();
    const auto& boosters = vader_detail::booster_dict();
    const std::string onezero = lower[i - 1] + " " + lower[i];
    const std::string twoonezero =
        lower[i - 2] + " " + lower[i - 1] + " " + lower[i];
    const std::string twoone = lower[i - 2] + " " + lower[i - 1];
    const std::string threetwoone =
        lower[i - 3] + " " + lower[i - 2] + " " + lower[i - 1];
    const std::string threetwo = lower[i - 3] + " " + lower[i - 2];
    for (const auto* seq :
         {&onezero, &twoonezero, &twoone, &threetwoone, &threetwo}) {
      const auto it = special.find(*seq);
      if (it != special.end()) {
        valence = it->second;
        break;
      }
    }
    if (lower.size() - 1 > i) {
      const auto it = special.find(lower[i] + " " + lower[i + 1]);
      if (it != special.end()) valence = it->second;
    }
    if (lower.size() - 1 > i + 1) {
      const auto it =
          special.find(lower[i] + " " + lower[i + 1] + " " + lower[i + 2]);
      if (it != special.end()) valence = it->second;
    }
    for (const auto* gram : {&threetwoone, &threetwo, &twoone}) {
      const auto it = boosters.find(*gram);
      if (it != boosters.end()) valence = valence + it->second;
    }
    return valence;
  }

  // Reproduces the reference behaviour exactly, including its lookup of each
  // value's first occurrence (which matters when equal scores repeat).
  static void but_check(const std::vector<std::string>& lower,
                        std::vector<double>& sentiments) {
    const auto but = std::find(lower.begin(), lower.end(), "but");
    if (but == lower.end()) return;
    const auto bi = static_cast<std::size_t>(but - lower.begin());
    for (std::size_t k = 0; k < sentiments.size(); ++k) {
      const double s = sentiments[k];
      const auto si = static_cast<std::size_t>(
          std::find(sentiments.begin(), sentiments.end(), s) -
          sentiments.begin());
      if (si < bi)
        sentiments[si] = s * 0.5;
      else if (si > bi)
        sentiments[si] = s * 1.5;
    }
  }

  static double punctuation_emphasis(std::string_view text) {
    const auto ep = std::min<std::ptrdiff_t>(
        std::count(text.begin(), text.end(), '!'), 4);
    const double ep_amp = static_cast<double>(ep) * 0.292;
    const auto qm = std::count(text.begin(), text.end(), '?');
    double qm_amp = 0;
    if (qm > 1) qm_amp = qm <= 3 ? static_cast<double>(qm) * 0.18 : 0.96;
    return ep_amp + qm_amp;
  }

  static double normalize(double score, double alpha = 15) {
    const double norm = score / std::sqrt(score * score + alpha);
    return std::clamp(norm, -1.0, 1.0);
  }

  static double score(const std::vector<double>& sentiments,
                      std::string_view text) {
    if (sentiments.empty()) return 0.0;
    double sum = 0.0;
    for (double s : sentiments) sum += s;
    const double amp = punctuation_emphasis(text);
    if (sum > 0)
      sum += amp;
    else if (sum < 0)
      sum -= amp;
    return normalize(sum);
  }

  Lexicon lexicon_;
  EmojiLexicon emojis_;
};

/// Returns pinned compounds for known texts; everything else scores 0.
class FixtureSentimentScorer : public SentimentScorer {
 public:
  explicit FixtureSentimentScorer(
      std::unordered_map<std::string, double> values = {}, bool fail = false)
      : values_(std::move(values)), fail_(fail) {}

  double compound(std::string_view text) const override {
    if (fail_) throw ScoringError("fixture sentiment scorer configured to fail");
    const auto it = values_.find(std::string(text));
    return it == values_.end() ? 0.0 : it->second;
  }

 private:
  std::unordered_map<std::string, double> values_;
  bool fail_;
};

}  // namespace aura
