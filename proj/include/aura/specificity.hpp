#pragma once

// Episodic-detail detection: does a response mention who/what, when, where.

#include <cctype>
#include <fstream>
#include <memory>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "aura/error.hpp"
#include "aura/text.hpp"

namespace aura {

struct SpecificityFlags {
  bool entities = false;
  bool temporal = false;
  bool spatial = false;

  int total() const {
    return static_cast<int>(entities) + static_cast<int>(temporal) +
           static_cast<int>(spatial);
  }
  friend bool operator==(const SpecificityFlags&,
                         const SpecificityFlags&) = default;
};

class SpecificityDetector {
 public:
  virtual ~SpecificityDetector() = default;
  virtual SpecificityFlags detect(std::string_view text) const = 0;
  virtual bool concurrency_safe() const { return true; }
};

/// Word lists backing the rule detector. Each list is a plain file with one
/// (lowercase) entry per line when loaded from disk.
struct SpecificityLexicons {
  std::set<std::string> calendar;       // weekday and month names
  std::set<std::string> relative_time;  // yesterday, tonight, ago, ...
  std::set<std::string> time_units;     // words that follow last/next/this
  std::set<std::string> places;         // hall, campus, library, ...

  static SpecificityLexicons defaults() {
    SpecificityLexicons lx;
    lx.calendar = {"monday",   "tuesday",  "wednesday", "thursday", "friday",
                   "saturday", "sunday",   "january",   "february", "march",
                   "april",    "may",      "june",      "july",     "august",
                   "september", "october", "november",  "december"};
    lx.relative_time = {"yesterday", "today",    "tonight",   "tomorrow",
                        "ago",       "recently", "weekend",   "midnight",
                        "noon",      "overnight", "earlier",  "lately"};
    lx.time_units = {"week",     "weeks",   "month",  "months", "year",
                     "years",    "semester", "term",  "night",  "weekend",
                     "fall",     "spring",  "summer", "winter", "quarter",
                     "time",    "day",    "morning", "evening",
                     "monday",   "tuesday", "wednesday", "thursday",
                     "friday",   "saturday", "sunday"};
    lx.places = {"hall",       "campus",  "library",  "dorm",     "building",
                 "room",       "classroom", "lab",    "gym",      "cafeteria",
                 "office",     "center",  "union",    "quad",     "stadium",
                 "apartment",  "residence", "lecture", "auditorium", "dining"};
    return lx;
  }

  static std::set<std::string> load_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open word list: " + path);
    std::set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
      auto w = ascii_lower(strip_if(line, is_space));
      if (!w.empty() && w[0] != '#') out.insert(std::move(w));
    }
    return out;
  }
};

/// Deterministic detector:
///  temporal  weekday/month names, relative-time words, last/next/this + unit,
///            four-digit years, clock times;
///  spatial   in/at/on/near (optionally + determiner) followed by a
///            capitalized word or a place word;
///  entities  capitalized words that do not start a sentence, or course codes
///            such as "EECS 280" / "CS101".
class RuleSpecificityDetector : public SpecificityDetector {
 public:
  explicit RuleSpecificityDetector(
      SpecificityLexicons lexicons = SpecificityLexicons::defaults())
      : lx_(std::move(lexicons)) {}

  SpecificityFlags detect(std::string_view text) const override {
    const auto words = words_of(text);
    SpecificityFlags flags;
    flags.temporal = has_temporal(words);
    flags.spatial = has_spatial(words);
    flags.entities = has_entity(words);
    return flags;
  }

 private:
  struct Word {
    std::string text;   // punctuation stripped, original case
    std::string lower;
    bool sentence_start = false;
  };

  static std::vector<Word> words_of(std::string_view text) {
    std::vector<Word> out;
    bool next_starts = true;
    for (const auto& piece : split_whitespace(text)) {
      Word w;
      w.text = strip_if(piece, is_word_punct);
      const auto last = strip_if(piece, [](char32_t c) {
        return c == U'"' || c == U')' || c == 0x201D || c == 0x2019 ||
               c == U'\'';
      });
      const bool ends_sentence =
          !last.empty() && (last.back() == '.' || last.back() == '!' ||
                            last.back() == '?');
      if (w.text.empty()) {
        if (ends_sentence) next_starts = true;
        continue;
      }
      w.lower = ascii_lower(w.text);
      w.sentence_start = next_starts;
      next_starts = ends_sentence;
      out.push_back(std::move(w));
    }
    return out;
  }

  static bool capitalized(const std::string& w) {
    return !w.empty() && std::isupper(static_cast<unsigned char>(w[0]));
  }

  static bool is_first_person_i(const std::string& lower) {
    return lower == "i" || lower.rfind("i'", 0) == 0 ||
           lower.rfind("i\xE2\x80\x99", 0) == 0;
  }

  bool has_temporal(const std::vector<Word>& words) const {
    static const std::regex year(R"((19|20)\d\d(s)?)");
    static const std::regex clock(
        R"(\d{1,2}(:\d\d)?(am|pm|a\.m|p\.m)?|\d{1,2}:\d\d)");
    for (std::size_t i = 0; i < words.size(); ++i) {
      const auto& w = words[i];
      if (lx_.calendar.count(w.lower)) {
        // "may" and "march" are ordinary words unless capitalized mid-sentence.
        if ((w.lower == "may" || w.lower == "march") &&
            (!capitalized(w.text) || w.sentence_start))
          continue;
        return true;
      }
      if (lx_.relative_time.count(w.lower)) return true;
      if ((w.lower == "last" || w.lower == "next" || w.lower == "this") &&
          i + 1 < words.size() && lx_.time_units.count(words[i + 1].lower))
        return true;
      if (std::regex_match(w.lower, year)) return true;
      if (w.lower.find_first_of("0123456789") != std::string::npos &&
          (w.lower.find(':') != std::string::npos ||
           w.lower.find("am") != std::string::npos ||
           w.lower.find("pm") != std::string::npos) &&
          std::regex_match(w.lower, clock))
        return true;
      if ((w.lower == "am" || w.lower == "pm" || w.lower == "a.m" ||
           w.lower == "p.m" || w.lower == "o'clock") &&
          i > 0 && std::regex_match(words[i - 1].lower, clock))
        return true;
    }
    return false;
  }

  bool has_spatial(const std::vector<Word>& words) const {
    static const std::set<std::string> preps = {"in", "at", "on", "near"};
    static const std::set<std::string> determiners = {"the", "a", "an", "my",
                                                      "our", "their", "his",
                                                      "her", "this", "that"};
    for (std::size_t i = 0; i + 1 < words.size(); ++i) {
      if (!preps.count(words[i].lower)) continue;
      std::size_t j = i + 1;
      if (determiners.count(words[j].lower) && j + 1 < words.size()) ++j;
      // Allow one modifier before the place noun ("in the main library").
      for (std::size_t k = j; k < words.size() && k <= j + 1; ++k) {
        const auto& cand = words[k];
        if (lx_.places.count(cand.lower)) return true;
        if (k == j && capitalized(cand.text) &&
            !is_first_person_i(cand.lower) && !lx_.calendar.count(cand.lower))
          return true;
      }
    }
    return false;
  }

  bool has_entity(const std::vector<Word>& words) const {
    static const std::regex code(R"([A-Za-z]{2,5}\d{2,4}[A-Za-z]?)");
    static const std::regex dept(R"([A-Z]{2,5})");
    static const std::regex number(R"(\d{3,4}[A-Za-z]?)");
    for (std::size_t i = 0; i < words.size(); ++i) {
      const auto& w = words[i];
      if (std::regex_match(w.text, code)) return true;
      if (i + 1 < words.size() && std::regex_match(w.text, dept) &&
          std::regex_match(words[i + 1].text, number))
        return true;
      if (!w.sentence_start && capitalized(w.text) &&
          !is_first_person_i(w.lower))
        return true;
    }
    return false;
  }

  SpecificityLexicons lx_;
};

/// Returns fixed flags, or throws when configured to fail.
class FixedSpecificityDetector : public SpecificityDetector {
 public:
  explicit FixedSpecificityDetector(SpecificityFlags flags, bool fail = false)
      : flags_(flags), fail_(fail) {}
  SpecificityFlags detect(std::string_view) const override {
    if (fail_) throw ScoringError("specificity detector configured to fail");
    return flags_;
  }

 private:
  SpecificityFlags flags_;
  bool fail_;
};

}  // namespace aura
