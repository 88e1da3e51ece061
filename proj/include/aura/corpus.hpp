#pragma once

// Historical conversation logs: loading, cleaning, exchange-pair extraction
// and descriptive statistics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "aura/actions.hpp"
#include "aura/error.hpp"
#include "aura/lsde.hpp"
#include "aura/policy.hpp"
#include "aura/states.hpp"
#include "aura/stats.hpp"
#include "aura/text.hpp"
#include "json.hpp"

namespace aura {

/// One chatbot question followed by one user response.
struct RawExchangeRecord {
  std::string conversation_id;
  std::int64_t turn_index = 0;
  std::string chatbot_text;
  std::string user_text;

  friend bool operator==(const RawExchangeRecord&,
                         const RawExchangeRecord&) = default;
};

namespace corpus_detail {

inline std::string field_text(const nlohmann::json& j, const char* key,
                              std::size_t line) {
  if (!j.contains(key) || j.at(key).is_null()) return {};
  const auto& v = j.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float() && std::isnan(v.get<double>())) return "nan";
  throw DataError(std::string("field '") + key + "' must be a string or null",
                  line);
}

inline bool has_word(const std::string& text) {
  const ResponseText rt(text);
  for (const auto& tok : rt.tokens()) {
    for (char32_t cp : utf8::decode(tok)) {
      if ((cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') ||
          (cp >= 0xC0 && cp <= 0x24F) || (cp >= 0x370 && cp <= 0x1FFF) ||
          (cp >= 0x3040 && cp <= 0x9FFF) || (cp >= 0xAC00 && cp <= 0xD7AF))
        return true;
    }
  }
  return false;
}

}  // namespace corpus_detail

/// Placeholder values treated as missing: "", nan, n/a, null (trimmed,
/// case-insensitive).
inline bool is_placeholder(const std::string& text) {
  const auto t = ascii_lower(strip_if(text, is_space));
  return t.empty() || t == "nan" || t == "n/a" || t == "null";
}

inline RawExchangeRecord record_from_json(const nlohmann::json& j,
                                          std::size_t line) {
  if (!j.is_object()) throw DataError("record must be a JSON object", line);
  RawExchangeRecord r;
  if (!j.contains("conversation_id"))
    throw DataError("missing conversation_id", line);
  const auto& id = j.at("conversation_id");
  if (id.is_string())
    r.conversation_id = id.get<std::string>();
  else if (id.is_number_integer())
    r.conversation_id = std::to_string(id.get<std::int64_t>());
  else
    throw DataError("conversation_id must be a string or integer", line);
  if (!j.contains("turn") || !j.at("turn").is_number_integer())
    throw DataError("missing or non-integer turn", line);
  r.turn_index = j.at("turn").get<std::int64_t>();
  r.chatbot_text = corpus_detail::field_text(j, "chatbot", line);
  r.user_text = corpus_detail::field_text(j, "user", line);
  return r;
}

inline nlohmann::json to_json(const RawExchangeRecord& r) {
  return {{"conversation_id", r.conversation_id},
          {"turn", r.turn_index},
          {"chatbot", r.chatbot_text},
          {"user", r.user_text}};
}

/// Newline-delimited JSON records {conversation_id, turn, chatbot, user}.
/// Turns must strictly increase within a conversation.
inline std::vector<RawExchangeRecord> parse_records(std::istream& in) {
  std::vector<RawExchangeRecord> out;
  std::map<std::string, std::int64_t> last_turn;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (strip_if(line, is_space).empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw DataError("invalid JSON", lineno);
    auto r = record_from_json(j, lineno);
    const auto it = last_turn.find(r.conversation_id);
    if (it != last_turn.end() && r.turn_index <= it->second)
      throw DataError("turn " + std::to_string(r.turn_index) +
                          " does not increase within conversation " +
                          r.conversation_id,
                      lineno);
    last_turn[r.conversation_id] = r.turn_index;
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<RawExchangeRecord> load_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open conversation log: " + path);
  return parse_records(in);
}

inline void save_records(const std::string& path,
                         const std::vector<RawExchangeRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write conversation log: " + path);
  for (const auto& r : records) out << to_json(r).dump() << '\n';
}

/// Applies the cleaning rules, returning records ordered by
/// (conversation_id, turn):
///  1. drop records whose chatbot or user side is missing or a placeholder;
///  2. drop exact repeats of an earlier user response in the same
///     conversation;
///  3. keep only user responses containing at least one word.
inline std::vector<RawExchangeRecord> clean(
    const std::vector<RawExchangeRecord>& records) {
  std::vector<RawExchangeRecord> sorted = records;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) {
                     if (a.conversation_id != b.conversation_id)
                       return a.conversation_id < b.conversation_id;
                     return a.turn_index < b.turn_index;
                   });
  std::vector<RawExchangeRecord> out;
  std::map<std::string, std::set<std::string>> seen;
  for (const auto& r : sorted) {
    if (is_placeholder(r.chatbot_text) || is_placeholder(r.user_text)) continue;
    if (!corpus_detail::has_word(r.user_text)) continue;
    if (!seen[r.conversation_id].insert(r.user_text).second) continue;
    out.push_back(r);
  }
  return out;
}

/// Splits cleaned records into conversations, in record order.
inline std::vector<std::vector<RawExchangeRecord>> group_conversations(
    const std::vector<RawExchangeRecord>& records) {
  std::vector<std::vector<RawExchangeRecord>> out;
  for (const auto& r : records) {
    if (out.empty() || out.back().front().conversation_id != r.conversation_id)
      out.emplace_back();
    out.back().push_back(r);
  }
  return out;
}

/// One scored user response of the historical corpus.
struct ScoredResponse {
  RawExchangeRecord record;
  LsdeResult lsde;
  double quality = 0.0;
  QualityDelta delta;
  EngagementState state = EngagementState::low_stable;
  IntentLabel question_label;  // intent of the chatbot text preceding it
};

struct CorpusAnalysis {
  std::vector<std::vector<ScoredResponse>> conversations;
  std::vector<ExchangePair> pairs;
};

/// Scores every response, assigns states, labels the intervening questions
/// and links consecutive responses into exchange pairs.
inline CorpusAnalysis analyze(const std::vector<RawExchangeRecord>& cleaned,
                              const LsdeScorer& scorer,
                              const IntentClassifier& classifier) {
  CorpusAnalysis out;
  for (const auto& convo : group_conversations(cleaned)) {
    std::vector<ScoredResponse> scored;
    std::optional<double> prev;
    for (const auto& r : convo) {
      ScoredResponse sr;
      sr.record = r;
      sr.lsde = scorer.score(r.user_text);
      sr.quality = sr.lsde.score.composite;
      sr.delta = delta_q(sr.quality, prev);
      sr.state = assign_state(sr.quality, sr.delta);
      sr.question_label = classifier.classify(r.chatbot_text);
      prev = sr.quality;
      scored.push_back(std::move(sr));
    }
    for (std::size_t t = 1; t < scored.size(); ++t)
      out.pairs.push_back({scored[t - 1].state,
                           scored[t].question_label.primary,
                           scored[t - 1].quality, scored[t].quality});
    out.conversations.push_back(std::move(scored));
  }
  return out;
}

inline std::vector<ExchangePair> extract_pairs(
    const std::vector<RawExchangeRecord>& cleaned, const LsdeScorer& scorer,
    const IntentClassifier& classifier) {
  return analyze(cleaned, scorer, classifier).pairs;
}

struct CorpusStats {
  std::size_t n_conversations = 0;
  std::size_t n_valid_responses = 0;
  std::size_t n_pairs = 0;
  double mean_exchanges = 0.0;
  double sd_exchanges = 0.0;
  double median_exchanges = 0.0;
  std::size_t min_exchanges = 0;
  std::size_t max_exchanges = 0;
  double mean_response_words = 0.0;
  double sd_response_words = 0.0;
  double median_response_words = 0.0;
  std::size_t single_exchange_conversations = 0;
  double single_exchange_fraction = 0.0;

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

namespace corpus_detail {

/// Midpoint of the two central values for even counts.
inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace corpus_detail

inline CorpusStats corpus_stats(const std::vector<RawExchangeRecord>& cleaned) {
  CorpusStats s;
  const auto convos = group_conversations(cleaned);
  if (convos.empty()) return s;
  std::vector<double> lengths;
  std::vector<double> words;
  s.min_exchanges = convos.front().size();
  for (const auto& c : convos) {
    lengths.push_back(static_cast<double>(c.size()));
    s.min_exchanges = std::min(s.min_exchanges, c.size());
    s.max_exchanges = std::max(s.max_exchanges, c.size());
    if (c.size() == 1) ++s.single_exchange_conversations;
    for (const auto& r : c)
      words.push_back(
          static_cast<double>(ResponseText(r.user_text).word_count()));
  }
  s.n_conversations = convos.size();
  s.n_valid_responses = cleaned.size();
  s.n_pairs = s.n_valid_responses - s.n_conversations;
  s.mean_exchanges = stats::mean(lengths);
  s.sd_exchanges = stats::sd(lengths);
  s.median_exchanges = corpus_detail::median(lengths);
  s.mean_response_words = stats::mean(words);
  s.sd_response_words = stats::sd(words);
  s.median_response_words = corpus_detail::median(words);
  s.single_exchange_fraction = static_cast<double>(s.single_exchange_conversations) /
                               static_cast<double>(s.n_conversations);
  return s;
}

inline nlohmann::json to_json(const CorpusStats& s) {
  return {{"n_conversations", s.n_conversations},
          {"n_valid_responses", s.n_valid_responses},
          {"n_pairs", s.n_pairs},
          {"mean_exchanges", s.mean_exchanges},
          {"sd_exchanges", s.sd_exchanges},
          {"median_exchanges", s.median_exchanges},
          {"min_exchanges", s.min_exchanges},
          {"max_exchanges", s.max_exchanges},
          {"mean_response_words", s.mean_response_words},
          {"sd_response_words", s.sd_response_words},
          {"median_response_words", s.median_response_words},
          {"single_exchange_conversations", s.single_exchange_conversations},
          {"single_exchange_fraction", s.single_exchange_fraction}};
}

}  // namespace aura
