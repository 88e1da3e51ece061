#pragma once

// Follow-up question intents and question classification.

#include <algorithm>
#include <array>
#include <cstddef>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "aura/error.hpp"
#include "aura/llm.hpp"
#include "aura/text.hpp"
#include "json.hpp"

namespace aura {

enum class ActionType {
  specification,
  elaboration,
  topic_probe,
  validation,
  continuation,
};

inline constexpr std::size_t kNumActions = 5;

/// Fixed order; also the greedy tie-break order.
inline constexpr std::array<ActionType, kNumActions> kAllActions = {
    ActionType::specification, ActionType::elaboration, ActionType::topic_probe,
    ActionType::validation, ActionType::continuation};

inline constexpr std::size_t index_of(ActionType a) {
  return static_cast<std::size_t>(a);
}

inline constexpr std::string_view to_string(ActionType a) {
  constexpr std::array<std::string_view, kNumActions> names = {
      "specification", "elaboration", "topic_probe", "validation",
      "continuation"};
  return names[index_of(a)];
}

inline std::optional<ActionType> try_parse_action(std::string_view name) {
  std::string norm = ascii_lower(name);
  std::replace(norm.begin(), norm.end(), ' ', '_');
  for (auto a : kAllActions)
    if (to_string(a) == norm) return a;
  return std::nullopt;
}

inline ActionType parse_action(std::string_view name) {
  if (auto a = try_parse_action(name)) return *a;
  throw DataError("unknown action type '" + std::string(name) + "'");
}

struct IntentLabel {
  ActionType primary = ActionType::specification;
  std::set<ActionType> secondary;
  double confidence = 1.0;
  std::string rationale;

  friend bool operator==(const IntentLabel&, const IntentLabel&) = default;
};

inline void validate(const IntentLabel& label) {
  if (label.secondary.count(label.primary))
    throw ContractViolation("primary intent repeated among secondary intents");
  if (!(label.confidence >= 0.0 && label.confidence <= 1.0))
    throw ContractViolation("intent confidence outside [0,1]");
}

/// One line of the labeled-question file.
struct LabeledQuestion {
  std::string question;
  IntentLabel label;
  friend bool operator==(const LabeledQuestion&,
                         const LabeledQuestion&) = default;
};

inline nlohmann::json to_json(const LabeledQuestion& q) {
  nlohmann::json secondary = nlohmann::json::array();
  for (auto a : q.label.secondary) secondary.push_back(std::string(to_string(a)));
  nlohmann::json j = {{"question", q.question},
                      {"primary", std::string(to_string(q.label.primary))},
                      {"secondary", secondary},
                      {"confidence", q.label.confidence}};
  if (!q.label.rationale.empty()) j["rationale"] = q.label.rationale;
  return j;
}

inline LabeledQuestion labeled_question_from_json(const nlohmann::json& j) {
  LabeledQuestion q;
  q.question = j.at("question").get<std::string>();
  q.label.primary = parse_action(j.at("primary").get<std::string>());
  if (j.contains("secondary"))
    for (const auto& s : j.at("secondary"))
      q.label.secondary.insert(parse_action(s.get<std::string>()));
  q.label.confidence = j.value("confidence", 1.0);
  q.label.rationale = j.value("rationale", std::string{});
  validate(q.label);
  return q;
}

inline std::vector<LabeledQuestion> read_labeled_questions(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open labeled-question file: " + path);
  std::vector<LabeledQuestion> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (strip_if(line, is_space).empty()) continue;
    try {
      out.push_back(labeled_question_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw DataError(e.what(), lineno);
    }
  }
  return out;
}

inline void write_labeled_questions(const std::string& path,
                                    const std::vector<LabeledQuestion>& qs) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write labeled-question file: " + path);
  for (const auto& q : qs) out << to_json(q).dump() << '\n';
}

class IntentClassifier {
 public:
  virtual ~IntentClassifier() = default;
  virtual IntentLabel classify(std::string_view question) const = 0;
};

/// Deterministic keyword rules. Used offline and in tests; always yields a
/// primary intent.
class KeywordIntentClassifier : public IntentClassifier {
 public:
  IntentLabel classify(std::string_view question) const override {
    if (strip_if(question, is_space).empty())
      throw ContractViolation("cannot classify an empty question");
    const std::string q = " " + normalized(question) + " ";
    std::vector<ActionType> hits;
    auto any = [&](std::initializer_list<const char*> cues) {
      return std::any_of(cues.begin(), cues.end(), [&](const char* c) {
        return q.find(c) != std::string::npos;
      });
    };
    // Gratitude without a follow-up request is pure acknowledgment.
    if (any({" thank", " thanks ", " appreciate ", " valuable ", " glad you ",
             " i hear you ", " that makes sense ", " understandable "}))
      hits.push_back(ActionType::validation);
    if (any({" anything else ", " go on ", " what else ", " carry on ",
             " keep going ", " continue "}))
      hits.push_back(ActionType::continuation);
    if (any({" specific ", " specifically ", " example ", " instance ",
             " particular ", " concrete ", " satisfied ", " rate "}))
      hits.push_back(ActionType::specification);
    if (any({" tell me more ", " expand ", " why ", " more about ",
             " elaborate ", " deeper ", " explain "}))
      hits.push_back(ActionType::elaboration);

    IntentLabel label;
    label.confidence = 0.6;
    if (hits.empty()) {
      label.primary = ActionType::topic_probe;
      label.rationale = "no taxonomy cue; treated as a new-topic prompt";
      return label;
    }
    // A question that also asks for something outranks the acknowledgment.
    auto primary_it = hits.begin();
    if (hits.front() == ActionType::validation && hits.size() > 1 &&
        question.find('?') != std::string_view::npos)
      primary_it = std::next(hits.begin());
    label.primary = *primary_it;
    for (auto a : hits)
      if (a != label.primary) label.secondary.insert(a);
    label.rationale = "keyword cue for " + std::string(to_string(label.primary));
    return label;
  }

 private:
  static std::string normalized(std::string_view text) {
    std::string out;
    for (const auto& piece : split_whitespace(text)) {
      auto w = ascii_lower(strip_if(piece, is_word_punct));
      if (w.empty()) continue;
      if (!out.empty()) out.push_back(' ');
      out += w;
    }
    return out;
  }
};

/// Best-effort classification prompt. It defines the five categories and
/// requests a JSON record with primary/secondary intents, confidence and a
/// short reasoning string.
inline constexpr std::string_view kClassificationPrompt =
    "You label survey chatbot questions by communicative intent.\n"
    "Categories:\n"
    "- specification: requests concrete examples, particular cases or "
    "details\n"
    "- elaboration: asks the respondent to expand on the current topic, "
    "reasoning or feelings\n"
    "- topic_probe: introduces a new or related dimension of campus life\n"
    "- validation: acknowledges or thanks the respondent without requesting "
    "new information\n"
    "- continuation: open invitation to keep going without a direction\n"
    "The primary intent is the dominant function of the question; list any "
    "other functions as secondary.\n"
    "Reply with only a JSON object: {\"primary\": <category>, \"secondary\": "
    "[<category>...], \"confidence\": <0..1>, \"reasoning\": <one sentence>}.";

inline IntentLabel parse_intent_reply(const std::string& reply) {
  auto body = reply;
  // Tolerate fenced replies.
  if (const auto b = body.find('{'), e = body.rfind('}');
      b != std::string::npos && e != std::string::npos && e > b)
    body = body.substr(b, e - b + 1);
  const auto j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw ClassificationError("classifier reply is not a JSON object", reply);
  try {
    IntentLabel label;
    const auto primary = try_parse_action(j.at("primary").get<std::string>());
    if (!primary)
      throw ClassificationError("unknown primary intent in reply", reply);
    label.primary = *primary;
    if (j.contains("secondary") && j.at("secondary").is_array())
      for (const auto& s : j.at("secondary"))
        if (auto a = try_parse_action(s.get<std::string>());
            a && *a != label.primary)
          label.secondary.insert(*a);
    label.confidence = std::clamp(j.value("confidence", 0.0), 0.0, 1.0);
    label.rationale = j.value("reasoning", std::string{});
    return label;
  } catch (const nlohmann::json::exception& e) {
    throw ClassificationError(std::string("malformed classifier reply: ") +
                                  e.what(),
                              reply);
  }
}

class LlmIntentClassifier : public IntentClassifier {
 public:
  explicit LlmIntentClassifier(std::shared_ptr<ChatClient> client,
                               double temperature = 0.0)
      : client_(std::move(client)), temperature_(temperature) {}

  IntentLabel classify(std::string_view question) const override {
    if (strip_if(question, is_space).empty())
      throw ContractViolation("cannot classify an empty question");
    ChatRequest req;
    req.temperature = temperature_;
    req.json_response = true;
    req.messages = {{"system", std::string(kClassificationPrompt)},
                    {"user", "Question: " + std::string(question)}};
    return parse_intent_reply(client_->complete(req));
  }

 private:
  std::shared_ptr<ChatClient> client_;
  double temperature_;
};

inline IntentLabel classify_question(std::string_view question,
                                     const IntentClassifier& classifier) {
  return classifier.classify(question);
}

struct ActionShare {
  std::size_t count = 0;
  double fraction = 0.0;
};

/// Count and fraction per primary intent; empty input gives an empty map.
inline std::map<ActionType, ActionShare> distribution(
    const std::vector<IntentLabel>& labels) {
  std::map<ActionType, ActionShare> out;
  if (labels.empty()) return out;
  for (const auto& l : labels) ++out[l.primary].count;
  for (auto& [a, share] : out)
    share.fraction =
        static_cast<double>(share.count) / static_cast<double>(labels.size());
  return out;
}

}  // namespace aura
