#pragma once

// Follow-up question generation: deterministic template pools and an
// LLM-backed generator that falls back to them.

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "aura/actions.hpp"
#include "aura/error.hpp"
#include "aura/llm.hpp"
#include "aura/text.hpp"

namespace aura {

struct ContextExchange {
  std::string question;
  std::string response;
};

inline constexpr std::size_t kMaxContextExchanges = 3;

struct QuestionDirective {
  ActionType action = ActionType::specification;
  std::vector<ContextExchange> context;  // oldest first, at most 3
  std::string topic_hint;
  std::uint64_t choice = 0;  // seeded pick among template phrasings
};

inline void validate(const QuestionDirective& d) {
  if (d.context.size() > kMaxContextExchanges)
    throw ContractViolation("question context holds at most 3 exchanges");
}

struct GeneratedQuestion {
  std::string text;
  bool fallback = false;  // generator failed; template phrasing used
  std::string error;
};

class QuestionGenerator {
 public:
  virtual ~QuestionGenerator() = default;
  virtual GeneratedQuestion generate(const QuestionDirective& directive) = 0;
};

namespace question_detail {

struct CampusDimension {
  std::string_view name;
  std::vector<std::string_view> cues;
};

/// Campus dimensions a topic probe can move to, with the words that signal
/// the respondent is already talking about them.
inline const std::vector<CampusDimension>& dimensions() {
  static const std::vector<CampusDimension> dims = {
      {"Greek life", {"greek", "fraternity", "sorority", "rush", "chapter"}},
      {"your classes", {"class", "classes", "course", "professor", "lecture",
                        "major", "exam", "grades", "homework", "lab"}},
      {"your social life", {"friends", "club", "clubs", "party", "roommate",
                            "social", "organization"}},
      {"diversity on campus", {"diversity", "diverse", "inclusion", "race",
                               "culture", "international", "identity"}},
      {"campus resources", {"library", "advising", "advisor", "dining",
                            "housing", "gym", "tutoring", "office"}},
      {"your well-being", {"stress", "stressed", "anxiety", "anxious",
                           "counseling", "mental", "lonely", "burnout",
                           "sleep"}},
  };
  return dims;
}

/// Index of the dimension the latest response talks about, or -1.
inline int detect_dimension(const std::vector<ContextExchange>& context) {
  if (context.empty()) return -1;
  const ResponseText text(context.back().response);
  const auto& dims = dimensions();
  for (std::size_t i = 0; i < dims.size(); ++i)
    for (const auto& tok : text.tokens())
      for (auto cue : dims[i].cues)
        if (tok == cue) return static_cast<int>(i);
  return -1;
}

inline const std::array<std::vector<std::string_view>, kNumActions>& pools() {
  static const std::array<std::vector<std::string_view>, kNumActions> p = {{
      // specification
      {"Could you give me a specific example of when that happened, and what "
       "the situation was like?",
       "Can you walk me through one particular moment that stands out, "
       "including where you were and who was involved?",
       "What is one concrete experience that shows what you mean, with a few "
       "details about when and where it happened?"},
      // elaboration
      {"Could you tell me more about why that matters to you and how it made "
       "you feel?",
       "Why do you think that is, and how has it shaped the way you feel "
       "about campus?",
       "Can you expand on that a little, especially the reasons and feelings "
       "behind it?"},
      // topic_probe; "{dim}" is replaced by the next campus dimension
      {"How would you describe your experience with {dim}, and what has "
       "stood out to you so far?",
       "Shifting a bit, how do you feel about {dim} here, and what would you "
       "change?"},
      // validation
      {"Thank you for sharing that, it really helps us understand your "
       "experience.",
       "I appreciate you being so open about this.",
       "That makes sense, and thank you for telling me."},
      // continuation
      {"Is there anything else on your mind?",
       "What else would you like to share?",
       "Please go on, I am listening."},
  }};
  return p;
}

inline const std::vector<std::string_view>& openings() {
  static const std::vector<std::string_view> o = {
      "Hi there! To start, how would you describe your overall experience on "
      "campus this year?",
      "Hello! What has your time on campus been like lately?",
      "Welcome! When you think about campus life, what comes to mind first?",
  };
  return o;
}

inline std::string replace_all(std::string s, std::string_view from,
                               std::string_view to) {
  for (auto pos = s.find(from); pos != std::string::npos;
       pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
  return s;
}

}  // namespace question_detail

/// Opening prompt that precedes the first scored exchange. It is not one of
/// the five follow-up intents.
inline std::string opening_question(std::uint64_t choice,
                                     std::string_view topic = {}) {
  if (!strip_if(topic, is_space).empty())
    return "Hi there! I'd love to hear about " + std::string(topic) +
           ". How has your experience with it been so far?";
  const auto& o = question_detail::openings();
  return std::string(o[choice % o.size()]);
}

/// Deterministic phrasing from per-action pools; the directive's `choice`
/// selects the variant.
class TemplateQuestionGenerator : public QuestionGenerator {
 public:
  GeneratedQuestion generate(const QuestionDirective& d) override {
    validate(d);
    return {render(d), false, {}};
  }

  static std::string render(const QuestionDirective& d) {
    if (d.action == ActionType::topic_probe) return topic_probe(d);
    const auto& pool = question_detail::pools()[index_of(d.action)];
    return std::string(pool[d.choice % pool.size()]);
  }

  /// Number of phrasings available for an action.
  static std::size_t pool_size(ActionType a) {
    return question_detail::pools()[index_of(a)].size();
  }

 private:
  static std::string topic_probe(const QuestionDirective& d) {
    const auto& dims = question_detail::dimensions();
    const int current = question_detail::detect_dimension(d.context);
    if (current == 0)
      return "Beyond Greek life, how would you describe the broader sense of "
             "community and belonging you feel on campus, like in classes, "
             "clubs, or other social settings?";
    // Move to a dimension other than the one just discussed.
    std::size_t next = d.choice % dims.size();
    if (static_cast<int>(next) == current) next = (next + 1) % dims.size();
    const auto& pool =
        question_detail::pools()[index_of(ActionType::topic_probe)];
    const std::string tmpl(pool[(d.choice / dims.size()) % pool.size()]);
    return question_detail::replace_all(tmpl, "{dim}", dims[next].name);
  }
};

/// Instruction block for each follow-up intent.
inline std::string_view action_instruction(ActionType a) {
  switch (a) {
    case ActionType::specification:
      return "Ask for a concrete example of what the respondent just "
             "described, with contextual details such as when, where, or who.";
    case ActionType::elaboration:
      return "Ask the respondent to go deeper into their reasoning or "
             "feelings about what they just described.";
    case ActionType::topic_probe:
      return "Move to a related dimension of campus life (academic, social, "
             "diversity, resources, or mental health) that connects to what "
             "they said.";
    case ActionType::validation:
      return "Acknowledge and thank the respondent for what they shared, "
             "under 20 words, without asking for new information.";
    case ActionType::continuation:
      return "Give a minimal prompt (5-10 words) inviting them to keep "
             "going, with no new direction.";
  }
  return {};
}

inline ChatRequest question_request(const QuestionDirective& d,
                                    double temperature) {
  ChatRequest req;
  req.temperature = temperature;
  std::string system =
      "You are a warm, neutral campus-climate survey interviewer. Write "
      "exactly one follow-up turn and nothing else.\n";
  system += action_instruction(d.action);
  if (!d.topic_hint.empty()) system += "\nSurvey topic: " + d.topic_hint;
  req.messages.push_back({"system", system});
  std::string convo;
  for (const auto& ex : d.context)
    convo += "Interviewer: " + ex.question + "\nRespondent: " + ex.response +
             "\n";
  if (convo.empty()) convo = "(no previous exchanges)\n";
  req.messages.push_back({"user", "Recent conversation:\n" + convo +
                                      "Write the next interviewer turn."});
  return req;
}

/// Sends action-specific instructions plus recent context to a chat model.
/// Any failure or empty reply falls back to the template phrasing and marks
/// the result.
class LlmQuestionGenerator : public QuestionGenerator {
 public:
  explicit LlmQuestionGenerator(std::shared_ptr<ChatClient> client,
                                double temperature = 0.7)
      : client_(std::move(client)), temperature_(temperature) {}

  GeneratedQuestion generate(const QuestionDirective& d) override {
    validate(d);
    try {
      auto text = strip_if(client_->complete(question_request(d, temperature_)),
                           is_space);
      if (text.size() >= 2 && text.front() == '"' && text.back() == '"')
        text = text.substr(1, text.size() - 2);
      if (text.empty()) throw LlmError("empty question from model");
      return {text, false, {}};
    } catch (const std::exception& e) {
      return {TemplateQuestionGenerator::render(d), true, e.what()};
    }
  }

 private:
  std::shared_ptr<ChatClient> client_;
  double temperature_;
};

}  // namespace aura
