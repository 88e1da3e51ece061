#pragma once

// Live survey sessions: score each response, update the session's EV copy,
// pick the next follow-up intent and phrase it.

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aura/actions.hpp"
#include "aura/error.hpp"
#include "aura/lsde.hpp"
#include "aura/policy.hpp"
#include "aura/question.hpp"
#include "aura/random.hpp"
#include "aura/states.hpp"
#include "json.hpp"

namespace aura {

enum class SelectionMode { policy, baseline };

struct SessionConfig {
  int horizon = 15;
  double alpha = 0.3;
  EpsilonSchedule schedule = EpsilonSchedule::fixed(0.30);
  SelectionMode mode = SelectionMode::policy;
  BaselinePolicy baseline = BaselinePolicy();
  std::uint64_t seed = 0;
  std::string session_id;  // generated when empty
  std::string role;
  std::string topic;
};

inline void validate(const SessionConfig& c) {
  if (c.horizon < 1) throw ContractViolation("horizon must be >= 1");
  if (!(c.alpha > 0.0 && c.alpha <= 1.0))
    throw ContractViolation("learning rate must be in (0,1]");
}

enum class SessionStatus { active, completed, terminated };

inline std::string_view to_string(SessionStatus s) {
  switch (s) {
    case SessionStatus::active: return "active";
    case SessionStatus::completed: return "completed";
    case SessionStatus::terminated: return "terminated";
  }
  return "unknown";
}

struct EvUpdate {
  EngagementState state;
  ActionType action;
  double before;
  double after;
};

/// Telemetry for one exchange: the question asked at t, the response to it,
/// and what the engine did with it.
struct ExchangeRecord {
  int t = 0;
  std::string question;
  std::optional<ActionType> question_action;  // empty for the opening prompt
  bool question_fallback = false;
  std::string response;
  LsdeResult lsde;
  double quality = 0.0;
  double delta_q = 0.0;
  EngagementState state = EngagementState::low_stable;
  std::optional<double> reward;
  std::optional<EvUpdate> ev_update;
  double epsilon_effective = 0.0;
  bool explored = false;
  std::optional<ActionType> next_action;
  std::string next_question;
  bool next_question_fallback = false;
  std::string generator_error;
  std::optional<std::array<double, kNumActions>> baseline_weights;
};

inline nlohmann::json to_json(const ExchangeRecord& r) {
  nlohmann::json j;
  j["t"] = r.t;
  j["question"] = r.question;
  j["question_action"] = r.question_action
                             ? nlohmann::json(std::string(to_string(*r.question_action)))
                             : nlohmann::json(nullptr);
  j["question_fallback"] = r.question_fallback;
  j["response"] = r.response;
  j["lsde"] = {{"length", r.lsde.score.length},
               {"disclosure", r.lsde.score.disclosure},
               {"emotion", r.lsde.score.emotion},
               {"specificity", r.lsde.score.specificity},
               {"composite", r.lsde.score.composite},
               {"entities", r.lsde.specificity_flags.entities},
               {"temporal", r.lsde.specificity_flags.temporal},
               {"spatial", r.lsde.specificity_flags.spatial}};
  j["degraded"] = {{"emotion", r.lsde.emotion_failed},
                   {"specificity", r.lsde.specificity_failed}};
  j["quality"] = r.quality;
  j["delta_q"] = r.delta_q;
  j["state"] = std::string(to_string(r.state));
  j["reward"] = r.reward ? nlohmann::json(*r.reward) : nlohmann::json(nullptr);
  if (r.ev_update)
    j["ev_update"] = {{"state", std::string(to_string(r.ev_update->state))},
                      {"action", std::string(to_string(r.ev_update->action))},
                      {"before", r.ev_update->before},
                      {"after", r.ev_update->after}};
  else
    j["ev_update"] = nullptr;
  j["epsilon_effective"] = r.epsilon_effective;
  j["explored"] = r.explored;
  j["next_action"] = r.next_action
                         ? nlohmann::json(std::string(to_string(*r.next_action)))
                         : nlohmann::json(nullptr);
  j["next_question"] = r.next_question;
  j["next_question_fallback"] = r.next_question_fallback;
  if (!r.generator_error.empty()) j["generator_error"] = r.generator_error;
  if (r.baseline_weights)
    j["baseline_weights"] = *r.baseline_weights;
  return j;
}

class ConversationSession {
 public:
  const std::string& id() const { return id_; }
  const SessionConfig& config() const { return config_; }
  SessionStatus status() const { return status_; }
  /// Number of scored exchanges so far.
  int t() const { return static_cast<int>(exchanges_.size()); }
  const std::vector<ExchangeRecord>& exchanges() const { return exchanges_; }
  const std::string& opening_question() const { return opening_; }
  /// Question awaiting a response; empty once the session is over.
  const std::string& current_question() const { return question_; }
  std::optional<ActionType> current_action() const { return action_; }
  /// Session EV copy; null after end_session.
  const EvTable* ev_table() const { return ev_ ? &*ev_ : nullptr; }

 private:
  friend class Engine;

  std::string id_;
  SessionConfig config_;
  SessionStatus status_ = SessionStatus::active;
  std::vector<ExchangeRecord> exchanges_;
  std::optional<EvTable> ev_;
  RandomSource rng_;
  std::string opening_;
  std::string question_;
  std::optional<ActionType> action_;
  bool question_fallback_ = false;
  bool persisted_ = false;
};

struct SessionTranscript {
  std::string session_id;
  std::string role;
  std::string topic;
  std::uint64_t seed = 0;
  SessionStatus status = SessionStatus::active;
  std::string opening_question;
  std::vector<ExchangeRecord> exchanges;

  /// One JSON record per exchange.
  std::string to_jsonl() const {
    std::string out;
    for (const auto& e : exchanges) {
      auto j = to_json(e);
      j["session_id"] = session_id;
      out += j.dump() + '\n';
    }
    return out;
  }
};

inline SessionTranscript transcript_of(const ConversationSession& s) {
  return {s.id(),     s.config().role,         s.config().topic,
          s.config().seed, s.status(), s.opening_question(), s.exchanges()};
}

/// Effective epsilon at exchange t. Decay schedules hold their final value
/// past their own horizon.
inline double session_epsilon(const SessionConfig& c, int t) {
  if (c.schedule.kind() == EpsilonSchedule::Kind::linear_decay)
    return epsilon_at(c.schedule, std::min(t, c.schedule.horizon()));
  return epsilon_at(c.schedule, t, c.horizon);
}

class Engine {
 public:
  Engine(std::shared_ptr<const EvTable> prior,
         std::shared_ptr<const LsdeScorer> scorer,
         std::shared_ptr<QuestionGenerator> generator,
         std::string transcript_dir = {})
      : prior_(std::move(prior)),
        scorer_(std::move(scorer)),
        generator_(std::move(generator)),
        transcript_dir_(std::move(transcript_dir)) {
    if (!prior_) throw ConfigError("no prior EV table loaded");
    if (prior_->provenance() != TableProvenance::prior)
      throw ConfigError("engine needs a prior table, not a session copy");
    if (!scorer_ || !generator_)
      throw ConfigError("engine needs a scorer and a question generator");
  }

  const EvTable& prior() const { return *prior_; }
  const LsdeScorer& scorer() const { return *scorer_; }

  ConversationSession start_session(SessionConfig cfg) const {
    validate(cfg);
    ConversationSession s;
    if (cfg.session_id.empty()) cfg.session_id = next_id(cfg.seed);
    s.id_ = cfg.session_id;
    s.rng_ = RandomSource(cfg.seed);
    s.ev_ = fork_session(*prior_);
    s.opening_ = opening_question(derive_seed(cfg.seed, kOpeningStream),
                                  cfg.topic);
    s.question_ = s.opening_;
    s.config_ = std::move(cfg);
    return s;
  }

  /// One exchange: score Q_t; for t > 1 reward r = Q_t - Q_{t-1} updates
  /// EV(s_{t-1}, a_{t-1}); assign s_t; pick a_t; phrase it. At the horizon the
  /// response is scored and the session completes without a new question.
  const ExchangeRecord& step(ConversationSession& s,
                             std::string_view response) const {
    if (s.status_ != SessionStatus::active)
      throw SessionStateError("session " + s.id_ + " is " +
                              std::string(to_string(s.status_)));
    const SessionConfig& c = s.config_;
    ExchangeRecord rec;
    rec.t = s.t() + 1;
    rec.question = s.question_;
    rec.question_action = s.action_;
    rec.question_fallback = s.question_fallback_;
    rec.response = std::string(response);

    rec.lsde = scorer_->score(response);
    rec.quality = rec.lsde.score.composite;
    std::optional<double> prev;
    if (!s.exchanges_.empty()) prev = s.exchanges_.back().quality;
    const auto dq = delta_q(rec.quality, prev);
    rec.delta_q = dq.value;

    if (prev) {
      rec.reward = rec.quality - *prev;
      const auto& last = s.exchanges_.back();
      if (c.mode == SelectionMode::policy && last.next_action) {
        const double before = s.ev_->value(last.state, *last.next_action);
        const double after =
            update_ev(*s.ev_, last.state, *last.next_action, *rec.reward, c.alpha);
        rec.ev_update = EvUpdate{last.state, *last.next_action, before, after};
      }
    }

    rec.state = assign_state(rec.quality, dq);
    rec.epsilon_effective =
        c.mode == SelectionMode::policy ? session_epsilon(c, rec.t) : 0.0;

    if (rec.t >= c.horizon) {
      s.status_ = SessionStatus::completed;
      s.question_.clear();
      s.action_.reset();
      s.question_fallback_ = false;
    } else {
      if (c.mode == SelectionMode::policy) {
        const auto sel = select_action(*s.ev_, rec.state,
                                       rec.epsilon_effective, s.rng_);
        rec.next_action = sel.action;
        rec.explored = sel.explored;
      } else {
        rec.next_action = c.baseline.sample(s.rng_);
        rec.baseline_weights = c.baseline.weights();
      }
      QuestionDirective d;
      d.action = *rec.next_action;
      d.topic_hint = c.topic;
      d.choice = derive_seed(c.seed, kQuestionStream,
                             static_cast<std::uint64_t>(rec.t));
      const std::size_t keep = std::min<std::size_t>(kMaxContextExchanges - 1,
                                                     s.exchanges_.size());
      for (auto it = s.exchanges_.end() - static_cast<std::ptrdiff_t>(keep);
           it != s.exchanges_.end(); ++it)
        d.context.push_back({it->question, it->response});
      d.context.push_back({rec.question, rec.response});
      GeneratedQuestion q;
      try {
        q = generator_->generate(d);
      } catch (const std::exception& e) {
        q = {TemplateQuestionGenerator::render(d), true, e.what()};
      }
      rec.next_question = q.text;
      rec.next_question_fallback = q.fallback;
      rec.generator_error = q.error;
      s.question_ = q.text;
      s.action_ = rec.next_action;
      s.question_fallback_ = q.fallback;
    }
    s.exchanges_.push_back(std::move(rec));
    return s.exchanges_.back();
  }

  /// Terminates an active session, drops its EV copy and persists the
  /// transcript. Repeated calls return the same transcript.
  SessionTranscript end_session(ConversationSession& s) const {
    if (s.status_ == SessionStatus::active)
      s.status_ = SessionStatus::terminated;
    s.ev_.reset();
    s.question_.clear();
    s.action_.reset();
    auto transcript = transcript_of(s);
    if (!transcript_dir_.empty() && !s.persisted_) {
      std::filesystem::create_directories(transcript_dir_);
      const auto path =
          std::filesystem::path(transcript_dir_) / (s.id_ + ".jsonl");
      std::ofstream out(path, std::ios::binary);
      if (!out) throw DataError("cannot write transcript: " + path.string());
      out << transcript.to_jsonl();
      s.persisted_ = true;
    }
    return transcript;
  }

 private:
  static constexpr std::uint64_t kOpeningStream = 0x6f70656e;
  static constexpr std::uint64_t kQuestionStream = 0x71756573;

  std::string next_id(std::uint64_t seed) const {
    static constexpr char hex[] = "0123456789abcdef";
    std::uint64_t x = derive_seed(seed, counter_.fetch_add(1));
    std::string id = "s-";
    for (int i = 0; i < 16; ++i, x >>= 4) id.push_back(hex[x & 15]);
    return id;
  }

  std::shared_ptr<const EvTable> prior_;
  std::shared_ptr<const LsdeScorer> scorer_;
  std::shared_ptr<QuestionGenerator> generator_;
  std::string transcript_dir_;
  mutable std::atomic<std::uint64_t> counter_{0};
};

/// Runs a fresh session over a fixed list of user inputs.
inline SessionTranscript replay(const Engine& engine, const SessionConfig& cfg,
                                const std::vector<std::string>& responses) {
  auto s = engine.start_session(cfg);
  for (const auto& r : responses) {
    if (s.status() != SessionStatus::active) break;
    engine.step(s, r);
  }
  return engine.end_session(s);
}

}  // namespace aura
