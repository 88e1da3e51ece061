#pragma once

// Simulated respondents and the controlled experiment harness: baseline
// sampling versus epsilon-greedy conditions across user profiles.

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "aura/actions.hpp"
#include "aura/engine.hpp"
#include "aura/error.hpp"
#include "aura/llm.hpp"
#include "aura/random.hpp"
#include "aura/stats.hpp"
#include "json.hpp"

namespace aura::sim {

struct UserTurn {
  int t = 1;  // exchange the response belongs to
  std::string question;
  std::optional<ActionType> action;  // empty for the opening prompt
};

class SimulatedUser {
 public:
  virtual ~SimulatedUser() = default;
  virtual std::string respond(const UserTurn& turn) = 0;
};

using ResponseProgram =
    std::function<std::string(const UserTurn&, RandomSource&)>;

/// Deterministic responder driven by a program of (turn, rng) -> text.
class ScriptedUser : public SimulatedUser {
 public:
  ScriptedUser(ResponseProgram program, std::uint64_t seed)
      : program_(std::move(program)), rng_(seed) {}
  std::string respond(const UserTurn& turn) override {
    return program_(turn, rng_);
  }

 private:
  ResponseProgram program_;
  RandomSource rng_;
};

/// Response pools by richness. Rich answers are long, first-person,
/// emotional and concrete; terse answers are a few flat words.
struct TextPools {
  std::vector<std::string> rich;
  std::vector<std::string> moderate;
  std::vector<std::string> terse;
};

inline const std::string& pick(const std::vector<std::string>& pool,
                               RandomSource& rng) {
  return pool[rng.below(pool.size())];
}

/// Generic pools used by the preference and alternating programs.
inline const TextPools& generic_pools() {
  static const TextPools p = {
      {"Honestly I love it here, my friends in Jesse Hall made my first "
       "semester in August feel like home and I am so grateful for how "
       "welcome they made me feel every single day.",
       "I was really struggling last spring and my advisor at the Student "
       "Center helped me so much, I felt heard and supported for the first "
       "time and it honestly changed my whole year for the better.",
       "My favorite memory is last October when our club hosted a cultural "
       "night in Memorial Union, I felt so proud and happy seeing my friends "
       "and family celebrate with us, it was amazing.",
       "I get anxious before exams, but in March my roommate and I started "
       "studying together at Ellis Library every evening and it made me feel "
       "so much calmer and more confident about my classes."},
      {"I like most of my classes and my friends are nice.",
       "It has been pretty good overall, I feel okay about my major."},
      {"It's fine.", "Okay I guess.", "Not much.", "Sure.", "Nothing really."},
  };
  return p;
}

/// Rich text only when asked with the preferred intent; terse otherwise.
inline ResponseProgram prefers_action(ActionType best,
                                      TextPools pools = generic_pools()) {
  return [best, pools](const UserTurn& turn, RandomSource& rng) {
    if (turn.action && *turn.action == best) return pick(pools.rich, rng);
    return pick(pools.terse, rng);
  };
}

/// Always the same one-word reply.
inline ResponseProgram constant_reply(std::string word = "ok") {
  return [word](const UserTurn&, RandomSource&) { return word; };
}

/// Rich on odd exchanges, terse on even ones.
inline ResponseProgram alternating(TextPools pools = generic_pools()) {
  return [pools](const UserTurn& turn, RandomSource& rng) {
    return turn.t % 2 == 1 ? pick(pools.rich, rng) : pick(pools.terse, rng);
  };
}

/// A simulated student: per-intent willingness to open up, and themed text.
struct Profile {
  std::string name;
  std::string persona;  // prompt for LLM-backed users
  std::array<double, kNumActions> affinity{};
  TextPools pools;
};

inline const std::vector<Profile>& builtin_profiles() {
  static const std::vector<Profile> profiles = {
      {"biology_senior",
       "You are a senior biology major. You are science-minded, moderately "
       "engaged, and mostly talk about coursework, labs and research "
       "opportunities.",
       {0.35, 0.80, 0.45, 0.30, 0.15},
       {{"I spent last summer in Dr. Patel's lab in Bond Life Sciences Center "
         "and I honestly loved it, I felt like my work mattered and it made "
         "me so excited about applying to graduate school next fall.",
         "My genetics class with Professor Kim in January was tough but I am "
         "really proud of how much I grew, I felt supported when I went to "
         "office hours in Tucker Hall every week.",
         "I was stressed about finding research last year, but my advisor "
         "connected me with a lab at the medical school and I felt relieved "
         "and grateful that someone believed in me."},
        {"The labs are good and I like my research group.",
         "My classes are demanding but I think they prepare me well.",
         "I feel okay about my major, the professors are helpful."},
        {"Labs are fine.", "It's okay.", "Busy.", "Classes, mostly."}}},
      {"psychology_junior",
       "You are a junior psychology major. You are emotionally expressive, "
       "warm, and focused on relationships and how people treat each other.",
       {0.25, 0.70, 0.40, 0.90, 0.20},
       {{"Honestly I felt so lonely my first semester, but in February I "
         "joined a peer support group at the Counseling Center and I love "
         "the people there, they make me feel seen and cared for.",
         "My roommate Maya and I had a hard conflict last fall and talking it "
         "through at Memorial Union was painful but I am so glad we did, I "
         "feel much closer to her now.",
         "I care a lot about how people treat each other here, and when my "
         "friends showed up for me after my grandmother passed in April I "
         "felt deeply grateful and less alone."},
        {"I like the people in my program, they are kind to me.",
         "It has been emotional but I feel like I am growing a lot.",
         "My friends mean a lot to me and I enjoy our time together."},
        {"It's fine.", "Not sure.", "Okay.", "Nothing much."}}},
      {"cs_sophomore",
       "You are a sophomore computer science major. You are analytical and "
       "concise and care about academic rigor and workload.",
       {0.75, 0.45, 0.30, 0.10, 0.15},
       {{"Last week in CS 3330 I was stuck on a graph assignment until 2 am "
         "in Lafferre Hall, and I felt frustrated but really proud when my "
         "solution finally passed every test case.",
         "My data structures class with Professor Chen in September was "
         "honestly the hardest thing I have done, and I felt overwhelmed "
         "until my study group started meeting in Naka Hall.",
         "I was excited when I joined the robotics team in October, we "
         "compete in Kansas City in the spring and I love building things "
         "with my friends there."},
        {"The workload is heavy but I think the courses are rigorous.",
         "I like coding projects more than exams, they feel more useful.",
         "My classes are fine and I am learning a lot."},
        {"Fine.", "Too much homework.", "It's ok.", "Nothing."}}},
      {"english_senior",
       "You are a senior English major. You write in an elaborate, "
       "reflective style and pay attention to campus culture and community.",
       {0.35, 0.90, 0.60, 0.40, 0.30},
       {{"When I read my poetry at the open mic in Jesse Hall last November I "
         "was terrified, but the applause made me feel like I truly belonged "
         "to this community, and I still think about that night with joy.",
         "My thesis advisor Professor Alvarez has been wonderful, in our "
         "meetings every Thursday in Tate Hall I feel challenged and "
         "respected, and I am grateful for how much she believes in my work.",
         "I love how the campus feels in autumn, walking across the Quad in "
         "October with my friends after our seminar makes me appreciate how "
         "much this place has shaped who I am."},
        {"I enjoy the culture of the English department and my seminars.",
         "The community here feels welcoming to me most of the time.",
         "I have grown a lot as a writer and I like my classes."},
        {"Fine.", "It's alright.", "Okay.", "Not much to say."}}},
  };
  return profiles;
}

inline const Profile& find_profile(const std::string& name) {
  for (const auto& p : builtin_profiles())
    if (p.name == name) return p;
  throw ConfigError("unknown simulated profile '" + name + "'");
}

inline std::vector<std::string> standard_profiles() {
  std::vector<std::string> out;
  for (const auto& p : builtin_profiles()) out.push_back(p.name);
  return out;
}

/// Richness follows the profile's affinity for the intent just asked; the
/// opening prompt is answered moderately.
inline ResponseProgram profile_program(const Profile& profile) {
  return [profile](const UserTurn& turn, RandomSource& rng) {
    if (!turn.action) return pick(profile.pools.moderate, rng);
    const double a = profile.affinity[index_of(*turn.action)];
    const double u = rng.uniform();
    if (u < a) return pick(profile.pools.rich, rng);
    if (u < a + (1.0 - a) / 2.0) return pick(profile.pools.moderate, rng);
    return pick(profile.pools.terse, rng);
  };
}

/// Chat-model respondent following a persona prompt.
class LlmSimulatedUser : public SimulatedUser {
 public:
  LlmSimulatedUser(std::shared_ptr<ChatClient> client, std::string persona,
                   double temperature = 0.8)
      : client_(std::move(client)), temperature_(temperature) {
    history_.push_back(
        {"system", persona +
                       " You are answering a campus-climate survey chatbot. "
                       "Reply as this student in one short paragraph."});
  }

  std::string respond(const UserTurn& turn) override {
    history_.push_back({"user", turn.question});
    ChatRequest req;
    req.messages = history_;
    req.temperature = temperature_;
    auto reply = client_->complete(req);
    history_.push_back({"assistant", reply});
    return reply;
  }

 private:
  std::shared_ptr<ChatClient> client_;
  double temperature_;
  std::vector<ChatMessage> history_;
};

using UserFactory = std::function<std::unique_ptr<SimulatedUser>(
    const std::string& profile, std::uint64_t seed)>;

inline UserFactory scripted_users() {
  return [](const std::string& profile, std::uint64_t seed) {
    return std::make_unique<ScriptedUser>(profile_program(find_profile(profile)),
                                          seed);
  };
}

inline UserFactory llm_users(std::shared_ptr<ChatClient> client,
                             double temperature = 0.8) {
  return [client, temperature](const std::string& profile, std::uint64_t) {
    return std::make_unique<LlmSimulatedUser>(
        client, find_profile(profile).persona, temperature);
  };
}

struct Condition {
  std::string name;
  SelectionMode mode = SelectionMode::policy;
  EpsilonSchedule schedule = EpsilonSchedule::fixed(0.30);
};

/// Baseline weighted sampling plus fixed 0.15, fixed 0.30 and a 0.40 -> 0.05
/// decay over 15 exchanges.
inline std::vector<Condition> standard_conditions() {
  return {{"baseline", SelectionMode::baseline, EpsilonSchedule::fixed(0.0)},
          {"config1", SelectionMode::policy, EpsilonSchedule::fixed(0.15)},
          {"config2", SelectionMode::policy, EpsilonSchedule::fixed(0.30)},
          {"config3", SelectionMode::policy,
           EpsilonSchedule::linear_decay(0.40, 0.05, 15)}};
}

struct ExperimentDesign {
  std::vector<Condition> conditions = standard_conditions();
  std::vector<std::string> profiles = standard_profiles();
  int reps = 5;
  std::uint64_t seed = 0;
  int horizon = 15;
  double alpha = 0.3;
  int workers = 1;
};

struct ConversationResult {
  std::size_t condition = 0;
  std::size_t profile = 0;
  int rep = 0;
  std::uint64_t session_seed = 0;
  std::uint64_t user_seed = 0;
  std::vector<double> qualities;
  std::vector<ActionType> actions;  // follow-up intents selected
  SessionTranscript transcript;
  std::string error;

  bool ok() const { return error.empty(); }
};

struct Comparison {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
  double d = 0.0;
};

struct PhaseDeltas {
  std::optional<double> early;  // Q5 - Q1
  std::optional<double> mid;    // Q10 - Q6
  std::optional<double> late;   // Q15 - Q11
};

struct ConditionSummary {
  std::string name;
  std::size_t conversations = 0;
  std::size_t failed = 0;
  double delta_q_mean = 0.0;
  double delta_q_sd = 0.0;
  double q_mean_mean = 0.0;
  double q_mean_sd = 0.0;
  double q_final_mean = 0.0;
  double q_final_sd = 0.0;
  double success_rate = 0.0;  // share of exchanges with dQ > 0
  PhaseDeltas phases;
  std::array<std::size_t, kNumActions> action_counts{};
  std::optional<Comparison> vs_baseline;
  std::string comparison_error;

  bool incomplete() const { return failed > 0; }
  double action_share(ActionType a) const {
    std::size_t total = 0;
    for (auto c : action_counts) total += c;
    return total ? static_cast<double>(action_counts[index_of(a)]) /
                       static_cast<double>(total)
                 : 0.0;
  }
};

struct ExperimentReport {
  ExperimentDesign design;
  std::vector<ConversationResult> conversations;
  std::vector<ConditionSummary> summaries;
};

/// Runs one conversation to the horizon.
inline ConversationResult run_conversation(const Engine& engine,
                                           const SessionConfig& cfg,
                                           SimulatedUser& user) {
  ConversationResult r;
  auto session = engine.start_session(cfg);
  try {
    while (session.status() == SessionStatus::active) {
      UserTurn turn{session.t() + 1, session.current_question(),
                    session.current_action()};
      const auto& rec = engine.step(session, user.respond(turn));
      r.qualities.push_back(rec.quality);
      if (rec.next_action) r.actions.push_back(*rec.next_action);
    }
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.transcript = engine.end_session(session);
  return r;
}

/// Q_end - Q_start within a 1-based phase; empty if the conversation is short.
inline std::optional<double> phase_delta(const std::vector<double>& q,
                                         std::size_t start, std::size_t end) {
  if (q.size() < end) return std::nullopt;
  return q[end - 1] - q[start - 1];
}

namespace detail {

inline std::optional<double> mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  return stats::mean(v);
}

}  // namespace detail

inline std::vector<double> delta_q_sample(const ExperimentReport& report,
                                          std::size_t condition) {
  std::vector<double> out;
  for (const auto& c : report.conversations)
    if (c.condition == condition && c.ok() && !c.qualities.empty())
      out.push_back(c.qualities.back() - c.qualities.front());
  return out;
}

/// Aggregates per-condition metrics from the raw conversation results.
inline std::vector<ConditionSummary> summarize(const ExperimentReport& report) {
  std::vector<ConditionSummary> out;
  std::optional<std::size_t> baseline;
  for (std::size_t i = 0; i < report.design.conditions.size(); ++i)
    if (report.design.conditions[i].mode == SelectionMode::baseline) {
      baseline = i;
      break;
    }
  for (std::size_t ci = 0; ci < report.design.conditions.size(); ++ci) {
    ConditionSummary s;
    s.name = report.design.conditions[ci].name;
    std::vector<double> dq, qbar, qfin, early, mid, late;
    std::size_t gains = 0;
    std::size_t transitions = 0;
    for (const auto& c : report.conversations) {
      if (c.condition != ci) continue;
      ++s.conversations;
      if (!c.ok() || c.qualities.empty()) {
        ++s.failed;
        continue;
      }
      const auto& q = c.qualities;
      dq.push_back(q.back() - q.front());
      qbar.push_back(stats::mean(q));
      qfin.push_back(q.back());
      for (std::size_t t = 1; t < q.size(); ++t) {
        ++transitions;
        if (q[t] - q[t - 1] > 0) ++gains;
      }
      if (auto d = phase_delta(q, 1, 5)) early.push_back(*d);
      if (auto d = phase_delta(q, 6, 10)) mid.push_back(*d);
      if (auto d = phase_delta(q, 11, 15)) late.push_back(*d);
      for (auto a : c.actions) ++s.action_counts[index_of(a)];
    }
    s.delta_q_mean = stats::mean(dq);
    s.delta_q_sd = stats::sd(dq);
    s.q_mean_mean = stats::mean(qbar);
    s.q_mean_sd = stats::sd(qbar);
    s.q_final_mean = stats::mean(qfin);
    s.q_final_sd = stats::sd(qfin);
    s.success_rate = transitions ? static_cast<double>(gains) /
                                       static_cast<double>(transitions)
                                 : 0.0;
    s.phases = {detail::mean_of(early), detail::mean_of(mid),
                detail::mean_of(late)};
    if (baseline && *baseline != ci) {
      try {
        const auto a = delta_q_sample(report, ci);
        const auto b = delta_q_sample(report, *baseline);
        const auto tt = stats::student_t_test(a, b);
        s.vs_baseline = Comparison{tt.t, tt.df, tt.p, stats::cohens_d(a, b)};
      } catch (const std::exception& e) {
        s.comparison_error = e.what();
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

/// Runs every (condition x profile x rep) conversation. Conversations may run
/// on several workers; results are stored by index, so the report does not
/// depend on scheduling. A failing conversation is recorded, not fatal.
inline ExperimentReport run_experiment(const Engine& engine,
                                       const ExperimentDesign& design,
                                       const UserFactory& users) {
  if (design.reps < 1) throw ConfigError("reps must be >= 1");
  ExperimentReport report;
  report.design = design;
  struct Job {
    std::size_t condition, profile;
    int rep;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < design.conditions.size(); ++c)
    for (std::size_t p = 0; p < design.profiles.size(); ++p)
      for (int r = 0; r < design.reps; ++r) jobs.push_back({c, p, r});
  report.conversations.resize(jobs.size());

  auto run_job = [&](std::size_t i) {
    const auto& job = jobs[i];
    const auto& cond = design.conditions[job.condition];
    SessionConfig cfg;
    cfg.horizon = design.horizon;
    cfg.alpha = design.alpha;
    cfg.schedule = cond.schedule;
    cfg.mode = cond.mode;
    cfg.seed = derive_seed(design.seed, job.condition + 1, job.profile + 1,
                           static_cast<std::uint64_t>(job.rep) + 1);
    cfg.role = design.profiles[job.profile];
    cfg.session_id = cond.name + "-" + design.profiles[job.profile] + "-" +
                     std::to_string(job.rep + 1);
    // Users share a seed across conditions so every condition meets the
    // same respondents.
    const auto user_seed = derive_seed(design.seed, 0, job.profile + 1,
                                       static_cast<std::uint64_t>(job.rep) + 1);
    ConversationResult r;
    try {
      auto user = users(design.profiles[job.profile], user_seed);
      r = run_conversation(engine, cfg, *user);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    r.condition = job.condition;
    r.profile = job.profile;
    r.rep = job.rep;
    r.session_seed = cfg.seed;
    r.user_seed = user_seed;
    report.conversations[i] = std::move(r);
  };

  const int workers = std::max(1, design.workers);
  if (workers == 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run_job(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) run_job(i);
      });
    for (auto& th : pool) th.join();
  }
  report.summaries = summarize(report);
  return report;
}

inline nlohmann::json to_json(const ConditionSummary& s) {
  nlohmann::json j = {{"name", s.name},
                      {"conversations", s.conversations},
                      {"failed", s.failed},
                      {"incomplete", s.incomplete()},
                      {"delta_q", {{"mean", s.delta_q_mean}, {"sd", s.delta_q_sd}}},
                      {"q_mean", {{"mean", s.q_mean_mean}, {"sd", s.q_mean_sd}}},
                      {"q_final", {{"mean", s.q_final_mean}, {"sd", s.q_final_sd}}},
                      {"success_rate", s.success_rate}};
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  j["phases"] = {{"early", opt(s.phases.early)},
                 {"mid", opt(s.phases.mid)},
                 {"late", opt(s.phases.late)}};
  nlohmann::json actions = nlohmann::json::object();
  for (auto a : kAllActions)
    actions[std::string(to_string(a))] = {
        {"count", s.action_counts[index_of(a)]},
        {"share", s.action_share(a)}};
  j["actions"] = actions;
  if (s.vs_baseline)
    j["vs_baseline"] = {{"t", s.vs_baseline->t},
                        {"df", s.vs_baseline->df},
                        {"p", s.vs_baseline->p},
                        {"d", s.vs_baseline->d}};
  else
    j["vs_baseline"] = nullptr;
  if (!s.comparison_error.empty()) j["comparison_error"] = s.comparison_error;
  return j;
}

inline nlohmann::json to_json(const ExperimentReport& r) {
  nlohmann::json j;
  j["design"] = {{"reps", r.design.reps},
                 {"seed", r.design.seed},
                 {"horizon", r.design.horizon},
                 {"alpha", r.design.alpha},
                 {"profiles", r.design.profiles}};
  nlohmann::json conds = nlohmann::json::array();
  for (const auto& c : r.design.conditions)
    conds.push_back(
        {{"name", c.name},
         {"mode", c.mode == SelectionMode::baseline ? "baseline" : "policy"},
         {"epsilon_start", c.schedule.start()},
         {"epsilon_end", c.schedule.end()},
         {"decay", c.schedule.kind() == EpsilonSchedule::Kind::linear_decay}});
  j["design"]["conditions"] = conds;
  j["summaries"] = nlohmann::json::array();
  for (const auto& s : r.summaries) j["summaries"].push_back(to_json(s));
  j["conversations"] = nlohmann::json::array();
  for (const auto& c : r.conversations) {
    nlohmann::json cj = {{"condition", r.design.conditions[c.condition].name},
                         {"profile", r.design.profiles[c.profile]},
                         {"rep", c.rep + 1},
                         {"session_seed", c.session_seed},
                         {"user_seed", c.user_seed},
                         {"qualities", c.qualities}};
    nlohmann::json acts = nlohmann::json::array();
    for (auto a : c.actions) acts.push_back(std::string(to_string(a)));
    cj["actions"] = acts;
    cj["error"] = c.error.empty() ? nlohmann::json(nullptr) : nlohmann::json(c.error);
    j["conversations"].push_back(cj);
  }
  return j;
}

namespace detail {

inline std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

inline std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

inline std::string signed3(const std::optional<double>& v) {
  return v ? fmt("%+.3f", *v) : std::string("n/a");
}

}  // namespace detail

/// Plain-text tables: overall performance, phase-specific change and action
/// distribution.
inline std::string render_tables(const ExperimentReport& r) {
  using detail::fmt;
  using detail::pad;
  std::string out;
  out += "Overall performance\n";
  out += pad("condition", 12) + pad("dQ (mean+-sd)", 18) + pad("Q mean", 16) +
         pad("Q final", 16) + pad("success", 9) + pad("t", 8) + pad("p", 8) +
         "d\n";
  for (const auto& s : r.summaries) {
    out += pad(s.name + (s.incomplete() ? "*" : ""), 12);
    out += pad(fmt("%+.3f", s.delta_q_mean) + fmt("+-%.3f", s.delta_q_sd), 18);
    out += pad(fmt("%.3f", s.q_mean_mean) + fmt("+-%.3f", s.q_mean_sd), 16);
    out += pad(fmt("%.3f", s.q_final_mean) + fmt("+-%.3f", s.q_final_sd), 16);
    out += pad(fmt("%.3f", s.success_rate), 9);
    if (s.vs_baseline) {
      out += pad(fmt("%.3f", s.vs_baseline->t), 8);
      out += pad(fmt("%.3f", s.vs_baseline->p), 8);
      out += fmt("%+.3f", s.vs_baseline->d);
    } else {
      out += pad("-", 8) + pad("-", 8) + "-";
    }
    out += '\n';
  }
  out += "\nPhase-specific quality change (last minus first exchange)\n";
  out += pad("condition", 12) + pad("early 1-5", 12) + pad("mid 6-10", 12) +
         "late 11-15\n";
  for (const auto& s : r.summaries)
    out += pad(s.name, 12) + pad(detail::signed3(s.phases.early), 12) +
           pad(detail::signed3(s.phases.mid), 12) +
           detail::signed3(s.phases.late) + '\n';
  out += "\nAction distribution (%)\n";
  out += pad("condition", 12);
  for (auto a : kAllActions) out += pad(std::string(to_string(a)), 15);
  out += '\n';
  for (const auto& s : r.summaries) {
    out += pad(s.name, 12);
    for (auto a : kAllActions)
      out += pad(fmt("%.1f", 100.0 * s.action_share(a)), 15);
    out += '\n';
  }
  bool any_incomplete = false;
  for (const auto& s : r.summaries) any_incomplete |= s.incomplete();
  if (any_incomplete) out += "\n* condition has failed conversations\n";
  return out;
}

/// Writes report.json, report.txt and one transcript per conversation.
inline void write_report(const ExperimentReport& r, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "transcripts");
  {
    std::ofstream out(fs::path(dir) / "report.json", std::ios::binary);
    if (!out) throw DataError("cannot write report in " + dir);
    out << to_json(r).dump(2) << '\n';
  }
  {
    std::ofstream out(fs::path(dir) / "report.txt", std::ios::binary);
    out << render_tables(r);
  }
  for (const auto& c : r.conversations) {
    if (c.transcript.session_id.empty()) continue;
    std::ofstream out(fs::path(dir) / "transcripts" /
                          (c.transcript.session_id + ".jsonl"),
                      std::ios::binary);
    out << c.transcript.to_jsonl();
  }
}

}  // namespace aura::sim
