#pragma once

// Expected-value policy: offline priors from exchange pairs, epsilon-greedy
// selection, and one-step within-session value updates.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "aura/actions.hpp"
#include "aura/error.hpp"
#include "aura/random.hpp"
#include "aura/states.hpp"

namespace aura {

enum class TableProvenance { prior, session };

/// Evidence category of a prior cell: R(eliable) n>=20, M(oderate) 5..19,
/// L(ow) 1..4, N(one) 0.
inline char confidence_band(std::size_t n) {
  if (n >= 20) return 'R';
  if (n >= 5) return 'M';
  if (n >= 1) return 'L';
  return 'N';
}

class EvTable {
 public:
  explicit EvTable(TableProvenance provenance = TableProvenance::prior)
      : provenance_(provenance) {}

  double value(EngagementState s, ActionType a) const {
    return values_[index_of(s)][index_of(a)];
  }
  std::size_t count(EngagementState s, ActionType a) const {
    return counts_[index_of(s)][index_of(a)];
  }
  TableProvenance provenance() const { return provenance_; }

  /// Builder access for prior construction and file loading.
  void set(EngagementState s, ActionType a, double ev, std::size_t n) {
    if (provenance_ != TableProvenance::prior)
      throw ContractViolation("session tables are only changed by updates");
    values_[index_of(s)][index_of(a)] = ev;
    counts_[index_of(s)][index_of(a)] = n;
  }

  friend bool operator==(const EvTable&, const EvTable&) = default;

 private:
  friend double update_ev(EvTable&, EngagementState, ActionType, double,
                          double);
  friend EvTable fork_session(const EvTable&);

  std::array<std::array<double, kNumActions>, kNumStates> values_{};
  std::array<std::array<std::size_t, kNumActions>, kNumStates> counts_{};
  TableProvenance provenance_;
};

/// Deep, independent copy tagged as a session table. Counts carry over and
/// stay fixed.
inline EvTable fork_session(const EvTable& source) {
  EvTable copy = source;
  copy.provenance_ = TableProvenance::session;
  return copy;
}

/// EV <- EV + alpha (reward - EV) on a session table. Returns the new value.
inline double update_ev(EvTable& table, EngagementState s, ActionType a,
                        double reward, double alpha) {
  if (table.provenance_ != TableProvenance::session)
    throw ContractViolation("prior tables are immutable; fork a session copy");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw ContractViolation("learning rate must be in (0,1]");
  double& ev = table.values_[index_of(s)][index_of(a)];
  // A full step lands on the reward exactly.
  ev = alpha == 1.0 ? reward : ev + alpha * (reward - ev);
  return ev;
}

/// Greedy action for a state; ties go to the lowest action index.
inline ActionType greedy_action(const EvTable& table, EngagementState s) {
  ActionType best = kAllActions[0];
  for (auto a : kAllActions)
    if (table.value(s, a) > table.value(s, best)) best = a;
  return best;
}

struct Selection {
  ActionType action;
  bool explored;
};

inline Selection select_action(const EvTable& table, EngagementState s,
                               double epsilon, RandomSource& rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw ContractViolation("epsilon outside [0,1]");
  if (rng.bernoulli(epsilon))
    return {kAllActions[rng.below(kNumActions)], true};
  return {greedy_action(table, s), false};
}

/// Corpus action frequencies 62.3/23.6/12.8/0.9/0.4 %, in action order.
inline constexpr std::array<double, kNumActions> kCorpusActionWeights = {
    0.623, 0.236, 0.128, 0.009, 0.004};

/// State-independent weighted random choice of action.
class BaselinePolicy {
 public:
  explicit BaselinePolicy(
      const std::array<double, kNumActions>& weights = kCorpusActionWeights) {
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) throw ContractViolation("negative baseline weight");
      total += w;
    }
    if (!(total > 0.0)) throw ContractViolation("baseline weights sum to 0");
    for (std::size_t i = 0; i < kNumActions; ++i)
      weights_[i] = weights[i] / total;
  }

  /// Normalized weights; they sum to 1.
  const std::array<double, kNumActions>& weights() const { return weights_; }

  ActionType sample(RandomSource& rng) const {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < kNumActions; ++i) {
      acc += weights_[i];
      if (u < acc) return kAllActions[i];
    }
    for (std::size_t i = kNumActions; i-- > 0;)
      if (weights_[i] > 0.0) return kAllActions[i];
    return kAllActions[0];
  }

  friend bool operator==(const BaselinePolicy&,
                         const BaselinePolicy&) = default;

 private:
  std::array<double, kNumActions> weights_{};
};

class EpsilonSchedule {
 public:
  enum class Kind { fixed, linear_decay };

  static EpsilonSchedule fixed(double epsilon) {
    check(epsilon);
    return EpsilonSchedule(Kind::fixed, epsilon, epsilon, 0);
  }
  /// eps_t = start - (start - end) * t / horizon, clamped to [end, start].
  static EpsilonSchedule linear_decay(double start, double end, int horizon) {
    check(start);
    check(end);
    if (end > start) throw ContractViolation("decay must not increase epsilon");
    if (horizon < 1) throw ContractViolation("decay horizon must be >= 1");
    return EpsilonSchedule(Kind::linear_decay, start, end, horizon);
  }

  Kind kind() const { return kind_; }
  double start() const { return start_; }
  double end() const { return end_; }
  int horizon() const { return horizon_; }

  friend bool operator==(const EpsilonSchedule&,
                         const EpsilonSchedule&) = default;

 private:
  EpsilonSchedule(Kind k, double s, double e, int h)
      : kind_(k), start_(s), end_(e), horizon_(h) {}
  static void check(double eps) {
    if (!(eps >= 0.0 && eps <= 1.0))
      throw ContractViolation("epsilon outside [0,1]");
  }

  Kind kind_;
  double start_;
  double end_;
  int horizon_;
};

/// Effective exploration rate at exchange t (1-based). For fixed schedules
/// `horizon` bounds t; decay schedules use their own horizon.
inline double epsilon_at(const EpsilonSchedule& schedule, int t,
                         int horizon = 0) {
  const int h = schedule.kind() == EpsilonSchedule::Kind::linear_decay
                    ? schedule.horizon()
                    : horizon;
  if (t < 1 || (h > 0 && t > h))
    throw ContractViolation("exchange index " + std::to_string(t) +
                            " outside [1, horizon]");
  if (schedule.kind() == EpsilonSchedule::Kind::fixed) return schedule.start();
  const double eps = schedule.start() - (schedule.start() - schedule.end()) *
                                            static_cast<double>(t) /
                                            static_cast<double>(h);
  return std::clamp(eps, schedule.end(), schedule.start());
}

/// Two consecutive responses linked by the chatbot question between them.
struct ExchangePair {
  EngagementState state_before;
  ActionType action;
  double q_before;
  double q_after;

  double delta() const { return q_after - q_before; }
  friend bool operator==(const ExchangePair&, const ExchangePair&) = default;
};

/// EV(s,a) = P(dQ > 0 | s,a) * mean(dQ | dQ > 0, s,a); zero for unseen cells.
inline EvTable compute_priors(const std::vector<ExchangePair>& pairs) {
  std::array<std::array<std::size_t, kNumActions>, kNumStates> n{};
  std::array<std::array<std::size_t, kNumActions>, kNumStates> wins{};
  std::array<std::array<double, kNumActions>, kNumStates> gain{};
  for (const auto& p : pairs) {
    const auto s = index_of(p.state_before);
    const auto a = index_of(p.action);
    ++n[s][a];
    const double d = p.delta();
    if (d > 0) {
      ++wins[s][a];
      gain[s][a] += d;
    }
  }
  EvTable table(TableProvenance::prior);
  for (auto s : kAllStates) {
    for (auto a : kAllActions) {
      const auto si = index_of(s);
      const auto ai = index_of(a);
      double ev = 0.0;
      if (wins[si][ai] > 0) {
        const double p_win = static_cast<double>(wins[si][ai]) /
                             static_cast<double>(n[si][ai]);
        const double mean_gain =
            gain[si][ai] / static_cast<double>(wins[si][ai]);
        ev = p_win * mean_gain;
      }
      table.set(s, a, ev, n[si][ai]);
    }
  }
  return table;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s, std::size_t line) {
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw DataError("bad number '" + s + "'", line);
  return v;
}

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, '\t')) out.push_back(cur);
  if (!line.empty() && line.back() == '\t') out.emplace_back();
  return out;
}

}  // namespace detail

inline constexpr std::string_view kEvTableHeader = "state\taction\tev\tn\tband";

/// EV table file: header line, then 25 tab-separated records
/// `state action ev n band`. Values are written in shortest round-trip form.
inline std::string serialize(const EvTable& table) {
  std::string out(kEvTableHeader);
  out.push_back('\n');
  for (auto s : kAllStates)
    for (auto a : kAllActions) {
      const auto n = table.count(s, a);
      out += std::string(to_string(s)) + '\t' + std::string(to_string(a)) +
             '\t' + detail::format_double(table.value(s, a)) + '\t' +
             std::to_string(n) + '\t' + confidence_band(n) + '\n';
    }
  return out;
}

inline EvTable parse_ev_table(std::istream& in) {
  EvTable table(TableProvenance::prior);
  std::array<std::array<bool, kNumActions>, kNumStates> seen{};
  std::string line;
  std::size_t lineno = 0;
  std::size_t records = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line == kEvTableHeader) continue;
    const auto f = detail::split_tabs(line);
    if (f.size() < 4) throw DataError("expected state, action, ev, n", lineno);
    const auto s = parse_state(f[0]);
    const auto a = parse_action(f[1]);
    const double ev = detail::parse_double(f[2], lineno);
    const double n = detail::parse_double(f[3], lineno);
    if (n < 0 || n != static_cast<double>(static_cast<std::size_t>(n)))
      throw DataError("count must be a non-negative integer", lineno);
    if (seen[index_of(s)][index_of(a)])
      throw DataError("duplicate cell " + f[0] + "/" + f[1], lineno);
    seen[index_of(s)][index_of(a)] = true;
    table.set(s, a, ev, static_cast<std::size_t>(n));
    ++records;
  }
  if (records != kNumStates * kNumActions)
    throw DataError("EV table needs 25 records, found " +
                    std::to_string(records));
  return table;
}

inline EvTable load_ev_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open EV table: " + path);
  return parse_ev_table(in);
}

inline void save_ev_table(const std::string& path, const EvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write EV table: " + path);
  out << serialize(table);
}

inline constexpr std::string_view kPairsHeader =
    "state\taction\tq_before\tq_after";

inline std::string serialize(const std::vector<ExchangePair>& pairs) {
  std::string out(kPairsHeader);
  out.push_back('\n');
  for (const auto& p : pairs)
    out += std::string(to_string(p.state_before)) + '\t' +
           std::string(to_string(p.action)) + '\t' +
           detail::format_double(p.q_before) + '\t' +
           detail::format_double(p.q_after) + '\n';
  return out;
}

inline std::vector<ExchangePair> parse_pairs(std::istream& in) {
  std::vector<ExchangePair> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line == kPairsHeader) continue;
    const auto f = detail::split_tabs(line);
    if (f.size() != 4)
      throw DataError("expected state, action, q_before, q_after", lineno);
    ExchangePair p{parse_state(f[0]), parse_action(f[1]),
                   detail::parse_double(f[2], lineno),
                   detail::parse_double(f[3], lineno)};
    for (double q : {p.q_before, p.q_after})
      if (!(q >= 0.0 && q <= 1.0))
        throw DataError("quality outside [0,1]", lineno);
    pairs.push_back(p);
  }
  return pairs;
}

inline std::vector<ExchangePair> load_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open pairs file: " + path);
  return parse_pairs(in);
}

inline void save_pairs(const std::string& path,
                       const std::vector<ExchangePair>& pairs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write pairs file: " + path);
  out << serialize(pairs);
}

}  // namespace aura
