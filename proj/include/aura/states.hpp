#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "aura/error.hpp"

namespace aura {

enum class EngagementState {
  low_improving,
  low_stable,
  medium,
  high_improving,
  high_stable,
};

inline constexpr std::size_t kNumStates = 5;

inline constexpr std::array<EngagementState, kNumStates> kAllStates = {
    EngagementState::low_improving, EngagementState::low_stable,
    EngagementState::medium, EngagementState::high_improving,
    EngagementState::high_stable};

inline constexpr std::size_t index_of(EngagementState s) {
  return static_cast<std::size_t>(s);
}

inline constexpr std::string_view to_string(EngagementState s) {
  constexpr std::array<std::string_view, kNumStates> names = {
      "low_improving", "low_stable", "medium", "high_improving", "high_stable"};
  return names[index_of(s)];
}

inline EngagementState parse_state(std::string_view name) {
  for (auto s : kAllStates)
    if (to_string(s) == name) return s;
  throw DataError("unknown engagement state '" + std::string(name) + "'");
}

namespace thresholds {
inline constexpr double kLowUpper = 0.3;   // q < 0.3 is low
inline constexpr double kHighLower = 0.6;  // q >= 0.6 is high
inline constexpr double kImproving = 0.05; // dq > 0.05 is improving
}  // namespace thresholds

/// Q_t - Q_{t-1}; zero on the first exchange of a session.
struct QualityDelta {
  double value = 0.0;
};

inline QualityDelta delta_q(double current, std::optional<double> previous) {
  if (!previous) return {0.0};
  return {current - *previous};
}

inline EngagementState assign_state(double q, QualityDelta dq) {
  if (!(q >= 0.0 && q <= 1.0))
    throw ContractViolation("quality outside [0,1]: " + std::to_string(q));
  const bool improving = dq.value > thresholds::kImproving;
  if (q < thresholds::kLowUpper)
    return improving ? EngagementState::low_improving
                     : EngagementState::low_stable;
  if (q < thresholds::kHighLower) return EngagementState::medium;
  return improving ? EngagementState::high_improving
                   : EngagementState::high_stable;
}

}  // namespace aura
