#include "aura/states.hpp"

#include <gtest/gtest.h>

namespace aura {
namespace {

EngagementState at(double q, double dq) { return assign_state(q, {dq}); }

// Literal five-case rule used as the oracle for the sweep.
EngagementState oracle(double q, double dq) {
  if (q < 0.3 && dq > 0.05) return EngagementState::low_improving;
  if (q < 0.3) return EngagementState::low_stable;
  if (q < 0.6) return EngagementState::medium;
  if (dq > 0.05) return EngagementState::high_improving;
  return EngagementState::high_stable;
}

TEST(StateTest, Boundaries) {
  EXPECT_EQ(at(0.3, 0.0), EngagementState::medium);
  EXPECT_EQ(at(0.2999, 0.0), EngagementState::low_stable);
  EXPECT_EQ(at(0.6, 0.0), EngagementState::high_stable);
  EXPECT_EQ(at(0.5999, 0.5), EngagementState::medium);
  EXPECT_EQ(at(0.1, 0.05), EngagementState::low_stable);
  EXPECT_EQ(at(0.1, 0.0501), EngagementState::low_improving);
  EXPECT_EQ(at(0.8, 0.05), EngagementState::high_stable);
  EXPECT_EQ(at(0.8, 0.06), EngagementState::high_improving);
  EXPECT_EQ(at(0.45, 0.4), EngagementState::medium);
}

TEST(StateTest, FirstExchangeHasZeroDelta) {
  EXPECT_EQ(delta_q(0.7, std::nullopt).value, 0.0);
  EXPECT_DOUBLE_EQ(delta_q(0.7, 0.5).value, 0.2);
  EXPECT_EQ(assign_state(0.7, delta_q(0.7, std::nullopt)),
            EngagementState::high_stable);
}

TEST(StateTest, DecreasingQualityIsStable) {
  EXPECT_EQ(at(0.1, -0.5), EngagementState::low_stable);
  EXPECT_EQ(at(0.9, -0.5), EngagementState::high_stable);
}

TEST(StateTest, RejectsQualityOutsideUnitInterval) {
  EXPECT_THROW(at(-0.01, 0), ContractViolation);
  EXPECT_THROW(at(1.01, 0), ContractViolation);
}

TEST(StateTest, GridMatchesOracle) {
  for (int qi = 0; qi <= 1000; ++qi)
    for (int di = -1000; di <= 1000; di += 7) {
      const double q = qi / 1000.0;
      const double dq = di / 1000.0;
      ASSERT_EQ(at(q, dq), oracle(q, dq)) << q << " " << dq;
    }
}

TEST(StateTest, NamesRoundTrip) {
  for (auto s : kAllStates) EXPECT_EQ(parse_state(to_string(s)), s);
  EXPECT_THROW(parse_state("bored"), DataError);
  EXPECT_EQ(to_string(EngagementState::low_improving), "low_improving");
}

}  // namespace
}  // namespace aura
