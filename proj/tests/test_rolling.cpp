#include <gtest/gtest.h>

#include <set>

#include "ots/constructive.hpp"
#include "ots/feasibility.hpp"
#include "ots/generator.hpp"
#include "ots/rolling.hpp"
#include "support.hpp"

using namespace ots;

namespace {

RollingConfig config_for(Method method, int horizon, int weeks, double rho) {
  RollingConfig c;
  c.method = method;
  c.horizon = horizon;
  c.weeks = weeks;
  c.rho = rho;
  c.params.iterations = 4000;
  c.arrivals = resolved(GeneratorConfig{}).arrivals;
  c.timing = false;
  return c;
}

PatientRecord record(std::int64_t id, double wait) { return {id, 0, {0}, 3, wait}; }

}  // namespace

TEST(Ledger, TreatedPatientsLeaveAndOthersWaitAWeekLonger) {
  auto state = RollingState::start(support::mini_instance());
  ASSERT_EQ(state.waiting.size(), 4u);
  advance_week(state, {100, 102}, {}, {});
  ASSERT_EQ(state.waiting.size(), 2u);
  EXPECT_EQ(state.waiting[0].id, 101);
  EXPECT_EQ(state.waiting[1].id, 103);
  EXPECT_DOUBLE_EQ(state.waiting[0].wait_days, 7.0);
  EXPECT_EQ(state.week, 1);
  EXPECT_EQ(state.next_id, 104);
}

TEST(Ledger, ArrivalsJoinWithZeroWait) {
  auto state = RollingState::start(support::mini_instance());
  advance_week(state, {}, {record(104, 0.0)}, {101});
  ASSERT_EQ(state.waiting.size(), 4u);
  EXPECT_EQ(state.waiting.back().id, 104);
  EXPECT_DOUBLE_EQ(state.waiting.back().wait_days, 0.0);
  EXPECT_EQ(state.cancelled, 1);
  for (const auto& r : state.waiting) EXPECT_NE(r.id, 101);
}

TEST(Ledger, CancellingATreatedPatientIsAnError) {
  auto state = RollingState::start(support::mini_instance());
  advance_week(state, {100}, {}, {});
  EXPECT_THROW(advance_week(state, {}, {}, {100}), std::invalid_argument);
}

TEST(Shift, DropsTheFirstWeekReservationsAndLeavers) {
  const auto base = support::mini_instance();
  const auto from = with_horizon(base, 0, 2);
  const int bpw = from.blocks_per_week();
  Schedule s;
  support::open_cell(s, 0, 0, 0, 1);
  support::put_patient(s, 0, 0, 1);  // week 1: implemented
  support::open_cell(s, 0, 0, 0, bpw + 2);
  support::put_patient(s, 1, 0, bpw + 2);
  support::open_cell(s, 1, 1, 1, bpw + 2);
  support::put_patient(s, 2, 1, bpw + 2);
  support::put_patient(s, 3, 1, bpw + 2);
  s.specialty_assign.insert({1, 0, bpw + 5});
  s.nonelective_reserve[{1, 0, bpw + 5}] = 2;

  // Patient 100 was treated and 103 cancelled.
  auto state = RollingState::start(base);
  advance_week(state, {100}, {}, {103});
  const auto to = horizon_instance(base, 1, 2, state.waiting);
  ASSERT_EQ(to.num_patients, 2);
  const auto shifted = shift_schedule(from, s, to);
  EXPECT_TRUE(shifted.nonelective_reserve.empty());
  EXPECT_EQ(objective(shifted), 2);
  for (const auto& a : shifted.patient_assign) {
    EXPECT_EQ(a.block, 2);
    EXPECT_NE(to.patient_ids[a.entity], 103);
  }
  EXPECT_EQ(shifted.specialty_assign.size(), 2u);
}

TEST(Horizon, InstanceCoversTheRequestedWeeks) {
  const auto& w = support::default_world();
  const auto state = RollingState::start(w.instance);
  const auto inst = horizon_instance(w.instance, 3, 2, state.waiting);
  EXPECT_EQ(inst.num_weeks, 2);
  EXPECT_EQ(inst.num_blocks, 42);
  EXPECT_EQ(inst.num_patients, w.instance.num_patients);
  EXPECT_EQ(inst.num_surgeons, w.instance.num_surgeons);
}

TEST(Rolling, ConstructiveIsTheSameForEverySeed) {
  const auto& w = support::default_world();
  const auto row = run_planning_period(w.instance, w.caps, w.baseline, config_for(Method::Constructive, 1, 3, 0.1),
                                       {1, 2, 3});
  EXPECT_EQ(row.variance(), 0.0);
  EXPECT_FALSE(row.seconds.has_value());
}

TEST(Rolling, SingleWeekPeriodIsOneStep) {
  const auto& w = support::default_world();
  const auto out = run_seed(w.instance, w.caps, w.baseline, config_for(Method::HyperSA, 1, 1, 0.1), 4);
  ASSERT_EQ(out.steps.size(), 1u);
  EXPECT_EQ(out.steps[0].reference, 0);
  EXPECT_EQ(out.total_treated, out.steps[0].treated);
}

TEST(Rolling, ZeroBudgetKeepsTheOverlapExactly) {
  const auto& w = support::default_world();
  int checked = 0;
  run_seed(w.instance, w.caps, w.baseline, config_for(Method::HyperSATS, 3, 3, 0.0), 5, [&](const StepView& v) {
    EXPECT_TRUE(check_rolling(v.instance, v.schedule, v.previous, 0.0).empty());
    EXPECT_TRUE(check_feasibility(v.instance, v.schedule, w.caps).empty());
    if (v.week == 0) return;
    const int limit = (v.instance.num_weeks - 1) * v.instance.blocks_per_week();
    std::set<Assignment> before, after;
    for (const auto& a : v.previous.patient_assign)
      if (a.block < limit) before.insert(a);
    for (const auto& a : v.schedule.patient_assign)
      if (a.block < limit) after.insert(a);
    EXPECT_EQ(before, after) << "week " << v.week;
    checked += before.empty() ? 0 : 1;
  });
  EXPECT_EQ(checked, 2);
}

TEST(Rolling, BudgetHoldsAndNobodyIsTreatedTwice) {
  const auto& w = support::default_world();
  std::set<std::int64_t> treated;
  int duplicates = 0;
  const auto out =
      run_seed(w.instance, w.caps, w.baseline, config_for(Method::SA, 2, 4, 0.1), 6, [&](const StepView& v) {
        EXPECT_TRUE(check_rolling(v.instance, v.schedule, v.previous, v.rho).empty()) << "week " << v.week;
        EXPECT_TRUE(check_feasibility(v.instance, v.schedule, w.caps).empty()) << "week " << v.week;
        for (const auto& a : v.schedule.patient_assign)
          if (v.instance.week_of(a.block) == 0) duplicates += treated.insert(v.instance.patient_ids[a.entity]).second ? 0 : 1;
      });
  EXPECT_EQ(duplicates, 0);
  EXPECT_EQ(static_cast<int>(treated.size()), out.total_treated);
  for (const auto& s : out.steps) EXPECT_LE(s.deviations, s.budget);
}

// The waiting-list trajectory replayed from the hook's schedules and a copy
// of the list random stream.
TEST(Rolling, WaitingListMatchesReplay) {
  const auto& w = support::default_world();
  auto config = config_for(Method::Constructive, 1, 6, 0.1);
  std::mt19937_64 rng(mix_seed(config.arrivals_seed, 0xa5a5));
  std::int64_t next_id = RollingState::start(w.instance).next_id;
  std::vector<int> expected{w.instance.num_patients};
  run_seed(w.instance, w.caps, w.baseline, config, 7, [&](const StepView& v) {
    std::vector<bool> done(v.instance.num_patients, false);
    int treated = 0;
    for (const auto& a : v.schedule.patient_assign)
      if (v.instance.week_of(a.block) == 0) done[a.entity] = true, ++treated;
    std::bernoulli_distribution cancel(config.arrivals.cancellation_probability);
    int cancelled = 0;
    for (int p = 0; p < v.instance.num_patients; ++p)
      if (!done[p] && cancel(rng)) ++cancelled;
    const int arrived = static_cast<int>(arrivals_stream(config.arrivals, v.instance, next_id, rng).size());
    expected.push_back(v.instance.num_patients - treated - cancelled + arrived);
  });
  const auto out = run_seed(w.instance, w.caps, w.baseline, config, 7);
  for (std::size_t k = 0; k < out.steps.size(); ++k) {
    EXPECT_EQ(out.steps[k].waiting, expected[k]) << "week " << k;
    EXPECT_EQ(out.steps[k].waiting - out.steps[k].treated - out.steps[k].cancelled + out.steps[k].arrived,
              expected[k + 1]);
  }
}

TEST(Rolling, IterationBudgetScalesWithHorizon) {
  EngineParams p;
  EXPECT_EQ(iteration_budget(p, BudgetMode::Flat, 3), 16000);
  EXPECT_EQ(iteration_budget(p, BudgetMode::Scaled, 3), 48000);
}
