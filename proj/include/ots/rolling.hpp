#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ots/baseline.hpp"
#include "ots/capacity.hpp"
#include "ots/engines.hpp"
#include "ots/generator.hpp"
#include "ots/instance.hpp"
#include "ots/report.hpp"
#include "ots/schedule.hpp"

namespace ots {

enum class BudgetMode { Flat, Scaled };

struct RollingConfig {
  int weeks = 6;    // planning period
  int horizon = 1;  // weeks per solve, 1..4
  Method method = Method::HyperSA;
  EngineParams params;
  BudgetMode budget = BudgetMode::Flat;
  double rho = 0.1;
  ArrivalModel arrivals;
  // Arrivals and cancellations are the same for every run seed, so seeds
  // only vary the search.
  std::uint64_t arrivals_seed = 1;
  bool timing = true;
};

/// Waiting-list ledger carried from week to week.
struct RollingState {
  int week = 0;
  std::vector<PatientRecord> waiting;
  std::int64_t next_id = 1;
  int treated = 0;
  int cancelled = 0;
  int arrived = 0;
  Instance previous_instance;  // horizon instance of the last step
  Schedule previous;           // its schedule
  bool has_previous = false;

  static RollingState start(const Instance& base);
};

/// Removes treated and cancelled patients, appends arrivals and adds seven
/// days to every remaining wait. Throws std::invalid_argument when a
/// cancelled id is not on the list (e.g. already treated).
void advance_week(RollingState& state, const std::vector<std::int64_t>& treated,
                  const std::vector<PatientRecord>& arrivals, const std::vector<std::int64_t>& cancelled);

/// Previous horizon schedule moved one week earlier in `to`: the first week
/// is dropped, non-elective cells are left out and patients that left the
/// list are removed.
Schedule shift_schedule(const Instance& from, const Schedule& schedule, const Instance& to);

/// Horizon instance for week `week` of the period.
Instance horizon_instance(const Instance& base, int week, int horizon, const std::vector<PatientRecord>& waiting);

struct StepRecord {
  int week = 0;
  int waiting = 0;
  int treated = 0;
  int arrived = 0;
  int cancelled = 0;
  int reference = 0;   // |Z*| in the overlap weeks
  int deviations = 0;
  int budget = 0;
  bool fallback = false;
};

struct StepView {
  int week;
  const Instance& instance;
  const Schedule& schedule;
  const Schedule& previous;  // shifted previous schedule (Z*), empty on the first step
  double rho;
};
using StepHook = std::function<void(const StepView&)>;

struct SeedOutcome {
  int total_treated = 0;
  double seconds = 0.0;
  std::vector<StepRecord> steps;
};

/// One planning period for one seed. Baseline computation is not timed; the
/// weekly baseline of `base` is repeated over each horizon.
SeedOutcome run_seed(const Instance& base, const CapacityTable& capacities, const BaselinePlan& baseline,
                     const RollingConfig& config, std::uint64_t seed, const StepHook& hook = {});

/// Runs every seed (in parallel with `workers` threads) and aggregates one
/// report row.
ReportRow run_planning_period(const Instance& base, const CapacityTable& capacities, const BaselinePlan& baseline,
                              const RollingConfig& config, const std::vector<std::uint64_t>& seeds, int workers = 1);

/// Single-horizon solve from the baseline (no rolling), used by the solve
/// subcommand and by experiments on one horizon.
Schedule solve_horizon(const Instance& instance, const CapacityTable& capacities, const BaselinePlan& baseline,
                       Method method, const EngineParams& params, std::uint64_t seed);

int iteration_budget(const EngineParams& params, BudgetMode mode, int horizon);

/// Deterministic 64-bit mix used to derive per-week seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace ots
