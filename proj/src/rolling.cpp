#include "ots/rolling.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "ots/constructive.hpp"
#include "ots/feasibility.hpp"
#include "ots/plan.hpp"

namespace ots {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RollingState RollingState::start(const Instance& base) {
  RollingState state;
  state.waiting = base.patient_records();
  for (auto id : base.patient_ids) state.next_id = std::max(state.next_id, id + 1);
  return state;
}

void advance_week(RollingState& state, const std::vector<std::int64_t>& treated,
                  const std::vector<PatientRecord>& arrivals, const std::vector<std::int64_t>& cancelled) {
  std::unordered_set<std::int64_t> on_list;
  for (const auto& rec : state.waiting) on_list.insert(rec.id);
  std::unordered_set<std::int64_t> gone;
  for (auto id : treated) {
    if (!on_list.contains(id)) throw std::invalid_argument("treated patient " + std::to_string(id) + " is not waiting");
    gone.insert(id);
  }
  for (auto id : cancelled) {
    if (!on_list.contains(id) || gone.contains(id))
      throw std::invalid_argument("cannot cancel patient " + std::to_string(id) + ": not on the waiting list");
    gone.insert(id);
  }
  std::erase_if(state.waiting, [&](const PatientRecord& rec) { return gone.contains(rec.id); });
  for (auto& rec : state.waiting) rec.wait_days += 7;
  for (const auto& rec : arrivals) {
    state.waiting.push_back(rec);
    state.next_id = std::max(state.next_id, rec.id + 1);
  }
  state.treated += static_cast<int>(treated.size());
  state.cancelled += static_cast<int>(cancelled.size());
  state.arrived += static_cast<int>(arrivals.size());
  ++state.week;
}

Schedule shift_schedule(const Instance& from, const Schedule& schedule, const Instance& to) {
  const int bpw = from.blocks_per_week();
  std::unordered_map<std::int64_t, int> index;
  for (int p = 0; p < to.num_patients; ++p) index[to.patient_ids[p]] = p;
  Schedule out;
  std::set<std::pair<int, int>> kept_cells;  // (room, block) in `to`
  for (const auto& a : schedule.patient_assign) {
    const int t = a.block - bpw;
    if (t < 0 || t >= to.num_blocks) continue;
    auto it = index.find(from.patient_ids[a.entity]);
    if (it == index.end()) continue;
    out.patient_assign.insert({it->second, a.room, t});
    kept_cells.insert({a.room, t});
  }
  for (const auto& a : schedule.specialty_assign)
    if (kept_cells.contains({a.room, a.block - bpw})) out.specialty_assign.insert({a.entity, a.room, a.block - bpw});
  for (const auto& a : schedule.surgeon_assign)
    if (kept_cells.contains({a.room, a.block - bpw})) out.surgeon_assign.insert({a.entity, a.room, a.block - bpw});
  return out;
}

Instance horizon_instance(const Instance& base, int week, int horizon, const std::vector<PatientRecord>& waiting) {
  return with_patients(with_horizon(base, week, horizon), waiting);
}

int iteration_budget(const EngineParams& params, BudgetMode mode, int horizon) {
  return mode == BudgetMode::Scaled ? params.iterations * horizon : params.iterations;
}

namespace {

Schedule merged(const Schedule& a, const Schedule& b) {
  Schedule out = a;
  out.specialty_assign.insert(b.specialty_assign.begin(), b.specialty_assign.end());
  out.surgeon_assign.insert(b.surgeon_assign.begin(), b.surgeon_assign.end());
  out.patient_assign.insert(b.patient_assign.begin(), b.patient_assign.end());
  for (const auto& [k, v] : b.nonelective_reserve) out.nonelective_reserve[k] = v;
  return out;
}

std::vector<int> reference_blocks(const Instance& inst, const Schedule& prev) {
  std::vector<int> ref(inst.num_patients, -1);
  const int overlap = (inst.num_weeks - 1) * inst.blocks_per_week();
  for (const auto& a : prev.patient_assign)
    if (a.block < overlap) ref[a.entity] = a.block;
  return ref;
}

}  // namespace

Schedule solve_horizon(const Instance& instance, const CapacityTable& capacities, const BaselinePlan& baseline,
                       Method method, const EngineParams& params, std::uint64_t seed) {
  Schedule start = construct(instance, capacities, baseline.schedule);
  if (method == Method::Constructive) return start;
  const Plan plan = Plan::from_schedule(instance, capacities, start);
  return run_engine(method, plan, params, seed).best;
}

SeedOutcome run_seed(const Instance& base, const CapacityTable& caps, const BaselinePlan& baseline,
                     const RollingConfig& config, std::uint64_t seed, const StepHook& hook) {
  if (config.horizon < 1 || config.weeks < 1) throw std::invalid_argument("horizon and period must be positive");
  using Clock = std::chrono::steady_clock;
  SeedOutcome outcome;
  RollingState state = RollingState::start(base);
  std::mt19937_64 list_rng(mix_seed(config.arrivals_seed, 0xa5a5));
  EngineParams params = config.params;
  params.iterations = iteration_budget(config.params, config.budget, config.horizon);

  for (int k = 0; k < config.weeks; ++k) {
    const auto t0 = Clock::now();
    const Instance inst = horizon_instance(base, k, config.horizon, state.waiting);
    const BaselinePlan weekly = tile_baseline(baseline, base, 0, inst);
    const Schedule prev =
        state.has_previous ? shift_schedule(state.previous_instance, state.previous, inst) : Schedule{};

    StepRecord rec;
    rec.week = k;
    rec.waiting = inst.num_patients;
    rec.reference = overlap_reference_count(inst, prev);
    rec.budget = deviation_budget(config.rho, rec.reference);

    // The kept part of the previous schedule plus a greedy fill of what is
    // new. With rho = 0 the overlap weeks stay exactly as planned.
    const bool freeze = state.has_previous && config.rho == 0.0;
    const int overlap_weeks = state.has_previous ? config.horizon - 1 : 0;
    const Schedule start = construct(inst, caps, merged(weekly.schedule, prev), freeze ? overlap_weeks : 0);
    Schedule result = start;
    if (config.method != Method::Constructive) {
      Plan plan = Plan::from_schedule(inst, caps, start);
      plan.set_reference(reference_blocks(inst, prev), rec.budget);
      if (freeze) plan.freeze_before(overlap_weeks * inst.blocks_per_week());
      if (!plan.within_budget()) {
        // Cannot happen with an unchanged overlap; keep the previous overlap as is.
        rec.fallback = true;
      } else {
        result = run_engine(config.method, plan, params, mix_seed(seed, k + 1)).best;
      }
    }
    rec.deviations = static_cast<int>(rolling_deviations(inst, result, prev).size());
    outcome.seconds += std::chrono::duration<double>(Clock::now() - t0).count();
    if (hook) hook(StepView{k, inst, result, prev, config.rho});

    std::vector<std::int64_t> treated;
    std::unordered_set<int> done;
    for (const auto& a : result.patient_assign)
      if (inst.week_of(a.block) == 0) {
        treated.push_back(inst.patient_ids[a.entity]);
        done.insert(a.entity);
      }
    std::vector<std::int64_t> cancelled;
    std::bernoulli_distribution cancel(config.arrivals.cancellation_probability);
    for (int p = 0; p < inst.num_patients; ++p)
      if (!done.contains(p) && cancel(list_rng)) cancelled.push_back(inst.patient_ids[p]);
    const auto arrivals = arrivals_stream(config.arrivals, inst, state.next_id, list_rng);

    rec.treated = static_cast<int>(treated.size());
    rec.arrived = static_cast<int>(arrivals.size());
    rec.cancelled = static_cast<int>(cancelled.size());
    outcome.total_treated += rec.treated;
    outcome.steps.push_back(rec);

    advance_week(state, treated, arrivals, cancelled);
    state.previous_instance = inst;
    state.previous = std::move(result);
    state.has_previous = true;
  }
  return outcome;
}

ReportRow run_planning_period(const Instance& base, const CapacityTable& caps, const BaselinePlan& baseline,
                              const RollingConfig& config, const std::vector<std::uint64_t>& seeds, int workers) {
  std::vector<SeedOutcome> outcomes(seeds.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        outcomes[i] = run_seed(base, caps, baseline, config, seeds[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(seeds.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < n; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  ReportRow row;
  row.horizon = config.horizon;
  row.method = std::string(to_string(config.method));
  row.budget = config.budget == BudgetMode::Scaled ? "scaled" : "flat";
  double seconds = 0.0;
  for (const auto& o : outcomes) {
    row.samples.push_back(o.total_treated);
    seconds += o.seconds;
  }
  if (config.timing && !outcomes.empty()) row.seconds = seconds / static_cast<double>(outcomes.size());
  return row;
}

}  // namespace ots
