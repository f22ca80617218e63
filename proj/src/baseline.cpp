#include "ots/baseline.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <tuple>

#include "ots/plan.hpp"

namespace ots {

int BaselinePlan::reserved_places(const Instance& instance, int week) const {
  int total = 0;
  for (const auto& [a, n] : schedule.nonelective_reserve)
    if (instance.week_of(a.block) == week) total += n;
  return total;
}

namespace {

std::string describe_shortfalls(const std::vector<Shortfall>& list) {
  std::ostringstream os;
  os << "non-elective targets cannot be met:";
  for (const auto& s : list) os << " (week " << s.week << ", specialty " << s.specialty << ", short " << s.missing << ")";
  return os.str();
}

/// Greedy variant: weekend or weekday blocks preferred, places covered or
/// hours per place ranked first, and optionally one specialty served before
/// the scarcity order.
struct Strategy {
  bool weekend_first = true;
  bool efficiency_first = false;
  int lead = -1;
};

double weekday_hours(const Instance& inst, const BaselinePlan& plan) {
  double hours = 0.0;
  for (const auto& [a, n] : plan.schedule.nonelective_reserve)
    if (!inst.is_weekend[a.block]) hours += inst.block_hours(a.block);
  return hours;
}

struct Candidate {
  int cell = -1;
  int surgeon = -1;
  int places = 0;
};

class BaselineBuilder {
 public:
  BaselineBuilder(const Instance& inst, const CapacityTable& caps, Strategy strategy)
      : inst_(inst), caps_(caps), strategy_(strategy), plan_(inst, caps) {
    or_flex_.assign(inst.num_ors, 0);
    for (int r = 0; r < inst.num_ors; ++r) or_flex_[r] = inst.or_equipped.row_sum(r);
    surgeons_of_.assign(inst.num_specialties, {});
    for (int h = 0; h < inst.num_surgeons; ++h) surgeons_of_[inst.surgeon_specialty_of[h]].push_back(h);
  }

  void solve_week(int w) {
    std::vector<int> order(inst_.num_specialties);
    std::iota(order.begin(), order.end(), 0);
    std::vector<int> options(inst_.num_specialties, 0);
    for (int s : order) options[s] = static_cast<int>(candidates(s, w).size());
    // Scarcest specialties first so they keep their few feasible blocks.
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return std::tuple(a != strategy_.lead, options[a], -inst_.weekly_nonelective_target[a]) <
             std::tuple(b != strategy_.lead, options[b], -inst_.weekly_nonelective_target[b]);
    });
    for (int s : order) {
      while (remaining(s, w) > 0) {
        auto best = best_candidate(s, w, remaining(s, w));
        if (best.cell < 0) break;
        place(best, s, w);
      }
    }
    drop_redundant(w);
    merge_pairs(w);
    drop_redundant(w);
  }

  std::vector<Shortfall> shortfalls() const {
    std::vector<Shortfall> out;
    for (int w = 0; w < inst_.num_weeks; ++w)
      for (int s = 0; s < inst_.num_specialties; ++s)
        if (int m = remaining(s, w); m > 0) out.push_back({w, s, m});
    return out;
  }

  Schedule schedule() const { return plan_.to_schedule(); }

 private:
  int remaining(int s, int w) const {
    int have = 0;
    for (const auto& [cell, spec, week] : placed_)
      if (spec == s && week == w) have += plan_.cell(cell).reserve;
    return inst_.weekly_nonelective_target[s] - have;
  }

  int places(int s, int t) const {
    return std::min(caps_.nonelective(s, inst_.is_full_day[t]), inst_.max_nonelective_per_block);
  }

  /// ORs open at weekend block t or at any block overlapping it (constraint 16).
  int open_around(int t) const {
    int open = 0;
    for (int r = 0; r < inst_.num_ors; ++r) {
      bool used = plan_.cell(plan_.cell_id(r, t)).open();
      for (int tau : inst_.overlapping[t]) used = used || plan_.cell(plan_.cell_id(r, tau)).open();
      open += used ? 1 : 0;
    }
    return open;
  }

  bool weekend_ok(int c) const {
    const int t = plan_.block_of(c);
    const int r = plan_.room_of(c);
    auto room_used = [&](int block) {
      if (plan_.cell(plan_.cell_id(r, block)).open()) return true;
      for (int tau : inst_.overlapping[block])
        if (plan_.cell(plan_.cell_id(r, tau)).open()) return true;
      return false;
    };
    // Every weekend block whose window includes this cell must stay within xi.
    std::vector<int> affected{t};
    affected.insert(affected.end(), inst_.overlapping[t].begin(), inst_.overlapping[t].end());
    for (int b : affected) {
      if (!inst_.is_weekend[b]) continue;
      const int extra = room_used(b) ? 0 : 1;
      if (open_around(b) + extra > inst_.weekend_or_limit) return false;
    }
    return true;
  }

  std::vector<Candidate> candidates(int s, int w) const {
    std::vector<Candidate> out;
    const int bpw = inst_.blocks_per_week();
    for (int t = w * bpw; t < (w + 1) * bpw; ++t) {
      const int n = places(s, t);
      if (n <= 0) continue;
      for (int h : surgeons_of_[s]) {
        if (!inst_.surgeon_available(h, t) || !plan_.surgeon_free(h, t)) continue;
        for (int r = 0; r < inst_.num_ors; ++r) {
          const int c = plan_.cell_id(r, t);
          if (!inst_.or_equipped(r, s) || !plan_.room_free(c)) continue;
          if (inst_.is_weekend[t] && !weekend_ok(c)) continue;
          out.push_back({c, h, n});
        }
      }
    }
    return out;
  }

  /// Best candidate by the strategy key; with `must_cover`, only blocks
  /// holding at least `need` places qualify.
  Candidate best_candidate(int s, int w, int need, bool must_cover = false) const {
    Candidate best;
    auto key = [&](const Candidate& cand) {
      const int t = plan_.block_of(cand.cell);
      const int r = plan_.room_of(cand.cell);
      const double hours_per_place = inst_.block_hours(t) / cand.places;
      const int elective_load = static_cast<int>(plan_.surgeon_patients(cand.surgeon).size());
      const int weekday_rank = (inst_.is_weekend[t] != 0) == strategy_.weekend_first ? 0 : 1;
      const int covered = -std::min(cand.places, need);
      const double first = strategy_.efficiency_first ? hours_per_place : covered;
      const double second = strategy_.efficiency_first ? covered : hours_per_place;
      return std::tuple(first, second, weekday_rank, or_flex_[r], elective_load, t, r, cand.surgeon);
    };
    for (const auto& cand : candidates(s, w))
      if ((!must_cover || cand.places >= need) && (best.cell < 0 || key(cand) < key(best))) best = cand;
    return best;
  }

  void place(const Candidate& cand, int s, int w) {
    plan_.reserve(cand.cell, cand.surgeon, cand.places);
    placed_.emplace_back(cand.cell, s, w);
  }

  void unplace(std::size_t i) {
    plan_.unreserve(std::get<0>(placed_[i]));
    placed_.erase(placed_.begin() + static_cast<std::ptrdiff_t>(i));
  }

  void drop_redundant(int w) {
    for (std::size_t i = placed_.size(); i-- > 0;) {
      const auto [cell, s, week] = placed_[i];
      if (week != w) continue;
      if (remaining(s, w) + plan_.cell(cell).reserve <= 0) unplace(i);
    }
  }

  /// Replaces two reservations of one specialty by a single block when possible.
  void merge_pairs(int w) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t i = 0; i < placed_.size() && !improved; ++i)
        for (std::size_t j = i + 1; j < placed_.size() && !improved; ++j) {
          const auto [ci, si, wi] = placed_[i];
          const auto [cj, sj, wj] = placed_[j];
          if (si != sj || wi != w || wj != w) continue;
          const int hi = plan_.cell(ci).surgeon, hj = plan_.cell(cj).surgeon;
          const int ni = plan_.cell(ci).reserve, nj = plan_.cell(cj).reserve;
          unplace(j);
          unplace(i);
          const int need = remaining(si, w);
          auto cand = best_candidate(si, w, need, true);
          if (cand.cell >= 0) {
            place(cand, si, w);
            improved = true;
          } else {
            plan_.reserve(ci, hi, ni);
            placed_.insert(placed_.begin() + static_cast<std::ptrdiff_t>(i), {ci, si, wi});
            plan_.reserve(cj, hj, nj);
            placed_.insert(placed_.begin() + static_cast<std::ptrdiff_t>(j), {cj, sj, wj});
          }
        }
    }
  }

  const Instance& inst_;
  const CapacityTable& caps_;
  Strategy strategy_;
  Plan plan_;
  std::vector<int> or_flex_;
  std::vector<std::vector<int>> surgeons_of_;
  std::vector<std::tuple<int, int, int>> placed_;  // (cell, specialty, week)
};

}  // namespace

BaselineError::BaselineError(std::vector<Shortfall> shortfalls)
    : std::runtime_error(describe_shortfalls(shortfalls)), shortfalls_(std::move(shortfalls)) {}

BaselinePlan solve_baseline(const Instance& instance, const CapacityTable& capacities) {
  auto run = [&](Strategy strategy) {
    BaselineBuilder builder(instance, capacities, strategy);
    for (int w = 0; w < instance.num_weeks; ++w) builder.solve_week(w);
    return std::pair(builder.shortfalls(), BaselinePlan{builder.schedule()});
  };
  // Weekend-first keeps weekday theatre time for electives. Another variant
  // replaces it when it needs fewer reservations without taking more weekday
  // hours, or when the current plan leaves a shortfall.
  auto [missing, best] = run({});
  auto consider = [&](Strategy strategy) {
    auto [m, plan] = run(strategy);
    if (!m.empty()) return;
    const bool dominates =
        plan.objective() < best.objective() && weekday_hours(instance, plan) <= weekday_hours(instance, best);
    if (!missing.empty() || dominates) {
      missing.clear();
      best = std::move(plan);
    }
  };
  consider({false, false, -1});
  consider({true, true, -1});
  consider({false, true, -1});
  if (!missing.empty()) {
    const auto short_list = missing;
    for (const auto& s : short_list)
      for (bool weekend_first : {true, false})
        for (bool efficiency_first : {false, true})
          if (!missing.empty()) consider({weekend_first, efficiency_first, s.specialty});
  }
  if (!missing.empty()) throw BaselineError(std::move(missing));
  return best;
}

BaselinePlan tile_baseline(const BaselinePlan& plan, const Instance& source, int source_week, const Instance& target) {
  const int bpw = source.blocks_per_week();
  BaselinePlan out;
  auto shift = [&](const Assignment& a, int w) {
    return Assignment{a.entity, a.room, w * bpw + a.block % bpw};
  };
  for (int w = 0; w < target.num_weeks; ++w) {
    for (const auto& a : plan.schedule.specialty_assign)
      if (source.week_of(a.block) == source_week) out.schedule.specialty_assign.insert(shift(a, w));
    for (const auto& a : plan.schedule.surgeon_assign)
      if (source.week_of(a.block) == source_week) out.schedule.surgeon_assign.insert(shift(a, w));
    for (const auto& [a, n] : plan.schedule.nonelective_reserve)
      if (source.week_of(a.block) == source_week) out.schedule.nonelective_reserve[shift(a, w)] = n;
  }
  return out;
}

}  // namespace ots
