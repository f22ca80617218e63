#include "ots/constructive.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "ots/plan.hpp"

namespace ots {

bool SurgeonSpecialtySet::any_full_day() const {
  return std::any_of(full_day_available.begin(), full_day_available.end(), [](bool b) { return b; });
}

void full_day_suppression(SurgeonSpecialtySet& set) {
  if (set.waiting_count <= 2 * set.max_half) set.full_day_masked = true;
}

namespace {

int group_surgeon(const Instance& inst, int p) { return inst.patient_surgeons[p].front(); }

std::vector<bool> weekday_full_days(const Instance& inst, int h) {
  std::vector<bool> out;
  for (int w = 0; w < inst.num_weeks; ++w)
    for (int d = 0; d < inst.calendar.weekdays; ++d)
      out.push_back(inst.surgeon_available(h, inst.block_at(w, d, BlockKind::FullDay)));
  return out;
}

auto order_key(const SurgeonSpecialtySet& s) {
  return std::tuple(-s.actual_max(), s.max_full + s.max_half, s.full_day_allowed() ? 1 : 0, -s.waiting_count,
                    s.surgeon, s.specialty);
}

}  // namespace

std::vector<SurgeonSpecialtySet> build_sets(const Instance& inst, const CapacityTable& caps, const Schedule& initial) {
  std::vector<bool> assigned(inst.num_patients, false);
  for (const auto& a : initial.patient_assign) assigned[a.entity] = true;
  std::map<std::pair<int, int>, int> waiting;
  for (int p = 0; p < inst.num_patients; ++p)
    if (!assigned[p]) ++waiting[{group_surgeon(inst, p), inst.patient_specialty_of[p]}];
  std::vector<SurgeonSpecialtySet> out;
  for (const auto& [key, count] : waiting) {
    SurgeonSpecialtySet set;
    set.surgeon = key.first;
    set.specialty = key.second;
    set.waiting_count = count;
    set.full_day_available = weekday_full_days(inst, key.first);
    set.max_full = caps.elective(key.second, true);
    set.max_half = caps.elective(key.second, false);
    out.push_back(std::move(set));
  }
  return out;
}

bool set_precedes(const SurgeonSpecialtySet& a, const SurgeonSpecialtySet& b) { return order_key(a) < order_key(b); }

void order_sets(std::vector<SurgeonSpecialtySet>& sets) { std::stable_sort(sets.begin(), sets.end(), set_precedes); }

int regret_select_or(std::span<const OrOption> options) {
  int chosen = -1;
  std::tuple<int, int, int> best_key{};
  for (const auto& opt : options) {
    std::vector<int> alt = opt.alternatives;
    std::sort(alt.begin(), alt.end(), std::greater<>());
    const int second = alt.empty() ? 0 : alt[0];
    const int third = alt.size() < 2 ? 0 : alt[1];
    // Larger regret first, then smaller third-best, then smaller OR id.
    const std::tuple key{-(opt.selected_fill - second), third, opt.room};
    if (chosen < 0 || key < best_key) {
      chosen = opt.room;
      best_key = key;
    }
  }
  return chosen;
}

namespace {

class Constructor {
 public:
  Constructor(const Instance& inst, const CapacityTable& caps, const Schedule& initial, int first_week)
      : inst_(inst), plan_(Plan::from_schedule(inst, caps, initial)), first_week_(first_week) {
    sets_ = build_sets(inst, caps, initial);
    members_.resize(sets_.size());
    std::map<std::pair<int, int>, int> index;
    for (int i = 0; i < static_cast<int>(sets_.size()); ++i) index[{sets_[i].surgeon, sets_[i].specialty}] = i;
    for (int p = 0; p < inst.num_patients; ++p) {
      if (plan_.patient_cell(p) >= 0) continue;
      members_[index.at({group_surgeon(inst, p), inst.patient_specialty_of[p]})].push_back(p);
    }
    for (auto& list : members_)
      std::stable_sort(list.begin(), list.end(), [&](int a, int b) { return plan_.priority(a) < plan_.priority(b); });
    next_.assign(sets_.size(), 0);
    live_.assign(sets_.size(), true);
  }

  Schedule run() {
    std::vector<int> order(sets_.size());
    for (;;) {
      for (auto& s : sets_) full_day_suppression(s);
      order.clear();
      for (int i = 0; i < static_cast<int>(sets_.size()); ++i)
        if (live_[i]) order.push_back(i);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return set_precedes(sets_[a], sets_[b]); });
      bool placed = false;
      for (int i : order) {
        if (place_once(i)) {
          placed = true;
          break;
        }
        // Resources only shrink, so a set that cannot be placed now never can.
        live_[i] = false;
      }
      if (!placed) break;
    }
    return plan_.to_schedule();
  }

 private:
  bool block_usable(const SurgeonSpecialtySet& set, int t) const {
    const bool full = inst_.is_full_day[t];
    if (full ? !set.full_day_allowed() : set.max_half <= 0) return false;
    return inst_.surgeon_available(set.surgeon, t) && plan_.surgeon_free(set.surgeon, t);
  }

  bool place_once(int i) {
    auto& set = sets_[i];
    if (set.waiting_count <= 0) return false;
    for (int w = first_week_; w < inst_.num_weeks; ++w)
      for (int d = 0; d < inst_.calendar.weekdays; ++d)
        for (BlockKind kind : {BlockKind::FullDay, BlockKind::Morning, BlockKind::Afternoon}) {
          const int t = inst_.block_at(w, d, kind);
          if (!block_usable(set, t)) continue;
          const int room = choose_room(i, t);
          if (room < 0) continue;
          fill(i, plan_.cell_id(room, t));
          return true;
        }
    return false;
  }

  int choose_room(int i, int t) const {
    const auto& set = sets_[i];
    const bool full = inst_.is_full_day[t];
    std::vector<OrOption> options;
    for (int r = 0; r < inst_.num_ors; ++r) {
      if (!inst_.or_equipped(r, set.specialty) || !plan_.room_free(plan_.cell_id(r, t))) continue;
      OrOption opt{r, set.actual_max(full), {}};
      for (int j = 0; j < static_cast<int>(sets_.size()); ++j) {
        if (j == i || !live_[j]) continue;
        const auto& other = sets_[j];
        if (other.waiting_count <= 0 || other.surgeon == set.surgeon) continue;
        if (!inst_.or_equipped(r, other.specialty) || !block_usable(other, t)) continue;
        opt.alternatives.push_back(other.actual_max(full));
      }
      options.push_back(std::move(opt));
    }
    return regret_select_or(options);
  }

  void fill(int i, int c) {
    auto& set = sets_[i];
    plan_.open(c, set.surgeon);
    const int n = set.actual_max(inst_.is_full_day[plan_.block_of(c)]);
    for (int k = 0; k < n; ++k) plan_.add(members_[i][next_[i]++], c);
    set.waiting_count -= n;
  }

  const Instance& inst_;
  Plan plan_;
  int first_week_;
  std::vector<SurgeonSpecialtySet> sets_;
  std::vector<std::vector<int>> members_;
  std::vector<int> next_;
  std::vector<bool> live_;
};

}  // namespace

Schedule construct(const Instance& instance, const CapacityTable& capacities, const Schedule& initial,
                   int first_week) {
  return Constructor(instance, capacities, initial, first_week).run();
}

}  // namespace ots
