#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

using ots::ConstraintId;

namespace {

/// x[a][r][t] as a flat vector.
struct Dense3 {
  int A, R, T;
  std::vector<int> v;
  Dense3(int a, int r, int t) : A(a), R(r), T(t), v(static_cast<std::size_t>(a) * r * t, 0) {}
  int& operator()(int a, int r, int t) { return v[(static_cast<std::size_t>(a) * R + r) * T + t]; }
  int operator()(int a, int r, int t) const { return v[(static_cast<std::size_t>(a) * R + r) * T + t]; }
};

bool overlaps(const ots::Instance& inst, int t, int tau) { return t != tau && !inst.non_overlap(t, tau); }

}  // namespace

std::set<ConstraintId> dense_violations(const ots::Instance& inst, const ots::Schedule& sch,
                                        const ots::CapacityTable& caps) {
  const int S = inst.num_specialties, H = inst.num_surgeons, P = inst.num_patients;
  const int R = inst.num_ors, T = inst.num_blocks;
  Dense3 X(S, R, T), Y(H, R, T), Z(P, R, T), Psi(S, R, T);
  for (const auto& a : sch.specialty_assign) X(a.entity, a.room, a.block) = 1;
  for (const auto& a : sch.surgeon_assign) Y(a.entity, a.room, a.block) = 1;
  for (const auto& a : sch.patient_assign) Z(a.entity, a.room, a.block) = 1;
  for (const auto& [a, n] : sch.nonelective_reserve) Psi(a.entity, a.room, a.block) = n;

  auto V = [&](int t) { return inst.is_weekend[t] ? 1 : 0; };
  auto B = [&](int t) { return inst.is_full_day[t] ? 1 : 0; };
  std::set<ConstraintId> out;

  for (int p = 0; p < P; ++p) {
    int sum = 0;
    for (int r = 0; r < R; ++r)
      for (int t = 0; t < T; ++t) sum += Z(p, r, t);
    if (sum > 1) out.insert(ConstraintId::C2);
  }

  for (int r = 0; r < R; ++r)
    for (int t = 0; t < T; ++t)
      for (int tau = t + 1; tau < T; ++tau) {
        const int D = inst.non_overlap(t, tau) ? 1 : 0;
        int xs = 0, ys = 0;
        for (int s = 0; s < S; ++s) xs += X(s, r, t) + X(s, r, tau);
        for (int h = 0; h < H; ++h) ys += Y(h, r, t) + Y(h, r, tau);
        if (xs > 1 + D) out.insert(ConstraintId::C3);
        if (ys > 1 + D) out.insert(ConstraintId::C4);
      }

  for (int h = 0; h < H; ++h)
    for (int r = 0; r < R; ++r)
      for (int t = 0; t < T; ++t) {
        int rhs = 0;
        for (int s = 0; s < S; ++s) rhs += inst.surgeon_specialty(h, s) * X(s, r, t);
        if (Y(h, r, t) > rhs) out.insert(ConstraintId::C5);
      }

  for (int s = 0; s < S; ++s)
    for (int r = 0; r < R; ++r)
      for (int t = 0; t < T; ++t)
        if (X(s, r, t) > (inst.or_equipped(r, s) ? 1 : 0)) out.insert(ConstraintId::C6);

  for (int p = 0; p < P; ++p)
    for (int r = 0; r < R; ++r)
      for (int t = 0; t < T; ++t) {
        if (!Z(p, r, t)) continue;
        int surgeons = 0, specialties = 0;
        for (int h = 0; h < H; ++h) surgeons += inst.can_treat(p, h) * Y(h, r, t);
        for (int s = 0; s < S; ++s) specialties += inst.patient_specialty(p, s) * X(s, r, t);
        if (surgeons < 1) out.insert(ConstraintId::C7);
        if (specialties < 1) out.insert(ConstraintId::C8);
      }

  for (int s = 0; s < S; ++s)
    for (int r = 0; r < R; ++r)
      for (int t = 0; t < T; ++t) {
        int rhs = 0;
        for (int h = 0; h < H; ++h) rhs += Y(h, r, t) * inst.surgeon_specialty(h, s);
        if (Psi(s, r, t) > inst.max_nonelective_per_block * rhs) out.insert(ConstraintId::C9);
      }

  // Availability, extended to overlapping blocks: a surgeon works in at most
  // one OR over any pair of overlapping blocks.
  for (int h = 0; h < H; ++h)
    for (int t = 0; t < T; ++t) {
      int at_t = 0;
      for (int r = 0; r < R; ++r) at_t += Y(h, r, t);
      if (at_t > (inst.surgeon_available(h, t) ? 1 : 0)) out.insert(ConstraintId::C10);
      for (int tau = t + 1; tau < T; ++tau) {
        if (!overlaps(inst, t, tau)) continue;
        int at_tau = 0;
        for (int r = 0; r < R; ++r) at_tau += Y(h, r, tau);
        if (at_t + at_tau > 1) out.insert(ConstraintId::C10);
      }
    }

  for (int s = 0; s < S; ++s)
    for (int r = 0; r < R; ++r)
      for (int t = 0; t < T; ++t) {
        int electives = 0;
        for (int p = 0; p < P; ++p) electives += Z(p, r, t) * inst.patient_specialty(p, s);
        const int kappa = caps[s].elective_full * B(t) + caps[s].elective_half * (1 - B(t));
        if (electives > kappa * X(s, r, t)) out.insert(caps[s].solo_oversize ? ConstraintId::Solo : ConstraintId::C11);
        const int kappa_hat = caps[s].nonelective_full * B(t) + caps[s].nonelective_half * (1 - B(t));
        if (Psi(s, r, t) > kappa_hat * X(s, r, t))
          out.insert(caps[s].nonelective_solo_oversize ? ConstraintId::Solo : ConstraintId::C12);
      }

  for (int r = 0; r < R; ++r)
    for (int t = 0; t < T; ++t) {
      int reserved = 0;
      for (int s = 0; s < S; ++s) reserved += Psi(s, r, t);
      for (int p = 0; p < P; ++p)
        if (reserved > inst.max_nonelective_per_block * (1 - Z(p, r, t))) out.insert(ConstraintId::C13);
    }

  // Weekday bound taken per OR: R * M_p.
  for (int t = 0; t < T; ++t) {
    int electives = 0;
    for (int p = 0; p < P; ++p)
      for (int r = 0; r < R; ++r) electives += Z(p, r, t);
    if (electives > R * inst.max_elective_per_block * (1 - V(t))) out.insert(ConstraintId::C14);
  }

  for (int w = 0; w < inst.num_weeks; ++w)
    for (int s = 0; s < S; ++s) {
      int reserved = 0;
      for (int r = 0; r < R; ++r)
        for (int t = 0; t < T; ++t) reserved += Psi(s, r, t) * (inst.block_week(t, w) ? 1 : 0);
      if (reserved < inst.weekly_nonelective_target[s]) out.insert(ConstraintId::C15);
    }

  // An OR counts once when some specialty holds t or a block overlapping t.
  for (int t = 0; t < T; ++t) {
    int open = 0;
    for (int r = 0; r < R; ++r) {
      int held = 0;
      for (int s = 0; s < S; ++s) {
        held += X(s, r, t);
        for (int tau = 0; tau < T; ++tau)
          if (overlaps(inst, t, tau)) held += X(s, r, tau);
      }
      open += held > 0 ? 1 : 0;
    }
    if (open > inst.weekend_or_limit + R * (1 - V(t))) out.insert(ConstraintId::C16);
  }
  return out;
}

namespace {

/// Session usage of one day: bit 0 morning, bit 1 afternoon; a full day takes both.
constexpr int kAm = 1, kPm = 2, kFull = 3;

int kind_bits(ots::BlockKind k) {
  switch (k) {
    case ots::BlockKind::Morning: return kAm;
    case ots::BlockKind::Afternoon: return kPm;
    case ots::BlockKind::FullDay: return kFull;
  }
  return 0;
}

}  // namespace

int elective_optimum(const ots::Instance& inst, const ots::CapacityTable& caps) {
  if (inst.num_weeks != 1) throw std::invalid_argument("elective_optimum: one week only");
  const int H = inst.num_surgeons, R = inst.num_ors;
  std::vector<int> waiting(H, 0);
  for (int p = 0; p < inst.num_patients; ++p) {
    int named = -1, count = 0;
    for (int h = 0; h < H; ++h)
      if (inst.can_treat(p, h)) named = h, ++count;
    if (count != 1) throw std::invalid_argument("elective_optimum: patients must name one surgeon");
    if (inst.surgeon_specialty(named, inst.patient_specialty_of[p])) ++waiting[named];
  }

  // A session is (kind, surgeon); an OR day is empty, one full-day session or
  // up to two half-day sessions.
  struct Session {
    ots::BlockKind kind;
    int surgeon;
  };
  using OrDay = std::vector<Session>;
  std::vector<OrDay> patterns{{}};
  for (int h = 0; h < H; ++h) patterns.push_back({{ots::BlockKind::FullDay, h}});
  for (int a = -1; a < H; ++a)
    for (int b = -1; b < H; ++b) {
      if (a < 0 && b < 0) continue;
      OrDay day;
      if (a >= 0) day.push_back({ots::BlockKind::Morning, a});
      if (b >= 0) day.push_back({ots::BlockKind::Afternoon, b});
      patterns.push_back(day);
    }

  // Per weekday: every combination of OR patterns, reduced to per-surgeon
  // capacity for that day.
  std::vector<std::vector<std::vector<int>>> day_options(inst.calendar.weekdays);
  for (int d = 0; d < inst.calendar.weekdays; ++d) {
    std::vector<int> choice(R, 0);
    std::function<void(int)> rec = [&](int r) {
      if (r == R) {
        std::vector<int> busy(H, 0), cap(H, 0);
        for (int room = 0; room < R; ++room)
          for (const auto& s : patterns[choice[room]]) {
            const int t = inst.block_at(0, d, s.kind);
            const int spec = inst.surgeon_specialty_of[s.surgeon];
            if (!inst.surgeon_available(s.surgeon, t) || !inst.or_equipped(room, spec)) return;
            if (busy[s.surgeon] & kind_bits(s.kind)) return;
            busy[s.surgeon] |= kind_bits(s.kind);
            cap[s.surgeon] += caps.elective(spec, s.kind == ots::BlockKind::FullDay);
          }
        day_options[d].push_back(cap);
        return;
      }
      for (int i = 0; i < static_cast<int>(patterns.size()); ++i) {
        choice[r] = i;
        rec(r + 1);
      }
    };
    rec(0);
    std::sort(day_options[d].begin(), day_options[d].end());
    day_options[d].erase(std::unique(day_options[d].begin(), day_options[d].end()), day_options[d].end());
  }

  std::map<std::pair<int, std::vector<int>>, int> memo;
  std::function<int(int, const std::vector<int>&)> best = [&](int d, const std::vector<int>& left) -> int {
    if (d == inst.calendar.weekdays) return 0;
    auto key = std::make_pair(d, left);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    int value = 0;
    for (const auto& cap : day_options[d]) {
      std::vector<int> next = left;
      int served = 0;
      for (int h = 0; h < H; ++h) {
        const int n = std::min(left[h], cap[h]);
        served += n;
        next[h] -= n;
      }
      value = std::max(value, served + best(d + 1, next));
    }
    return memo[key] = value;
  };
  return best(0, waiting);
}

std::optional<int> baseline_minimum(const ots::Instance& inst, const ots::CapacityTable& caps) {
  if (inst.num_weeks != 1) throw std::invalid_argument("baseline_minimum: one week only");
  const int S = inst.num_specialties, R = inst.num_ors, H = inst.num_surgeons;
  const int days = inst.calendar.days_per_week();

  struct Cell {
    int room, day, surgeon, specialty, places;
    ots::BlockKind kind;
  };
  std::vector<std::vector<Cell>> options(S);
  for (int h = 0; h < H; ++h) {
    const int s = inst.surgeon_specialty_of[h];
    for (int r = 0; r < R; ++r) {
      if (!inst.or_equipped(r, s)) continue;
      for (int d = 0; d < days; ++d)
        for (auto k : {ots::BlockKind::FullDay, ots::BlockKind::Morning, ots::BlockKind::Afternoon}) {
          const int t = inst.block_at(0, d, k);
          if (!inst.surgeon_available(h, t)) continue;
          const int places = std::min(caps.nonelective(s, k == ots::BlockKind::FullDay), inst.max_nonelective_per_block);
          if (places > 0) options[s].push_back({r, d, h, s, places, k});
        }
    }
  }

  std::vector<int> need(inst.weekly_nonelective_target.begin(), inst.weekly_nonelective_target.end());
  std::vector<int> best_places(S, 0);
  int total_need = 0;
  for (int s = 0; s < S; ++s) {
    for (const auto& c : options[s]) best_places[s] = std::max(best_places[s], c.places);
    if (need[s] > 0 && best_places[s] == 0) return std::nullopt;
    total_need += std::max(0, need[s]);
  }
  auto lower_bound = [&] {
    int lb = 0;
    for (int s = 0; s < S; ++s)
      if (need[s] > 0) lb += (need[s] + best_places[s] - 1) / best_places[s];
    return lb;
  };

  std::vector<int> room_use(static_cast<std::size_t>(R) * days, 0);
  std::vector<int> surgeon_use(static_cast<std::size_t>(H) * days, 0);
  auto weekend_ok = [&](int d) {
    if (d < inst.calendar.weekdays) return true;
    int open = 0;
    for (int r = 0; r < R; ++r) open += room_use[static_cast<std::size_t>(r) * days + d] != 0 ? 1 : 0;
    return open <= inst.weekend_or_limit;
  };

  std::function<bool(int, int)> search = [&](int budget, int from) -> bool {
    int s = 0;
    while (s < S && need[s] <= 0) ++s;
    if (s == S) return true;
    if (lower_bound() > budget) return false;
    for (int i = from; i < static_cast<int>(options[s].size()); ++i) {
      const auto& c = options[s][i];
      const int bits = kind_bits(c.kind);
      int& room = room_use[static_cast<std::size_t>(c.room) * days + c.day];
      int& surgeon = surgeon_use[static_cast<std::size_t>(c.surgeon) * days + c.day];
      if ((room & bits) || (surgeon & bits)) continue;
      room |= bits;
      surgeon |= bits;
      const int used = std::min(c.places, need[s]);
      need[s] -= used;
      // Blocks of the same specialty are taken in list order; the next
      // specialty starts from its first option.
      const bool ok = weekend_ok(c.day) && search(budget - 1, need[s] > 0 ? i + 1 : 0);
      need[s] += used;
      room &= ~bits;
      surgeon &= ~bits;
      if (ok) return true;
    }
    return false;
  };

  for (int k = lower_bound(); k <= total_need; ++k)
    if (search(k, 0)) return k;
  return std::nullopt;
}

double overflow_probability(double meanlog, double sdlog, int n, double hours, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::lognormal_distribution<double> dist(meanlog, sdlog);
  int over = 0;
  for (int i = 0; i < samples; ++i) {
    double total = 0.0;
    for (int k = 0; k < n; ++k) total += dist(rng);
    if (total > hours) ++over;
  }
  return static_cast<double>(over) / samples;
}

}  // namespace oracle
