#include "ots/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ots {

std::string to_string(ConstraintId id) {
  switch (id) {
    case ConstraintId::C2: return "C2";
    case ConstraintId::C3: return "C3";
    case ConstraintId::C4: return "C4";
    case ConstraintId::C5: return "C5";
    case ConstraintId::C6: return "C6";
    case ConstraintId::C7: return "C7";
    case ConstraintId::C8: return "C8";
    case ConstraintId::C9: return "C9";
    case ConstraintId::C10: return "C10";
    case ConstraintId::C11: return "C11";
    case ConstraintId::C12: return "C12";
    case ConstraintId::C13: return "C13";
    case ConstraintId::C14: return "C14";
    case ConstraintId::C15: return "C15";
    case ConstraintId::C16: return "C16";
    case ConstraintId::C17: return "C17";
    case ConstraintId::C18: return "C18";
    case ConstraintId::Solo: return "SOLO";
  }
  return "?";
}

ConstraintSet ConstraintSet::model() {
  return {ConstraintId::C2,  ConstraintId::C3,  ConstraintId::C4,  ConstraintId::C5,  ConstraintId::C6,
          ConstraintId::C7,  ConstraintId::C8,  ConstraintId::C9,  ConstraintId::C10, ConstraintId::C11,
          ConstraintId::C12, ConstraintId::C13, ConstraintId::C14, ConstraintId::C15, ConstraintId::C16,
          ConstraintId::Solo};
}

ConstraintSet ConstraintSet::baseline() {
  return {ConstraintId::C2, ConstraintId::C3,  ConstraintId::C4,  ConstraintId::C5,  ConstraintId::C6,
          ConstraintId::C7, ConstraintId::C8,  ConstraintId::C9,  ConstraintId::C10, ConstraintId::C12,
          ConstraintId::C15, ConstraintId::C16, ConstraintId::Solo};
}

namespace {

template <typename... Parts>
std::string describe(Parts&&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  return os.str();
}

/// Schedule contents bucketed per (OR, block) cell.
struct CellIndex {
  int T = 0;
  std::vector<std::vector<int>> specialties;
  std::vector<std::vector<int>> surgeons;
  std::vector<std::vector<int>> patients;
  std::vector<std::vector<std::pair<int, int>>> reserves;  // (specialty, count)

  CellIndex(const Instance& inst, const Schedule& sch) : T(inst.num_blocks) {
    const std::size_t n = static_cast<std::size_t>(inst.num_ors) * T;
    specialties.resize(n);
    surgeons.resize(n);
    patients.resize(n);
    reserves.resize(n);
    auto bounds = [&](const Assignment& a, int limit, const char* what) {
      if (a.entity < 0 || a.entity >= limit || a.room < 0 || a.room >= inst.num_ors || a.block < 0 ||
          a.block >= inst.num_blocks)
        throw StructuralError(describe(what, " entry (", a.entity, ",", a.room, ",", a.block, ") out of bounds"));
    };
    for (const auto& a : sch.specialty_assign) {
      bounds(a, inst.num_specialties, "specialty_assign");
      specialties[at(a.room, a.block)].push_back(a.entity);
    }
    for (const auto& a : sch.surgeon_assign) {
      bounds(a, inst.num_surgeons, "surgeon_assign");
      surgeons[at(a.room, a.block)].push_back(a.entity);
    }
    for (const auto& a : sch.patient_assign) {
      bounds(a, inst.num_patients, "patient_assign");
      patients[at(a.room, a.block)].push_back(a.entity);
    }
    for (const auto& [a, count] : sch.nonelective_reserve) {
      bounds(a, inst.num_specialties, "nonelective_reserve");
      if (count < 0) throw StructuralError(describe("nonelective_reserve entry has negative count ", count));
      if (count > 0) reserves[at(a.room, a.block)].emplace_back(a.entity, count);
    }
  }

  std::size_t at(int r, int t) const { return static_cast<std::size_t>(r) * T + t; }
  bool has_specialty(int r, int t, int s) const {
    const auto& v = specialties[at(r, t)];
    return std::find(v.begin(), v.end(), s) != v.end();
  }
};

}  // namespace

std::vector<Violation> check_feasibility(const Instance& inst, const Schedule& sch, const CapacityTable& caps,
                                         const ConstraintSet& families) {
  const CellIndex cells(inst, sch);
  const int R = inst.num_ors;
  const int T = inst.num_blocks;
  std::vector<Violation> out;
  auto emit = [&](ConstraintId id, std::vector<int> idx, std::string detail) {
    out.push_back(Violation{id, std::move(idx), std::move(detail)});
  };

  if (families.contains(ConstraintId::C2)) {
    std::vector<int> times(inst.num_patients, 0);
    for (const auto& a : sch.patient_assign) ++times[a.entity];
    for (int p = 0; p < inst.num_patients; ++p)
      if (times[p] > 1) emit(ConstraintId::C2, {p}, describe("patient ", p, " treated ", times[p], " times"));
  }

  // C3 / C4: one specialty / surgeon per OR across overlapping blocks.
  auto overlap_family = [&](ConstraintId id, const std::vector<std::vector<int>>& per_cell, const char* what) {
    if (!families.contains(id)) return;
    for (int r = 0; r < R; ++r) {
      bool crowded = false;
      for (int t = 0; t < T; ++t) {
        const int n = static_cast<int>(per_cell[cells.at(r, t)].size());
        if (n > 1) {
          crowded = true;
          emit(id, {r, t, t}, describe(n, " ", what, " in OR ", r, " block ", t));
        }
      }
      for (int t = 0; t < T; ++t) {
        const int nt = static_cast<int>(per_cell[cells.at(r, t)].size());
        for (int tau : inst.overlapping[t]) {
          if (tau <= t) continue;
          const int ntau = static_cast<int>(per_cell[cells.at(r, tau)].size());
          if (nt + ntau > 1)
            emit(id, {r, t, tau}, describe(what, " in OR ", r, " overlap between blocks ", t, " and ", tau));
        }
      }
      // Non-overlapping pairs can only exceed their bound of 2 when a cell is crowded.
      if (!crowded) continue;
      for (int t = 0; t < T; ++t) {
        const int nt = static_cast<int>(per_cell[cells.at(r, t)].size());
        for (int tau = t + 1; tau < T; ++tau) {
          if (!inst.non_overlap(t, tau)) continue;
          const int ntau = static_cast<int>(per_cell[cells.at(r, tau)].size());
          if (nt + ntau > 2) emit(id, {r, t, tau}, describe(what, " in OR ", r, " blocks ", t, " and ", tau));
        }
      }
    }
  };
  overlap_family(ConstraintId::C3, cells.specialties, "specialties");
  overlap_family(ConstraintId::C4, cells.surgeons, "surgeons");

  if (families.contains(ConstraintId::C5))
    for (const auto& a : sch.surgeon_assign) {
      const int s = inst.surgeon_specialty_of[a.entity];
      if (!cells.has_specialty(a.room, a.block, s))
        emit(ConstraintId::C5, {a.entity, a.room, a.block},
             describe("surgeon ", a.entity, " in OR ", a.room, " block ", a.block, " without specialty ", s));
    }

  if (families.contains(ConstraintId::C6))
    for (const auto& a : sch.specialty_assign)
      if (!inst.or_equipped(a.room, a.entity))
        emit(ConstraintId::C6, {a.entity, a.room, a.block},
             describe("OR ", a.room, " not equipped for specialty ", a.entity));

  if (families.contains(ConstraintId::C7))
    for (const auto& a : sch.patient_assign) {
      const auto& hs = cells.surgeons[cells.at(a.room, a.block)];
      const bool ok = std::any_of(hs.begin(), hs.end(), [&](int h) { return inst.can_treat(a.entity, h); });
      if (!ok)
        emit(ConstraintId::C7, {a.entity, a.room, a.block},
             describe("patient ", a.entity, " has no compatible surgeon in OR ", a.room, " block ", a.block));
    }

  if (families.contains(ConstraintId::C8))
    for (const auto& a : sch.patient_assign) {
      const int s = inst.patient_specialty_of[a.entity];
      if (!cells.has_specialty(a.room, a.block, s))
        emit(ConstraintId::C8, {a.entity, a.room, a.block},
             describe("patient ", a.entity, " specialty ", s, " not assigned to OR ", a.room, " block ", a.block));
    }

  if (families.contains(ConstraintId::C9))
    for (const auto& [a, count] : sch.nonelective_reserve) {
      if (count <= 0) continue;
      int surgeons = 0;
      for (int h : cells.surgeons[cells.at(a.room, a.block)])
        if (inst.surgeon_specialty(h, a.entity)) ++surgeons;
      if (count > inst.max_nonelective_per_block * surgeons)
        emit(ConstraintId::C9, {a.entity, a.room, a.block},
             describe(count, " reserved for specialty ", a.entity, " with ", surgeons, " matching surgeons"));
    }

  if (families.contains(ConstraintId::C10)) {
    std::vector<int> load(static_cast<std::size_t>(inst.num_surgeons) * T, 0);
    for (const auto& a : sch.surgeon_assign) ++load[static_cast<std::size_t>(a.entity) * T + a.block];
    for (int h = 0; h < inst.num_surgeons; ++h) {
      const int* row = &load[static_cast<std::size_t>(h) * T];
      for (int t = 0; t < T; ++t) {
        if (row[t] > (inst.surgeon_available(h, t) ? 1 : 0))
          emit(ConstraintId::C10, {h, t}, describe("surgeon ", h, " booked ", row[t], " times in block ", t));
        if (row[t] == 0) continue;
        for (int tau : inst.overlapping[t])
          if (tau > t && row[t] + row[tau] > 1)
            emit(ConstraintId::C10, {h, t, tau},
                 describe("surgeon ", h, " booked in overlapping blocks ", t, " and ", tau));
      }
    }
  }

  if (families.contains(ConstraintId::C11)) {
    for (int r = 0; r < R; ++r)
      for (int t = 0; t < T; ++t) {
        const auto& ps = cells.patients[cells.at(r, t)];
        if (ps.empty()) continue;
        std::vector<std::pair<int, int>> per_spec;  // (specialty, count)
        for (int p : ps) {
          const int s = inst.patient_specialty_of[p];
          auto it = std::find_if(per_spec.begin(), per_spec.end(), [&](auto& e) { return e.first == s; });
          if (it == per_spec.end())
            per_spec.emplace_back(s, 1);
          else
            ++it->second;
        }
        for (auto [s, n] : per_spec) {
          const int cap = cells.has_specialty(r, t, s) ? caps.elective(s, inst.is_full_day[t]) : 0;
          if (n > cap)
            emit(caps.solo(s, false) ? ConstraintId::Solo : ConstraintId::C11, {s, r, t},
                 describe(n, " elective patients of specialty ", s, " exceed capacity ", cap, " in OR ", r, " block ",
                          t));
        }
      }
  }

  if (families.contains(ConstraintId::C12))
    for (const auto& [a, count] : sch.nonelective_reserve) {
      if (count <= 0) continue;
      const int cap = cells.has_specialty(a.room, a.block, a.entity)
                          ? caps.nonelective(a.entity, inst.is_full_day[a.block])
                          : 0;
      if (count > cap)
        emit(caps.solo(a.entity, true) ? ConstraintId::Solo : ConstraintId::C12, {a.entity, a.room, a.block},
             describe(count, " non-elective reservations exceed capacity ", cap));
    }

  if (families.contains(ConstraintId::C13))
    for (int r = 0; r < R; ++r)
      for (int t = 0; t < T; ++t) {
        int reserved = 0;
        for (auto [s, n] : cells.reserves[cells.at(r, t)]) reserved += n;
        if (reserved == 0) continue;
        if (reserved > inst.max_nonelective_per_block)
          emit(ConstraintId::C13, {r, t, -1}, describe(reserved, " reservations exceed M_psi in OR ", r));
        for (int p : cells.patients[cells.at(r, t)])
          emit(ConstraintId::C13, {r, t, p},
               describe("elective patient ", p, " shares reserved OR ", r, " block ", t));
      }

  if (families.contains(ConstraintId::C14)) {
    std::vector<int> per_block(T, 0);
    for (const auto& a : sch.patient_assign) ++per_block[a.block];
    const int weekday_bound = R * inst.max_elective_per_block;
    for (int t = 0; t < T; ++t)
      if (per_block[t] > (inst.is_weekend[t] ? 0 : weekday_bound))
        emit(ConstraintId::C14, {t}, describe(per_block[t], " elective patients in block ", t));
  }

  if (families.contains(ConstraintId::C15)) {
    std::vector<int> reserved(static_cast<std::size_t>(inst.num_weeks) * inst.num_specialties, 0);
    for (const auto& [a, count] : sch.nonelective_reserve)
      reserved[static_cast<std::size_t>(inst.week_of(a.block)) * inst.num_specialties + a.entity] += count;
    for (int w = 0; w < inst.num_weeks; ++w)
      for (int s = 0; s < inst.num_specialties; ++s) {
        const int have = reserved[static_cast<std::size_t>(w) * inst.num_specialties + s];
        if (have < inst.weekly_nonelective_target[s])
          emit(ConstraintId::C15, {w, s},
               describe("week ", w, " specialty ", s, " reserves ", have, " of ", inst.weekly_nonelective_target[s]));
      }
  }

  if (families.contains(ConstraintId::C16))
    for (int t = 0; t < T; ++t) {
      int open = 0;
      for (int r = 0; r < R; ++r) {
        bool used = !cells.specialties[cells.at(r, t)].empty();
        for (int tau : inst.overlapping[t]) used = used || !cells.specialties[cells.at(r, tau)].empty();
        open += used ? 1 : 0;
      }
      const int bound = inst.weekend_or_limit + (inst.is_weekend[t] ? 0 : R);
      if (open > bound) emit(ConstraintId::C16, {t}, describe(open, " ORs open around block ", t));
    }

  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> rolling_deviations(const Instance& inst, const Schedule& sch, const Schedule& prev) {
  const int overlap_blocks = (inst.num_weeks - 1) * inst.blocks_per_week();
  std::vector<int> now(inst.num_patients, -1);
  for (const auto& a : sch.patient_assign) {
    if (a.entity < 0 || a.entity >= inst.num_patients) throw StructuralError("patient_assign entry out of bounds");
    now[a.entity] = a.block;
  }
  std::vector<int> out;
  for (const auto& a : prev.patient_assign) {
    if (a.block >= overlap_blocks) continue;
    if (a.entity < 0 || a.entity >= inst.num_patients) throw StructuralError("previous entry out of bounds");
    if (now[a.entity] != a.block) out.push_back(a.entity);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int overlap_reference_count(const Instance& inst, const Schedule& prev) {
  const int overlap_blocks = (inst.num_weeks - 1) * inst.blocks_per_week();
  return static_cast<int>(std::count_if(prev.patient_assign.begin(), prev.patient_assign.end(),
                                        [&](const Assignment& a) { return a.block < overlap_blocks; }));
}

int deviation_budget(double rho, int reference_count) {
  return static_cast<int>(std::floor(rho * reference_count + 1e-9));
}

std::vector<Violation> check_rolling(const Instance& inst, const Schedule& sch, const Schedule& prev, double rho) {
  // nu_p is taken at its smallest feasible value, so the indicator rows hold
  // by construction and only the budget row (C18) can fail.
  const auto deviating = rolling_deviations(inst, sch, prev);
  const int reference = overlap_reference_count(inst, prev);
  const int budget = deviation_budget(rho, reference);
  std::vector<Violation> out;
  if (static_cast<int>(deviating.size()) > budget)
    out.push_back(Violation{ConstraintId::C18,
                            {static_cast<int>(deviating.size()), reference},
                            describe(deviating.size(), " deviations exceed budget ", budget, " (rho ", rho, " of ",
                                     reference, ")")});
  return out;
}

HoursReport scheduled_hours(const Instance& inst, const Schedule& sch, const CapacityTable& caps) {
  const CellIndex cells(inst, sch);
  HoursReport report;
  report.weekly_overtime.assign(inst.num_weeks, 0.0);
  for (int r = 0; r < inst.num_ors; ++r)
    for (int t = 0; t < inst.num_blocks; ++t) {
      const auto at = cells.at(r, t);
      auto account = [&](int s, int n, bool nonelective) {
        BlockLoad load;
        load.room = r;
        load.block = t;
        load.specialty = s;
        load.nonelective = nonelective;
        load.count = n;
        load.q95_hours = caps.q95(s, n, nonelective);
        load.length_hours = inst.block_hours(t);
        load.overtime_hours = std::max(0.0, load.q95_hours - load.length_hours);
        load.solo_oversize = caps.solo(s, nonelective) && n == 1;
        report.total_q95_hours += load.q95_hours;
        report.total_overtime_hours += load.overtime_hours;
        report.weekly_overtime[inst.week_of(t)] += load.overtime_hours;
        report.blocks.push_back(load);
      };
      std::vector<std::pair<int, int>> per_spec;
      for (int p : cells.patients[at]) {
        const int s = inst.patient_specialty_of[p];
        auto it = std::find_if(per_spec.begin(), per_spec.end(), [&](auto& e) { return e.first == s; });
        if (it == per_spec.end())
          per_spec.emplace_back(s, 1);
        else
          ++it->second;
      }
      for (auto [s, n] : per_spec) account(s, n, false);
      for (auto [s, n] : cells.reserves[at]) account(s, n, true);
    }
  return report;
}

}  // namespace ots
