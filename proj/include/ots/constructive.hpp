#pragma once

#include <span>
#include <vector>

#include "ots/capacity.hpp"
#include "ots/instance.hpp"
#include "ots/schedule.hpp"

namespace ots {

/// Waiting patients sharing a named surgeon and a specialty.
struct SurgeonSpecialtySet {
  int surgeon = 0;
  int specialty = 0;
  int waiting_count = 0;
  std::vector<bool> full_day_available;  // one entry per weekday of the horizon
  int max_full = 0;                      // kappa+
  int max_half = 0;                      // kappa-
  bool full_day_masked = false;          // set by full_day_suppression

  bool any_full_day() const;
  /// Full-day blocks usable: available on some weekday and not masked.
  bool full_day_allowed() const { return any_full_day() && !full_day_masked && max_full > 0; }
  int actual_max(bool full_day) const { return std::min(full_day ? max_full : max_half, waiting_count); }
  /// Largest block fill this set can currently achieve.
  int actual_max() const { return full_day_allowed() ? actual_max(true) : actual_max(false); }
};

/// One set per (surgeon, specialty) with at least one waiting patient. A
/// patient belongs to the set of its first compatible surgeon. Patients
/// already assigned in `initial` are not waiting.
std::vector<SurgeonSpecialtySet> build_sets(const Instance& instance, const CapacityTable& capacities,
                                            const Schedule& initial = {});

/// Masks full-day availability when the set can fill at most two half days.
void full_day_suppression(SurgeonSpecialtySet& set);

/// Greedy order: actual maximum descending, average capacity ascending,
/// sets without full-day access first, waiting count descending, then
/// (surgeon, specialty) ascending.
void order_sets(std::vector<SurgeonSpecialtySet>& sets);
bool set_precedes(const SurgeonSpecialtySet& a, const SurgeonSpecialtySet& b);

struct OrOption {
  int room = 0;
  int selected_fill = 0;           // patients the selected set would place here
  std::vector<int> alternatives;   // fills of every other feasible set in this OR
};

/// Max-regret OR: regret = selected fill minus best alternative; ties go to the
/// lower third-best fill (second-best alternative), then to the lower OR id.
/// Returns -1 for an empty option list.
int regret_select_or(std::span<const OrOption> options);

/// Constructive heuristic on top of `initial` (baseline reservations and, in
/// rolling mode, the kept part of the previous schedule). New blocks are
/// opened only from week `first_week` on. Deterministic.
Schedule construct(const Instance& instance, const CapacityTable& capacities, const Schedule& initial,
                   int first_week = 0);

}  // namespace ots
