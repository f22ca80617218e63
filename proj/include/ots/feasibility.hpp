#pragma once

#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "ots/capacity.hpp"
#include "ots/instance.hpp"
#include "ots/schedule.hpp"

namespace ots {

/// Raised when a schedule references an index outside the instance.
class StructuralError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Set of constraint families to evaluate.
class ConstraintSet {
 public:
  constexpr ConstraintSet() = default;
  ConstraintSet(std::initializer_list<ConstraintId> ids) {
    for (auto id : ids) add(id);
  }
  static ConstraintSet model();     // C2..C16 and SOLO
  static ConstraintSet baseline();  // C2..C10, C12, C15, C16 and SOLO

  void add(ConstraintId id) { bits_ |= bit(id); }
  bool contains(ConstraintId id) const { return (bits_ & bit(id)) != 0; }

 private:
  static constexpr unsigned bit(ConstraintId id) { return 1u << static_cast<unsigned>(id); }
  unsigned bits_ = 0;
};

/// Every violated row of the model, one Violation per violated index tuple.
/// Families are evaluated independently; nothing short-circuits.
std::vector<Violation> check_feasibility(const Instance& instance, const Schedule& schedule,
                                         const CapacityTable& capacities,
                                         const ConstraintSet& families = ConstraintSet::model());

/// Patients whose previous block (in the first W-1 weeks) is not kept by
/// `schedule`. `prev` is expressed in the indexing of `instance`.
std::vector<int> rolling_deviations(const Instance& instance, const Schedule& schedule, const Schedule& prev);

/// Number of previous assignments that fall in the first W-1 weeks.
int overlap_reference_count(const Instance& instance, const Schedule& prev);

/// Largest deviation count allowed for `reference_count` previous assignments.
int deviation_budget(double rho, int reference_count);

/// Deviation-budget check; emits a C18 row when the number of deviating
/// patients exceeds rho times the previous overlap assignments.
std::vector<Violation> check_rolling(const Instance& instance, const Schedule& schedule, const Schedule& prev,
                                     double rho);

struct BlockLoad {
  int room = 0;
  int block = 0;
  int specialty = 0;
  bool nonelective = false;
  int count = 0;
  double q95_hours = 0.0;
  double length_hours = 0.0;
  double overtime_hours = 0.0;
  bool solo_oversize = false;
};

struct HoursReport {
  std::vector<BlockLoad> blocks;  // only blocks with patients or reservations
  std::vector<double> weekly_overtime;
  double total_q95_hours = 0.0;
  double total_overtime_hours = 0.0;

  double overtime_fraction() const { return total_q95_hours > 0 ? total_overtime_hours / total_q95_hours : 0.0; }
};

/// q95 workload and overtime per block: elective blocks use the elective
/// durations of their patients, reserved blocks the non-elective durations.
HoursReport scheduled_hours(const Instance& instance, const Schedule& schedule, const CapacityTable& capacities);

}  // namespace ots
