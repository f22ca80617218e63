#pragma once

#include <stdexcept>
#include <vector>

#include "ots/capacity.hpp"
#include "ots/instance.hpp"
#include "ots/schedule.hpp"

namespace ots {

/// Weekly non-elective reservations (Psi with the X and Y entries backing them).
struct BaselinePlan {
  Schedule schedule;

  /// Number of reserved (specialty, OR, block) entries: the quantity minimised.
  int objective() const { return static_cast<int>(schedule.specialty_assign.size()); }
  /// Total non-elective places reserved in `week`.
  int reserved_places(const Instance& instance, int week) const;
};

struct Shortfall {
  int week = 0;
  int specialty = 0;
  int missing = 0;
};

class BaselineError : public std::runtime_error {
 public:
  explicit BaselineError(std::vector<Shortfall> shortfalls);
  const std::vector<Shortfall>& shortfalls() const { return shortfalls_; }

 private:
  std::vector<Shortfall> shortfalls_;
};

/// Greedy reservation of the highest-capacity blocks per specialty followed by
/// drop / merge improvement. Deterministic. Throws BaselineError when some
/// weekly target cannot be met.
BaselinePlan solve_baseline(const Instance& instance, const CapacityTable& capacities);

/// Repeats week `source_week` of `plan` (built for `source`) over every week
/// of `target`, which must share the calendar and OR/surgeon sets.
BaselinePlan tile_baseline(const BaselinePlan& plan, const Instance& source, int source_week, const Instance& target);

}  // namespace ots
