#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace ots {

/// One nonzero entry of X, Y or Z: (specialty|surgeon|patient, OR, block).
struct Assignment {
  int entity = 0;
  int room = 0;
  int block = 0;
  auto operator<=>(const Assignment&) const = default;
};

/// Decision variables in sparse form. Absent keys are zero.
struct Schedule {
  std::set<Assignment> specialty_assign;       // X
  std::set<Assignment> surgeon_assign;         // Y
  std::set<Assignment> patient_assign;         // Z
  std::map<Assignment, int> nonelective_reserve;  // Psi, keyed by (specialty, OR, block)

  bool operator==(const Schedule&) const = default;

  /// Order-independent digest of the full contents.
  std::uint64_t content_hash() const;
};

/// Objective: number of elective patients treated.
inline int objective(const Schedule& schedule) { return static_cast<int>(schedule.patient_assign.size()); }

enum class ConstraintId { C2, C3, C4, C5, C6, C7, C8, C9, C10, C11, C12, C13, C14, C15, C16, C17, C18, Solo };

std::string to_string(ConstraintId id);

struct Violation {
  ConstraintId constraint_id = ConstraintId::C2;
  std::vector<int> indices;
  std::string detail;

  // Detail text is diagnostic only.
  bool operator==(const Violation& o) const { return constraint_id == o.constraint_id && indices == o.indices; }
  auto operator<=>(const Violation& o) const {
    if (auto c = constraint_id <=> o.constraint_id; c != 0) return c;
    return indices <=> o.indices;
  }
};

}  // namespace ots
