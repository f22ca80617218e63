#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ots {

/// Dense row-major 0/1 matrix used for every incidence parameter of the model.
class BoolMatrix {
 public:
  BoolMatrix() = default;
  BoolMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  bool operator()(int r, int c) const { return data_[index(r, c)] != 0; }
  void set(int r, int c, bool value) { data_[index(r, c)] = value ? 1 : 0; }

  int row_sum(int r) const;
  bool operator==(const BoolMatrix&) const = default;

 private:
  std::size_t index(int r, int c) const { return static_cast<std::size_t>(r) * cols_ + c; }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint8_t> data_;
};

struct LognormalParams {
  double meanlog = 0.0;
  double sdlog = 0.0;
  bool operator==(const LognormalParams&) const = default;
};

enum class BlockKind { Morning = 0, Afternoon = 1, FullDay = 2 };

/// Weekly calendar. Every day contributes a morning, an afternoon and a
/// full-day block (in that order); weekdays come before weekend days.
struct Calendar {
  int weekdays = 5;
  int weekend_days = 2;
  double full_day_hours = 10.0;
  double half_day_hours = 5.0;

  static constexpr int kBlocksPerDay = 3;
  int days_per_week() const { return weekdays + weekend_days; }
  int blocks_per_week() const { return days_per_week() * kBlocksPerDay; }
  bool operator==(const Calendar&) const = default;
};

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Elective waiting-list entry; used when an instance is rebuilt for a new
/// planning week.
struct PatientRecord {
  std::int64_t id = 0;
  int specialty = 0;
  std::vector<int> surgeons;
  int urgency = 3;
  double wait_days = 0.0;
  bool operator==(const PatientRecord&) const = default;
};

/// All sets and parameters of the integrated master-surgical-schedule /
/// case-assignment model. Built through `finalize()`, which derives the
/// calendar-dependent matrices, and immutable afterwards.
struct Instance {
  int num_surgeons = 0;
  int num_patients = 0;
  int num_specialties = 0;
  int num_ors = 0;
  int num_blocks = 0;
  int num_weeks = 0;

  int max_nonelective_per_block = 0;  // M_psi
  int max_elective_per_block = 0;     // M_p
  int weekend_or_limit = 0;           // xi

  Calendar calendar;

  BoolMatrix can_treat;          // patient x surgeon
  BoolMatrix surgeon_available;  // surgeon x block
  BoolMatrix surgeon_specialty;  // surgeon x specialty
  BoolMatrix patient_specialty;  // patient x specialty
  BoolMatrix or_equipped;        // OR x specialty

  // Derived from the calendar by finalize().
  BoolMatrix non_overlap;  // block x block, 1 when the blocks do not overlap
  std::vector<std::uint8_t> is_full_day;
  std::vector<std::uint8_t> is_weekend;
  BoolMatrix block_week;  // block x week

  std::vector<int> weekly_nonelective_target;
  std::vector<LognormalParams> elective_durations;
  // Empty means non-elective durations follow the elective ones.
  std::vector<LognormalParams> nonelective_durations;

  std::vector<int> patient_urgency;
  std::vector<double> patient_wait_days;
  std::vector<std::int64_t> patient_ids;

  // ---- derived lookups (filled by finalize) ----
  std::vector<int> surgeon_specialty_of;
  std::vector<int> patient_specialty_of;
  std::vector<std::vector<int>> patient_surgeons;
  std::vector<std::vector<int>> overlapping;  // tau != t with non_overlap(t, tau) == 0

  /// Allocates every matrix for the given sizes and derives the calendar
  /// parameters. Patient and surgeon data are left zeroed.
  static Instance empty(int surgeons, int patients, int specialties, int ors, int weeks, Calendar calendar = {});

  /// Recomputes calendar matrices and lookup tables; throws InstanceError
  /// when a structural invariant does not hold.
  void finalize();

  /// Human-readable list of invariant breaches; empty when the instance is sound.
  std::vector<std::string> invariant_problems() const;

  int blocks_per_week() const { return calendar.blocks_per_week(); }
  int week_of(int block) const { return block / blocks_per_week(); }
  int day_of(int block) const { return (block % blocks_per_week()) / Calendar::kBlocksPerDay; }
  BlockKind kind_of(int block) const { return static_cast<BlockKind>(block % Calendar::kBlocksPerDay); }
  int block_at(int week, int day, BlockKind kind) const {
    return week * blocks_per_week() + day * Calendar::kBlocksPerDay + static_cast<int>(kind);
  }
  double block_hours(int block) const {
    return is_full_day[block] ? calendar.full_day_hours : calendar.half_day_hours;
  }
  const LognormalParams& nonelective_params(int s) const {
    return nonelective_durations.empty() ? elective_durations[s] : nonelective_durations[s];
  }

  PatientRecord patient_record(int p) const;
  std::vector<PatientRecord> patient_records() const;
  int patient_index(std::int64_t id) const;  // -1 when unknown

  bool operator==(const Instance& other) const;
};

/// Copy of `base` with its waiting list replaced by `patients`.
Instance with_patients(const Instance& base, const std::vector<PatientRecord>& patients);

/// Copy of `base` covering `weeks` weeks starting at absolute week `first_week`;
/// surgeon availability of week k is taken from base week k mod base.num_weeks.
Instance with_horizon(const Instance& base, int first_week, int weeks);

}  // namespace ots
