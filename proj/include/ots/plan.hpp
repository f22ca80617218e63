#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ots/capacity.hpp"
#include "ots/instance.hpp"
#include "ots/schedule.hpp"

namespace ots {

/// Dense, mutable view of a schedule used by every heuristic. Each (OR, block)
/// cell holds at most one specialty and surgeon; elective patients and
/// non-elective reservations never share a cell. Cells carrying a
/// reservation are `fixed` and never touched by the elective search.
///
/// Mutators perform bookkeeping only; callers verify the touched cells with
/// `cell_feasible` (the neighbourhood layer does this for every move).
class Plan {
 public:
  struct Cell {
    int surgeon = -1;
    int specialty = -1;
    int reserve = 0;
    bool fixed = false;
    std::vector<int> patients;

    bool open() const { return specialty >= 0; }
  };

  Plan(const Instance& instance, const CapacityTable& capacities);

  /// Throws std::invalid_argument when the schedule puts several specialties
  /// or surgeons in one cell, or patients twice (not representable).
  static Plan from_schedule(const Instance& instance, const CapacityTable& capacities, const Schedule& schedule);
  Schedule to_schedule() const;

  const Instance& instance() const { return *instance_; }
  const CapacityTable& capacities() const { return *capacities_; }

  int num_cells() const { return static_cast<int>(cells_.size()); }
  int cell_id(int room, int block) const { return room * instance_->num_blocks + block; }
  int room_of(int cell) const { return cell / instance_->num_blocks; }
  int block_of(int cell) const { return cell % instance_->num_blocks; }
  const Cell& cell(int c) const { return cells_[c]; }
  int patient_cell(int p) const { return patient_cell_[p]; }
  int objective() const { return static_cast<int>(scheduled_.size()); }

  /// Elective capacity of an open cell for its specialty.
  int elective_capacity(int c) const;
  int elective_capacity(int specialty, int block) const;

  int surgeon_load(int h, int t) const { return load_[static_cast<std::size_t>(h) * instance_->num_blocks + t]; }
  /// Surgeon has no booking at t nor at any block overlapping t.
  bool surgeon_free(int h, int t) const;
  /// Neither the cell nor any overlapping cell of the same OR is open.
  bool room_free(int c) const;
  /// Opening cell c for surgeon h would be feasible (availability, equipment,
  /// free surgeon and OR).
  bool can_open(int c, int h) const;
  bool compatible(int p, int c) const;

  void open(int c, int h);
  void close(int c);
  void add(int p, int c);
  void remove(int p);
  /// Non-elective reservation: opens a fixed cell for surgeon h holding `count` places.
  void reserve(int c, int h, int count);
  void unreserve(int c);

  /// Local check of every model row touching the cell.
  bool cell_feasible(int c) const;

  const std::vector<int>& unscheduled() const { return unscheduled_; }
  const std::vector<int>& scheduled() const { return scheduled_; }
  const std::vector<int>& open_cells() const { return open_cells_; }  // open, not fixed
  /// Patients compatible with surgeon h, in priority order (urgency
  /// ascending, then wait-days descending, then index).
  const std::vector<int>& surgeon_patients(int h) const { return by_surgeon_[h]; }
  /// Priority key: lower is more urgent.
  std::pair<int, double> priority(int p) const {
    return {instance_->patient_urgency[p], -instance_->patient_wait_days[p]};
  }

  /// Rolling-horizon reference: reference_block[p] is the block the patient
  /// held in the previous schedule (-1 for none). Moves keep
  /// deviations() <= deviation_budget().
  void set_reference(std::vector<int> reference_block, int budget);
  int reference_block(int p) const { return reference_.empty() ? -1 : reference_[p]; }
  int deviations() const { return deviations_; }
  int deviation_budget() const { return budget_; }
  bool within_budget() const { return deviations_ <= budget_; }

  /// Cells before `block` may not be changed by any move.
  void freeze_before(int block) { frozen_before_ = block; }
  bool frozen(int c) const { return block_of(c) < frozen_before_; }

  std::uint64_t version() const { return version_; }
  void restore_version(std::uint64_t v) { version_ = v; }

 private:
  static void pool_insert(std::vector<int>& pool, std::vector<int>& pos, int v);
  static void pool_erase(std::vector<int>& pool, std::vector<int>& pos, int v);
  bool deviated(int p) const;

  const Instance* instance_;
  const CapacityTable* capacities_;
  std::vector<Cell> cells_;
  std::vector<int> patient_cell_;
  std::vector<int> load_;
  std::vector<int> unscheduled_, unscheduled_pos_;
  std::vector<int> scheduled_, scheduled_pos_;
  std::vector<int> open_cells_, open_pos_;
  std::vector<std::vector<int>> by_surgeon_;
  std::vector<int> reference_;
  int deviations_ = 0;
  int budget_ = 0;
  int frozen_before_ = 0;
  std::uint64_t version_ = 0;
};

}  // namespace ots
