#include "ots/plan.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace ots {

Plan::Plan(const Instance& instance, const CapacityTable& capacities)
    : instance_(&instance), capacities_(&capacities) {
  const int P = instance.num_patients;
  cells_.resize(static_cast<std::size_t>(instance.num_ors) * instance.num_blocks);
  patient_cell_.assign(P, -1);
  load_.assign(static_cast<std::size_t>(instance.num_surgeons) * instance.num_blocks, 0);
  unscheduled_pos_.assign(P, -1);
  scheduled_pos_.assign(P, -1);
  open_pos_.assign(cells_.size(), -1);
  for (int p = 0; p < P; ++p) pool_insert(unscheduled_, unscheduled_pos_, p);
  by_surgeon_.assign(instance.num_surgeons, {});
  for (int p = 0; p < P; ++p)
    for (int h : instance.patient_surgeons[p]) by_surgeon_[h].push_back(p);
  for (auto& list : by_surgeon_)
    std::stable_sort(list.begin(), list.end(), [&](int a, int b) { return priority(a) < priority(b); });
}

void Plan::pool_insert(std::vector<int>& pool, std::vector<int>& pos, int v) {
  pos[v] = static_cast<int>(pool.size());
  pool.push_back(v);
}

void Plan::pool_erase(std::vector<int>& pool, std::vector<int>& pos, int v) {
  const int i = pos[v];
  const int last = pool.back();
  pool[i] = last;
  pos[last] = i;
  pool.pop_back();
  pos[v] = -1;
}

int Plan::elective_capacity(int specialty, int block) const {
  return capacities_->elective(specialty, instance_->is_full_day[block]);
}

int Plan::elective_capacity(int c) const {
  const auto& cell = cells_[c];
  return cell.open() ? elective_capacity(cell.specialty, block_of(c)) : 0;
}

bool Plan::surgeon_free(int h, int t) const {
  if (surgeon_load(h, t) != 0) return false;
  for (int tau : instance_->overlapping[t])
    if (surgeon_load(h, tau) != 0) return false;
  return true;
}

bool Plan::room_free(int c) const {
  if (cells_[c].open()) return false;
  const int r = room_of(c);
  for (int tau : instance_->overlapping[block_of(c)])
    if (cells_[cell_id(r, tau)].open()) return false;
  return true;
}

bool Plan::can_open(int c, int h) const {
  const int t = block_of(c);
  const int s = instance_->surgeon_specialty_of[h];
  return instance_->surgeon_available(h, t) && instance_->or_equipped(room_of(c), s) && surgeon_free(h, t) &&
         room_free(c);
}

bool Plan::compatible(int p, int c) const {
  const auto& cell = cells_[c];
  return cell.surgeon >= 0 && instance_->patient_specialty_of[p] == cell.specialty &&
         instance_->can_treat(p, cell.surgeon);
}

void Plan::open(int c, int h) {
  auto& cell = cells_[c];
  cell.surgeon = h;
  cell.specialty = instance_->surgeon_specialty_of[h];
  ++load_[static_cast<std::size_t>(h) * instance_->num_blocks + block_of(c)];
  pool_insert(open_cells_, open_pos_, c);
  ++version_;
}

void Plan::close(int c) {
  auto& cell = cells_[c];
  if (cell.surgeon >= 0) --load_[static_cast<std::size_t>(cell.surgeon) * instance_->num_blocks + block_of(c)];
  cell.surgeon = -1;
  cell.specialty = -1;
  if (open_pos_[c] >= 0) pool_erase(open_cells_, open_pos_, c);
  ++version_;
}

bool Plan::deviated(int p) const {
  const int ref = reference_block(p);
  if (ref < 0) return false;
  const int c = patient_cell_[p];
  return c < 0 || block_of(c) != ref;
}

void Plan::add(int p, int c) {
  const bool before = deviated(p);
  cells_[c].patients.push_back(p);
  patient_cell_[p] = c;
  pool_erase(unscheduled_, unscheduled_pos_, p);
  pool_insert(scheduled_, scheduled_pos_, p);
  deviations_ += static_cast<int>(deviated(p)) - static_cast<int>(before);
  ++version_;
}

void Plan::remove(int p) {
  const bool before = deviated(p);
  auto& list = cells_[patient_cell_[p]].patients;
  list.erase(std::find(list.begin(), list.end(), p));
  patient_cell_[p] = -1;
  pool_erase(scheduled_, scheduled_pos_, p);
  pool_insert(unscheduled_, unscheduled_pos_, p);
  deviations_ += static_cast<int>(deviated(p)) - static_cast<int>(before);
  ++version_;
}

void Plan::reserve(int c, int h, int count) {
  auto& cell = cells_[c];
  cell.surgeon = h;
  cell.specialty = instance_->surgeon_specialty_of[h];
  cell.reserve = count;
  cell.fixed = true;
  ++load_[static_cast<std::size_t>(h) * instance_->num_blocks + block_of(c)];
  ++version_;
}

void Plan::unreserve(int c) {
  auto& cell = cells_[c];
  --load_[static_cast<std::size_t>(cell.surgeon) * instance_->num_blocks + block_of(c)];
  cell = Cell{};
  ++version_;
}

bool Plan::cell_feasible(int c) const {
  const auto& cell = cells_[c];
  const int r = room_of(c);
  const int t = block_of(c);
  const auto& inst = *instance_;
  if (!cell.open()) return cell.patients.empty() && cell.reserve == 0 && cell.surgeon < 0;
  if (!inst.or_equipped(r, cell.specialty)) return false;
  for (int tau : inst.overlapping[t])
    if (cells_[cell_id(r, tau)].open()) return false;
  if (cell.surgeon >= 0) {
    const int h = cell.surgeon;
    if (inst.surgeon_specialty_of[h] != cell.specialty || !inst.surgeon_available(h, t)) return false;
    if (surgeon_load(h, t) != 1) return false;
    for (int tau : inst.overlapping[t])
      if (surgeon_load(h, tau) != 0) return false;
  }
  if (cell.reserve > 0) {
    if (cell.surgeon < 0 || !cell.patients.empty()) return false;
    if (cell.reserve > capacities_->nonelective(cell.specialty, inst.is_full_day[t])) return false;
    if (cell.reserve > inst.max_nonelective_per_block) return false;
  }
  if (!cell.patients.empty()) {
    if (cell.surgeon < 0 || inst.is_weekend[t]) return false;
    if (static_cast<int>(cell.patients.size()) > elective_capacity(c)) return false;
    for (int p : cell.patients)
      if (!compatible(p, c)) return false;
  }
  return true;
}

void Plan::set_reference(std::vector<int> reference_block, int budget) {
  reference_ = std::move(reference_block);
  reference_.resize(instance_->num_patients, -1);
  budget_ = budget;
  deviations_ = 0;
  for (int p = 0; p < instance_->num_patients; ++p) deviations_ += deviated(p) ? 1 : 0;
}

Plan Plan::from_schedule(const Instance& instance, const CapacityTable& capacities, const Schedule& schedule) {
  Plan plan(instance, capacities);
  const int R = instance.num_ors;
  const int T = instance.num_blocks;
  auto check = [&](const Assignment& a, int limit) {
    if (a.entity < 0 || a.entity >= limit || a.room < 0 || a.room >= R || a.block < 0 || a.block >= T)
      throw std::invalid_argument("schedule entry out of bounds");
  };
  std::vector<int> spec(static_cast<std::size_t>(R) * T, -1);
  for (const auto& a : schedule.specialty_assign) {
    check(a, instance.num_specialties);
    auto& slot = spec[plan.cell_id(a.room, a.block)];
    if (slot >= 0) throw std::invalid_argument("several specialties share one OR block");
    slot = a.entity;
  }
  for (const auto& a : schedule.surgeon_assign) {
    check(a, instance.num_surgeons);
    const int c = plan.cell_id(a.room, a.block);
    if (plan.cells_[c].surgeon >= 0) throw std::invalid_argument("several surgeons share one OR block");
    if (spec[c] != instance.surgeon_specialty_of[a.entity])
      throw std::invalid_argument("surgeon assigned without matching specialty");
    plan.open(c, a.entity);
  }
  for (int c = 0; c < plan.num_cells(); ++c)
    if (spec[c] >= 0 && plan.cells_[c].surgeon < 0) {
      // Specialty without surgeon: representable, kept as an open cell.
      plan.cells_[c].specialty = spec[c];
      pool_insert(plan.open_cells_, plan.open_pos_, c);
    }
  for (const auto& [a, n] : schedule.nonelective_reserve) {
    check(a, instance.num_specialties);
    if (n <= 0) continue;
    const int c = plan.cell_id(a.room, a.block);
    auto& cell = plan.cells_[c];
    if (cell.specialty != a.entity || cell.reserve > 0)
      throw std::invalid_argument("reservation does not match the OR block specialty");
    cell.reserve = n;
    cell.fixed = true;
    if (plan.open_pos_[c] >= 0) pool_erase(plan.open_cells_, plan.open_pos_, c);
  }
  for (const auto& a : schedule.patient_assign) {
    check(a, instance.num_patients);
    if (plan.patient_cell_[a.entity] >= 0) throw std::invalid_argument("patient scheduled twice");
    const int c = plan.cell_id(a.room, a.block);
    if (!plan.cells_[c].open()) throw std::invalid_argument("patient assigned to an OR block without specialty");
    plan.add(a.entity, c);
  }
  plan.version_ = 0;
  return plan;
}

Schedule Plan::to_schedule() const {
  Schedule s;
  for (int c = 0; c < num_cells(); ++c) {
    const auto& cell = cells_[c];
    if (!cell.open()) continue;
    const int r = room_of(c);
    const int t = block_of(c);
    s.specialty_assign.insert({cell.specialty, r, t});
    if (cell.surgeon >= 0) s.surgeon_assign.insert({cell.surgeon, r, t});
    if (cell.reserve > 0) s.nonelective_reserve[{cell.specialty, r, t}] = cell.reserve;
    for (int p : cell.patients) s.patient_assign.insert({p, r, t});
  }
  return s;
}

}  // namespace ots
