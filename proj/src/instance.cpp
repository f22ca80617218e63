#include "ots/instance.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ots {

int BoolMatrix::row_sum(int r) const {
  int sum = 0;
  for (int c = 0; c < cols_; ++c) sum += data_[index(r, c)];
  return sum;
}

Instance Instance::empty(int surgeons, int patients, int specialties, int ors, int weeks, Calendar calendar) {
  Instance inst;
  inst.num_surgeons = surgeons;
  inst.num_patients = patients;
  inst.num_specialties = specialties;
  inst.num_ors = ors;
  inst.num_weeks = weeks;
  inst.calendar = calendar;
  inst.num_blocks = weeks * calendar.blocks_per_week();
  inst.can_treat = BoolMatrix(patients, surgeons);
  inst.surgeon_available = BoolMatrix(surgeons, inst.num_blocks);
  inst.surgeon_specialty = BoolMatrix(surgeons, specialties);
  inst.patient_specialty = BoolMatrix(patients, specialties);
  inst.or_equipped = BoolMatrix(ors, specialties);
  inst.weekly_nonelective_target.assign(specialties, 0);
  inst.elective_durations.assign(specialties, LognormalParams{0.0, 0.0});
  inst.patient_urgency.assign(patients, 3);
  inst.patient_wait_days.assign(patients, 0.0);
  inst.patient_ids.resize(patients);
  std::iota(inst.patient_ids.begin(), inst.patient_ids.end(), std::int64_t{0});
  return inst;
}

namespace {

void derive_calendar(Instance& inst) {
  const int bpw = inst.blocks_per_week();
  inst.num_blocks = inst.num_weeks * bpw;
  const int T = inst.num_blocks;
  inst.is_full_day.assign(T, 0);
  inst.is_weekend.assign(T, 0);
  inst.block_week = BoolMatrix(T, inst.num_weeks);
  inst.non_overlap = BoolMatrix(T, T);
  for (int t = 0; t < T; ++t) {
    inst.is_full_day[t] = inst.kind_of(t) == BlockKind::FullDay;
    inst.is_weekend[t] = inst.day_of(t) >= inst.calendar.weekdays;
    inst.block_week.set(t, inst.week_of(t), true);
  }
  for (int t = 0; t < T; ++t) {
    for (int tau = 0; tau < T; ++tau) {
      bool overlap = false;
      if (t == tau) {
        overlap = true;
      } else if (inst.week_of(t) == inst.week_of(tau) && inst.day_of(t) == inst.day_of(tau)) {
        overlap = inst.is_full_day[t] || inst.is_full_day[tau];
      }
      inst.non_overlap.set(t, tau, !overlap);
    }
  }
  inst.overlapping.assign(T, {});
  for (int t = 0; t < T; ++t)
    for (int tau = 0; tau < T; ++tau)
      if (tau != t && !inst.non_overlap(t, tau)) inst.overlapping[t].push_back(tau);
}

}  // namespace

void Instance::finalize() {
  if (num_weeks < 1) throw InstanceError("instance needs at least one week");
  if (calendar.weekdays < 0 || calendar.weekend_days < 0 || calendar.days_per_week() < 1)
    throw InstanceError("calendar needs at least one day");
  derive_calendar(*this);

  auto check_dims = [](const BoolMatrix& m, int r, int c, const char* name) {
    if (m.rows() != r || m.cols() != c) {
      std::ostringstream os;
      os << name << " has shape " << m.rows() << "x" << m.cols() << ", expected " << r << "x" << c;
      throw InstanceError(os.str());
    }
  };
  check_dims(can_treat, num_patients, num_surgeons, "can_treat");
  check_dims(surgeon_available, num_surgeons, num_blocks, "surgeon_available");
  check_dims(surgeon_specialty, num_surgeons, num_specialties, "surgeon_specialty");
  check_dims(patient_specialty, num_patients, num_specialties, "patient_specialty");
  check_dims(or_equipped, num_ors, num_specialties, "or_equipped");
  if (static_cast<int>(weekly_nonelective_target.size()) != num_specialties ||
      static_cast<int>(elective_durations.size()) != num_specialties ||
      (!nonelective_durations.empty() && static_cast<int>(nonelective_durations.size()) != num_specialties))
    throw InstanceError("per-specialty vectors must have one entry per specialty");
  if (static_cast<int>(patient_urgency.size()) != num_patients ||
      static_cast<int>(patient_wait_days.size()) != num_patients ||
      static_cast<int>(patient_ids.size()) != num_patients)
    throw InstanceError("per-patient vectors must have one entry per patient");

  surgeon_specialty_of.assign(num_surgeons, -1);
  for (int h = 0; h < num_surgeons; ++h)
    for (int s = 0; s < num_specialties; ++s)
      if (surgeon_specialty(h, s)) surgeon_specialty_of[h] = s;
  patient_specialty_of.assign(num_patients, -1);
  patient_surgeons.assign(num_patients, {});
  for (int p = 0; p < num_patients; ++p) {
    for (int s = 0; s < num_specialties; ++s)
      if (patient_specialty(p, s)) patient_specialty_of[p] = s;
    for (int h = 0; h < num_surgeons; ++h)
      if (can_treat(p, h)) patient_surgeons[p].push_back(h);
  }

  auto problems = invariant_problems();
  if (!problems.empty()) throw InstanceError("invalid instance: " + problems.front());
}

std::vector<std::string> Instance::invariant_problems() const {
  std::vector<std::string> out;
  auto add = [&](auto&&... parts) {
    std::ostringstream os;
    (os << ... << parts);
    out.push_back(os.str());
  };
  for (int p = 0; p < num_patients; ++p) {
    if (patient_specialty.row_sum(p) != 1) add("patient ", p, " must have exactly one specialty");
    if (can_treat.row_sum(p) < 1) add("patient ", p, " has no compatible surgeon");
    if (patient_urgency[p] < 1 || patient_urgency[p] > 3) add("patient ", p, " urgency must be 1, 2 or 3");
    if (patient_wait_days[p] < 0) add("patient ", p, " has negative wait days");
  }
  for (int h = 0; h < num_surgeons; ++h)
    if (surgeon_specialty.row_sum(h) != 1) add("surgeon ", h, " must belong to exactly one specialty");
  for (int p = 0; p < num_patients; ++p)
    for (int h = 0; h < num_surgeons; ++h)
      if (can_treat(p, h)) {
        const int s = h < static_cast<int>(surgeon_specialty_of.size()) ? surgeon_specialty_of[h] : -1;
        if (s < 0 || !patient_specialty(p, s))
          add("patient ", p, " and surgeon ", h, " are compatible but differ in specialty");
      }
  for (int t = 0; t < num_blocks; ++t) {
    if (non_overlap(t, t)) add("block ", t, " must overlap itself");
    if (block_week.row_sum(t) != 1) add("block ", t, " must belong to exactly one week");
    for (int tau = t + 1; tau < num_blocks; ++tau)
      if (non_overlap(t, tau) != non_overlap(tau, t)) add("overlap matrix not symmetric at ", t, ",", tau);
  }
  for (int s = 0; s < num_specialties; ++s) {
    if (weekly_nonelective_target[s] < 0) add("specialty ", s, " has a negative non-elective target");
    if (elective_durations[s].sdlog < 0) add("specialty ", s, " has negative sdlog");
  }
  if (calendar.full_day_hours <= 0 || calendar.half_day_hours <= 0) add("block lengths must be positive");
  return out;
}

PatientRecord Instance::patient_record(int p) const {
  return PatientRecord{patient_ids[p], patient_specialty_of[p], patient_surgeons[p], patient_urgency[p],
                       patient_wait_days[p]};
}

std::vector<PatientRecord> Instance::patient_records() const {
  std::vector<PatientRecord> out;
  out.reserve(num_patients);
  for (int p = 0; p < num_patients; ++p) out.push_back(patient_record(p));
  return out;
}

int Instance::patient_index(std::int64_t id) const {
  auto it = std::find(patient_ids.begin(), patient_ids.end(), id);
  return it == patient_ids.end() ? -1 : static_cast<int>(it - patient_ids.begin());
}

bool Instance::operator==(const Instance& o) const {
  return num_surgeons == o.num_surgeons && num_patients == o.num_patients && num_specialties == o.num_specialties &&
         num_ors == o.num_ors && num_blocks == o.num_blocks && num_weeks == o.num_weeks &&
         max_nonelective_per_block == o.max_nonelective_per_block &&
         max_elective_per_block == o.max_elective_per_block && weekend_or_limit == o.weekend_or_limit &&
         calendar == o.calendar && can_treat == o.can_treat && surgeon_available == o.surgeon_available &&
         surgeon_specialty == o.surgeon_specialty && patient_specialty == o.patient_specialty &&
         or_equipped == o.or_equipped && non_overlap == o.non_overlap && is_full_day == o.is_full_day &&
         is_weekend == o.is_weekend && block_week == o.block_week &&
         weekly_nonelective_target == o.weekly_nonelective_target && elective_durations == o.elective_durations &&
         nonelective_durations == o.nonelective_durations && patient_urgency == o.patient_urgency &&
         patient_wait_days == o.patient_wait_days && patient_ids == o.patient_ids;
}

Instance with_patients(const Instance& base, const std::vector<PatientRecord>& patients) {
  Instance inst = base;
  const int P = static_cast<int>(patients.size());
  inst.num_patients = P;
  inst.can_treat = BoolMatrix(P, base.num_surgeons);
  inst.patient_specialty = BoolMatrix(P, base.num_specialties);
  inst.patient_urgency.resize(P);
  inst.patient_wait_days.resize(P);
  inst.patient_ids.resize(P);
  for (int p = 0; p < P; ++p) {
    const auto& rec = patients[p];
    inst.patient_specialty.set(p, rec.specialty, true);
    for (int h : rec.surgeons) inst.can_treat.set(p, h, true);
    inst.patient_urgency[p] = rec.urgency;
    inst.patient_wait_days[p] = rec.wait_days;
    inst.patient_ids[p] = rec.id;
  }
  inst.finalize();
  return inst;
}

Instance with_horizon(const Instance& base, int first_week, int weeks) {
  if (weeks < 1) throw InstanceError("horizon must cover at least one week");
  Instance inst = base;
  inst.num_weeks = weeks;
  const int bpw = base.blocks_per_week();
  inst.surgeon_available = BoolMatrix(base.num_surgeons, weeks * bpw);
  for (int w = 0; w < weeks; ++w) {
    const int src_week = (first_week + w) % base.num_weeks;
    for (int h = 0; h < base.num_surgeons; ++h)
      for (int b = 0; b < bpw; ++b)
        inst.surgeon_available.set(h, w * bpw + b, base.surgeon_available(h, src_week * bpw + b));
  }
  inst.finalize();
  return inst;
}

}  // namespace ots
