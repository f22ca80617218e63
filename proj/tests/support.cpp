#include "support.hpp"

#include "ots/generator.hpp"

namespace support {

const World& default_world() {
  static const World world = [] {
    World w;
    w.instance = ots::generate(ots::GeneratorConfig{});
    w.caps = ots::compute_table(w.instance);
    w.baseline = ots::solve_baseline(w.instance, w.caps);
    return w;
  }();
  return world;
}

ots::Instance mini_instance() {
  auto inst = ots::Instance::empty(2, 4, 2, 2, 1);
  inst.max_nonelective_per_block = 6;
  inst.max_elective_per_block = 12;
  inst.weekend_or_limit = 1;
  for (int h = 0; h < 2; ++h) {
    inst.surgeon_specialty.set(h, h, true);
    for (int t = 0; t < inst.num_blocks; ++t)
      inst.surgeon_available.set(h, t, inst.day_of(t) < inst.calendar.weekdays);
  }
  for (int r = 0; r < 2; ++r)
    for (int s = 0; s < 2; ++s) inst.or_equipped.set(r, s, true);
  for (int p = 0; p < 4; ++p) {
    inst.can_treat.set(p, p / 2, true);
    inst.patient_specialty.set(p, p / 2, true);
    inst.patient_ids[p] = 100 + p;
  }
  inst.elective_durations.assign(2, {0.5, 0.3});
  inst.finalize();
  return inst;
}

ots::CapacityTable mini_caps() {
  ots::SpecialtyCapacity c;
  c.elective_full = 3;
  c.elective_half = 1;
  c.nonelective_full = 2;
  c.nonelective_half = 1;
  return ots::table_from_counts({c, c});
}

void open_cell(ots::Schedule& s, int specialty, int surgeon, int room, int block) {
  s.specialty_assign.insert({specialty, room, block});
  if (surgeon >= 0) s.surgeon_assign.insert({surgeon, room, block});
}

void put_patient(ots::Schedule& s, int patient, int room, int block) { s.patient_assign.insert({patient, room, block}); }

}  // namespace support
