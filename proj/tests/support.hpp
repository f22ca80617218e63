#pragma once

#include "ots/baseline.hpp"
#include "ots/capacity.hpp"
#include "ots/instance.hpp"
#include "ots/schedule.hpp"

namespace support {

/// Default synthetic hospital (generator seed 1) with its capacity table and
/// weekly baseline; built once per test process.
struct World {
  ots::Instance instance;
  ots::CapacityTable caps;
  ots::BaselinePlan baseline;
};
const World& default_world();

/// Two specialties, two surgeons (surgeon s belongs to specialty s), two ORs
/// equipped for both, one week. Every surgeon is available in every weekday
/// block. Patients 0 and 1 wait for surgeon 0, patients 2 and 3 for surgeon 1.
ots::Instance mini_instance();
/// Capacities for mini_instance: full-day 3, half-day 1 elective places and
/// 2 / 1 non-elective places for both specialties.
ots::CapacityTable mini_caps();

/// Schedule entry helpers.
void open_cell(ots::Schedule& s, int specialty, int surgeon, int room, int block);
void put_patient(ots::Schedule& s, int patient, int room, int block);

}  // namespace support
