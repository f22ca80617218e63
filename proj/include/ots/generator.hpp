#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "ots/capacity.hpp"
#include "ots/instance.hpp"

namespace ots {

/// Per-specialty knobs of the synthetic hospital.
struct SpecialtyProfile {
  LognormalParams durations;         // elective surgery length, hours
  LognormalParams nonelective;       // non-elective surgery length, hours
  int surgeons = 1;
  double patient_share = 0.0;        // relative weight in the waiting list and arrivals
  int weekly_nonelective_target = 0;
  int weekend_surgeons = 0;          // surgeons given weekend availability
};

struct ArrivalModel {
  std::vector<double> weekly_rates;               // expected arrivals per specialty per week
  std::array<double, 3> urgency_mix{0.1, 0.4, 0.5};
  std::array<double, 3> urgency_wait_days{30, 90, 360};  // target wait per category
  double second_surgeon_probability = 0.15;
  double cancellation_probability = 0.005;        // per waiting patient per week
};

struct GeneratorConfig {
  int surgeons = 108;
  int ors = 21;
  int patients = 2871;
  int weeks = 1;
  int m_psi = 6;
  int m_p = 12;
  int xi = 4;
  Calendar calendar;
  std::vector<SpecialtyProfile> specialties;  // empty: default catalogue
  double elective_length_factor = 1.25;       // used only for the default catalogue
  double yearly_arrivals = 15000.0;
  int min_weekdays_available = 1;
  int max_weekdays_available = 3;
  double full_day_probability = 0.5;
  double or_equipment_density = 0.2;
  int min_ors_per_specialty = 3;
  ArrivalModel arrivals;  // weekly_rates derived from yearly_arrivals when empty
  QuantileOptions quantiles;
  std::uint64_t seed = 1;
};

/// 27-specialty catalogue: short high-volume eye surgery (eight per full day),
/// a transplant-like service whose single non-elective case exceeds a full
/// day, and general specialties in between.
/// Elective means are the catalogue means times `elective_length_factor`;
/// non-elective lengths use the catalogue means.
std::vector<SpecialtyProfile> default_catalogue(double elective_length_factor = 1.25);

/// Catalogue with defaults filled in and arrival rates derived.
GeneratorConfig resolved(GeneratorConfig config);

/// Deterministic per seed. Specialty duration parameters whose capacities
/// break kappa+ >= 2 kappa- are tightened (bounded retries) before failing
/// with CapacityError.
Instance generate(const GeneratorConfig& config);

/// New waiting-list entries for one week: Poisson count per specialty,
/// urgency drawn from the mix, wait-days 0, surgeons from the specialty
/// roster of `instance`. Ids continue from `next_id`.
std::vector<PatientRecord> arrivals_stream(const ArrivalModel& model, const Instance& instance, std::int64_t& next_id,
                                           std::mt19937_64& rng);

/// Small random instance for exhaustive checks: one week, `ors` ORs, at most
/// `max_patients` patients each with a single named surgeon, no
/// non-elective demand.
Instance generate_tiny(std::uint64_t seed, int ors = 2, int max_patients = 8);

/// Small random instance with non-elective targets only, for the baseline
/// brute force.
Instance generate_tiny_baseline(std::uint64_t seed);

}  // namespace ots
