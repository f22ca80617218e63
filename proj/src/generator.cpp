#include "ots/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ots {

namespace {

/// Lognormal parameters from the mean surgery length in hours.
LognormalParams from_mean(double mean_hours, double sdlog) {
  return {std::log(mean_hours) - 0.5 * sdlog * sdlog, sdlog};
}

struct Row {
  double mean;
  double sdlog;
  int surgeons;
  double share;
  int target;
  int weekend;
};

// Mean hours, sdlog, surgeons, waiting-list share, weekly non-elective target,
// weekend surgeons.
constexpr Row kCatalogue[] = {
    {1.0, 0.30, 8, 0.120, 2, 1},   {1.5, 0.35, 5, 0.060, 4, 1},   {1.6, 0.40, 5, 0.050, 4, 1},
    {0.8, 0.35, 3, 0.050, 0, 0},   {1.8, 0.40, 6, 0.070, 6, 1},   {1.7, 0.40, 6, 0.070, 8, 2},
    {2.2, 0.40, 10, 0.100, 23, 4}, {2.5, 0.35, 9, 0.100, 8, 2},   {1.8, 0.35, 3, 0.040, 0, 0},
    {3.0, 0.35, 4, 0.030, 6, 2},   {3.2, 0.35, 4, 0.040, 5, 1},   {3.5, 0.30, 3, 0.020, 3, 1},
    {4.0, 0.30, 2, 0.015, 2, 1},   {4.2, 0.30, 4, 0.025, 5, 2},   {3.8, 0.30, 3, 0.020, 2, 1},
    {4.8, 0.25, 3, 0.020, 3, 1},   {3.7, 0.30, 2, 0.015, 2, 1},   {1.4, 0.40, 4, 0.040, 5, 1},
    {2.0, 0.35, 3, 0.025, 3, 1},   {1.2, 0.35, 3, 0.040, 4, 1},   {2.4, 0.30, 2, 0.015, 0, 0},
    {2.6, 0.25, 2, 0.015, 0, 0},   {0.8, 0.35, 3, 0.050, 0, 0},   {1.0, 0.35, 2, 0.030, 0, 0},
    {2.25, 0.40, 5, 0.030, 17, 3}, {3.4, 0.30, 2, 0.020, 2, 1},
};

// Transplant-like service: no elective list, one non-elective case a week
// whose 95th percentile is 11.82 hours.
constexpr double kSoloQ95 = 11.82;
constexpr double kSoloSdlog = 0.2;

std::vector<int> apportion(int total, const std::vector<double>& weights) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<int> out(weights.size(), 0);
  if (sum <= 0) return out;
  std::vector<std::pair<double, int>> rest;
  int used = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = total * weights[i] / sum;
    out[i] = static_cast<int>(std::floor(exact));
    used += out[i];
    rest.emplace_back(-(exact - out[i]), static_cast<int>(i));
  }
  std::sort(rest.begin(), rest.end());
  for (int k = 0; used < total; ++k, ++used) ++out[rest[k % rest.size()].second];
  return out;
}

int draw_urgency(const std::array<double, 3>& mix, std::mt19937_64& rng) {
  std::discrete_distribution<int> pick(mix.begin(), mix.end());
  return pick(rng) + 1;
}

void set_day(Instance& inst, int h, int week, int day, bool full, bool morning) {
  if (full) {
    for (auto k : {BlockKind::Morning, BlockKind::Afternoon, BlockKind::FullDay})
      inst.surgeon_available.set(h, inst.block_at(week, day, k), true);
  } else {
    inst.surgeon_available.set(h, inst.block_at(week, day, morning ? BlockKind::Morning : BlockKind::Afternoon), true);
  }
}

std::vector<int> sample_distinct(int n, int k, std::mt19937_64& rng) {
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min(n, k));
  std::sort(all.begin(), all.end());
  return all;
}

void equip_ors(Instance& inst, double density, int min_per_specialty, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(density);
  for (int r = 0; r < inst.num_ors; ++r)
    for (int s = 0; s < inst.num_specialties; ++s) inst.or_equipped.set(r, s, coin(rng));
  for (int s = 0; s < inst.num_specialties; ++s) {
    int have = 0;
    for (int r = 0; r < inst.num_ors; ++r) have += inst.or_equipped(r, s) ? 1 : 0;
    for (int r : sample_distinct(inst.num_ors, inst.num_ors, rng)) {
      if (have >= std::min(min_per_specialty, inst.num_ors)) break;
      if (!inst.or_equipped(r, s)) {
        inst.or_equipped.set(r, s, true);
        ++have;
      }
    }
  }
  for (int r = 0; r < inst.num_ors; ++r)
    if (inst.or_equipped.row_sum(r) == 0)
      inst.or_equipped.set(r, std::uniform_int_distribution<int>(0, inst.num_specialties - 1)(rng), true);
}

PatientRecord make_patient(std::int64_t id, int s, const std::vector<int>& roster, const ArrivalModel& model,
                           bool random_wait, std::mt19937_64& rng) {
  PatientRecord rec;
  rec.id = id;
  rec.specialty = s;
  const int n = static_cast<int>(roster.size());
  const int first = roster[std::uniform_int_distribution<int>(0, n - 1)(rng)];
  rec.surgeons.push_back(first);
  if (n > 1 && std::bernoulli_distribution(model.second_surgeon_probability)(rng)) {
    int other = first;
    while (other == first) other = roster[std::uniform_int_distribution<int>(0, n - 1)(rng)];
    rec.surgeons.push_back(other);
  }
  std::sort(rec.surgeons.begin(), rec.surgeons.end());
  rec.urgency = draw_urgency(model.urgency_mix, rng);
  if (random_wait) {
    const int cap = static_cast<int>(model.urgency_wait_days[rec.urgency - 1]);
    rec.wait_days = std::uniform_int_distribution<int>(0, cap)(rng);
  }
  return rec;
}

std::vector<std::vector<int>> rosters(const Instance& inst) {
  std::vector<std::vector<int>> out(inst.num_specialties);
  for (int h = 0; h < inst.num_surgeons; ++h) out[inst.surgeon_specialty_of[h]].push_back(h);
  return out;
}

}  // namespace

std::vector<SpecialtyProfile> default_catalogue(double elective_length_factor) {
  std::vector<SpecialtyProfile> out;
  for (const auto& row : kCatalogue) {
    SpecialtyProfile p;
    p.durations = from_mean(row.mean * elective_length_factor, row.sdlog);
    p.nonelective = from_mean(row.mean, row.sdlog);
    p.surgeons = row.surgeons;
    p.patient_share = row.share;
    p.weekly_nonelective_target = row.target;
    p.weekend_surgeons = row.weekend;
    out.push_back(p);
  }
  SpecialtyProfile solo;
  solo.durations = {std::log(kSoloQ95) - kZ95 * kSoloSdlog, kSoloSdlog};
  solo.nonelective = solo.durations;
  solo.surgeons = 2;
  solo.patient_share = 0.0;
  solo.weekly_nonelective_target = 1;
  solo.weekend_surgeons = 2;
  out.push_back(solo);
  return out;
}

GeneratorConfig resolved(GeneratorConfig config) {
  if (config.specialties.empty()) config.specialties = default_catalogue(config.elective_length_factor);
  if (config.arrivals.weekly_rates.empty()) {
    double total_share = 0.0;
    for (const auto& s : config.specialties) total_share += s.patient_share;
    for (const auto& s : config.specialties)
      config.arrivals.weekly_rates.push_back(
          total_share > 0 ? config.yearly_arrivals / 52.0 * s.patient_share / total_share : 0.0);
  }
  return config;
}

Instance generate(const GeneratorConfig& raw) {
  const GeneratorConfig config = resolved(raw);
  auto profiles = config.specialties;
  const int S = static_cast<int>(profiles.size());
  int surgeons = 0;
  for (const auto& p : profiles) surgeons += p.surgeons;
  if (surgeons != config.surgeons)
    throw InstanceError("catalogue lists " + std::to_string(surgeons) + " surgeons, config asks for " +
                        std::to_string(config.surgeons));

  for (int s = 0; s < S; ++s) {
    auto& p = profiles[s];
    for (int attempt = 0;; ++attempt) {
      const auto full = block_capacity(p.durations.meanlog, p.durations.sdlog, config.calendar.full_day_hours, true,
                                       config.quantiles);
      const auto half = block_capacity(p.durations.meanlog, p.durations.sdlog, config.calendar.half_day_hours, false,
                                       config.quantiles);
      if (full.count >= 2 * half.count) break;
      if (attempt == 5)
        throw CapacityError(s, "specialty " + std::to_string(s) + " keeps kappa+ < 2 kappa- after tightening");
      p.durations.sdlog *= 0.9;
    }
  }

  std::mt19937_64 rng(config.seed);
  Instance inst = Instance::empty(config.surgeons, 0, S, config.ors, config.weeks, config.calendar);
  inst.max_nonelective_per_block = config.m_psi;
  inst.max_elective_per_block = config.m_p;
  inst.weekend_or_limit = config.xi;
  inst.weekly_nonelective_target.resize(S);
  inst.nonelective_durations.resize(S);
  for (int s = 0; s < S; ++s) {
    inst.elective_durations[s] = profiles[s].durations;
    inst.nonelective_durations[s] = profiles[s].nonelective;
    inst.weekly_nonelective_target[s] = profiles[s].weekly_nonelective_target;
  }

  int h = 0;
  const auto& cal = config.calendar;
  std::uniform_int_distribution<int> days(config.min_weekdays_available, config.max_weekdays_available);
  std::bernoulli_distribution full_day(config.full_day_probability);
  std::bernoulli_distribution coin(0.5);
  for (int s = 0; s < S; ++s)
    for (int k = 0; k < profiles[s].surgeons; ++k, ++h) {
      inst.surgeon_specialty.set(h, s, true);
      for (int w = 0; w < config.weeks; ++w) {
        for (int d : sample_distinct(cal.weekdays, days(rng), rng)) set_day(inst, h, w, d, full_day(rng), coin(rng));
        if (k < profiles[s].weekend_surgeons)
          for (int d = cal.weekdays; d < cal.days_per_week(); ++d) set_day(inst, h, w, d, true, true);
      }
    }

  equip_ors(inst, config.or_equipment_density, config.min_ors_per_specialty, rng);

  std::vector<double> shares;
  for (const auto& p : profiles) shares.push_back(p.patient_share);
  const auto counts = apportion(config.patients, shares);
  std::vector<std::vector<int>> roster(S);
  h = 0;
  for (int s = 0; s < S; ++s)
    for (int k = 0; k < profiles[s].surgeons; ++k) roster[s].push_back(h++);
  std::vector<PatientRecord> records;
  for (int s = 0; s < S; ++s)
    for (int k = 0; k < counts[s]; ++k) records.push_back(make_patient(0, s, roster[s], config.arrivals, true, rng));
  std::shuffle(records.begin(), records.end(), rng);
  for (std::size_t i = 0; i < records.size(); ++i) records[i].id = static_cast<std::int64_t>(i) + 1;
  return with_patients(inst, records);
}

std::vector<PatientRecord> arrivals_stream(const ArrivalModel& model, const Instance& instance, std::int64_t& next_id,
                                           std::mt19937_64& rng) {
  const auto roster = rosters(instance);
  std::vector<PatientRecord> out;
  for (int s = 0; s < instance.num_specialties && s < static_cast<int>(model.weekly_rates.size()); ++s) {
    const double rate = model.weekly_rates[s];
    if (rate <= 0 || roster[s].empty()) continue;
    const int n = std::poisson_distribution<int>(rate)(rng);
    for (int k = 0; k < n; ++k) out.push_back(make_patient(next_id++, s, roster[s], model, false, rng));
  }
  return out;
}

namespace {

// Mean hours and sdlog for tiny fixtures; their capacities (full, half) are
// roughly (3,1), (5,2), (2,1), (6,3).
constexpr std::pair<double, double> kTinyDurations[] = {{2.2, 0.4}, {1.5, 0.35}, {2.5, 0.35}, {1.2, 0.35}};

}  // namespace

Instance generate_tiny(std::uint64_t seed, int ors, int max_patients) {
  std::mt19937_64 rng(seed);
  const int S = 2;
  const int H = 3;
  Instance inst = Instance::empty(H, 0, S, ors, 1);
  inst.max_nonelective_per_block = 6;
  inst.max_elective_per_block = 12;
  inst.weekend_or_limit = 4;
  inst.weekly_nonelective_target.assign(S, 0);
  std::uniform_int_distribution<int> dur(0, 3);
  for (int s = 0; s < S; ++s) {
    const auto [mean, sd] = kTinyDurations[dur(rng)];
    inst.elective_durations[s] = from_mean(mean, sd);
  }
  std::vector<std::vector<int>> roster(S);
  for (int h = 0; h < H; ++h) {
    const int s = h < S ? h : std::uniform_int_distribution<int>(0, S - 1)(rng);
    inst.surgeon_specialty.set(h, s, true);
    roster[s].push_back(h);
    const int n_days = std::uniform_int_distribution<int>(1, 2)(rng);
    for (int d : sample_distinct(inst.calendar.weekdays, n_days, rng))
      set_day(inst, h, 0, d, std::bernoulli_distribution(0.6)(rng), std::bernoulli_distribution(0.5)(rng));
  }
  for (int r = 0; r < ors; ++r)
    for (int s = 0; s < S; ++s) inst.or_equipped.set(r, s, std::bernoulli_distribution(0.6)(rng));
  for (int s = 0; s < S; ++s)
    if ([&] {
          for (int r = 0; r < ors; ++r)
            if (inst.or_equipped(r, s)) return false;
          return true;
        }())
      inst.or_equipped.set(std::uniform_int_distribution<int>(0, ors - 1)(rng), s, true);

  const int P = std::uniform_int_distribution<int>(std::min(4, max_patients), max_patients)(rng);
  std::vector<PatientRecord> records;
  for (int p = 0; p < P; ++p) {
    PatientRecord rec;
    rec.id = p + 1;
    const int h = std::uniform_int_distribution<int>(0, H - 1)(rng);
    rec.surgeons = {h};
    for (int s = 0; s < S; ++s)
      if (std::find(roster[s].begin(), roster[s].end(), h) != roster[s].end()) rec.specialty = s;
    rec.urgency = std::uniform_int_distribution<int>(1, 3)(rng);
    rec.wait_days = std::uniform_int_distribution<int>(0, 100)(rng);
    records.push_back(rec);
  }
  return with_patients(inst, records);
}

Instance generate_tiny_baseline(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int S = 2;
  const int H = std::uniform_int_distribution<int>(3, 4)(rng);
  const int R = 2;
  Instance inst = Instance::empty(H, 0, S, R, 1);
  inst.max_nonelective_per_block = 4;
  inst.max_elective_per_block = 12;
  inst.weekend_or_limit = std::uniform_int_distribution<int>(1, 2)(rng);
  inst.weekly_nonelective_target.resize(S);
  std::uniform_int_distribution<int> dur(0, 3);
  for (int s = 0; s < S; ++s) {
    const auto [mean, sd] = kTinyDurations[dur(rng)];
    inst.elective_durations[s] = from_mean(mean, sd);
    inst.weekly_nonelective_target[s] = std::uniform_int_distribution<int>(1, 5)(rng);
  }
  for (int h = 0; h < H; ++h) {
    inst.surgeon_specialty.set(h, h < S ? h : std::uniform_int_distribution<int>(0, S - 1)(rng), true);
    const int n_days = std::uniform_int_distribution<int>(1, 2)(rng);
    for (int d : sample_distinct(inst.calendar.days_per_week(), n_days, rng))
      set_day(inst, h, 0, d, std::bernoulli_distribution(0.6)(rng), std::bernoulli_distribution(0.5)(rng));
  }
  for (int r = 0; r < R; ++r)
    for (int s = 0; s < S; ++s) inst.or_equipped.set(r, s, r == s || std::bernoulli_distribution(0.5)(rng));
  return with_patients(inst, {});
}

}  // namespace ots
