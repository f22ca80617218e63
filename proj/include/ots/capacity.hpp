#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ots/instance.hpp"

namespace ots {

/// z-score of the standard normal 95th percentile.
inline constexpr double kZ95 = 1.6448536269514722;

struct QuantileOptions {
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 20190521;
};

/// 95th percentile of the sum of `n` iid lognormal(meanlog, sdlog) durations.
/// n == 1 uses the closed-form quantile; n >= 2 is a seeded Monte-Carlo
/// estimate with common random numbers across n (so the result is
/// non-decreasing in n for a fixed seed). n == 0 yields 0.
double q95_sum(double meanlog, double sdlog, int n, std::size_t samples, std::uint64_t seed);

struct BlockCapacity {
  int count = 0;
  bool solo_oversize = false;
  bool operator==(const BlockCapacity&) const = default;
};

/// Largest n whose q95 fits in `block_length`; a surgery that does not fit
/// even alone is still admitted, alone, in a full-day block.
BlockCapacity block_capacity(double meanlog, double sdlog, double block_length, bool full_day,
                             const QuantileOptions& options = {});

struct SpecialtyCapacity {
  int elective_full = 0;      // kappa+
  int elective_half = 0;      // kappa-
  int nonelective_full = 0;   // kappa-hat+
  int nonelective_half = 0;   // kappa-hat-
  bool solo_oversize = false;             // elective single-case q95 exceeds a full day
  bool nonelective_solo_oversize = false;
  bool operator==(const SpecialtyCapacity&) const = default;
};

class CapacityError : public std::runtime_error {
 public:
  CapacityError(int specialty, const std::string& what) : std::runtime_error(what), specialty_(specialty) {}
  int specialty() const { return specialty_; }

 private:
  int specialty_;
};

class CapacityTable {
 public:
  CapacityTable() = default;
  CapacityTable(std::vector<SpecialtyCapacity> entries, std::vector<LognormalParams> elective,
                std::vector<LognormalParams> nonelective, QuantileOptions options);

  const SpecialtyCapacity& operator[](int s) const { return entries_[s]; }
  int size() const { return static_cast<int>(entries_.size()); }

  int elective(int s, bool full_day) const {
    return full_day ? entries_[s].elective_full : entries_[s].elective_half;
  }
  int nonelective(int s, bool full_day) const {
    return full_day ? entries_[s].nonelective_full : entries_[s].nonelective_half;
  }
  bool solo(int s, bool nonelective_side) const {
    return nonelective_side ? entries_[s].nonelective_solo_oversize : entries_[s].solo_oversize;
  }

  /// q95 of `n` surgeries of specialty s, served from the shared cache.
  double q95(int s, int n, bool nonelective_side) const;

  const QuantileOptions& options() const { return options_; }
  bool operator==(const CapacityTable& o) const { return entries_ == o.entries_; }

 private:
  std::vector<SpecialtyCapacity> entries_;
  std::vector<LognormalParams> elective_;
  std::vector<LognormalParams> nonelective_;
  QuantileOptions options_;
};

/// Fills all four counts for every specialty. Throws CapacityError naming the
/// specialty when kappa+ < 2 kappa-.
CapacityTable compute_table(const Instance& instance, const QuantileOptions& options = {});

/// Table built from explicit counts, for hand-made fixtures.
CapacityTable table_from_counts(std::vector<SpecialtyCapacity> entries);

}  // namespace ots
