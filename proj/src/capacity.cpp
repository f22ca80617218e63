#include "ots/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <tuple>

namespace ots {

namespace {

constexpr double kFitTolerance = 1e-9;
constexpr int kMaxCount = 256;

double empirical_q95(std::vector<double> values) {
  // Type-1 sample quantile: smallest value with at least 95% of the mass at or below it.
  const std::size_t n = values.size();
  std::size_t k = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
  k = std::clamp<std::size_t>(k, 1, n) - 1;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), values.end());
  return values[k];
}

/// q95 for n = 1..N where N is the first count exceeding `limit_hours`
/// (or `max_n`, whichever comes first). Entry 0 is n = 0.
std::vector<double> q95_curve(double meanlog, double sdlog, std::size_t samples, std::uint64_t seed,
                              double limit_hours, int max_n) {
  std::vector<double> curve{0.0};
  std::vector<double> sums(samples, 0.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int n = 1; n <= max_n; ++n) {
    for (double& s : sums) s += std::exp(meanlog + sdlog * normal(rng));
    const double q = n == 1 ? std::exp(meanlog + kZ95 * sdlog) : empirical_q95(sums);
    curve.push_back(q);
    if (q > limit_hours + kFitTolerance) break;
  }
  return curve;
}

using CurveKey = std::tuple<double, double, std::size_t, std::uint64_t>;

struct CurveCache {
  std::mutex mutex;
  std::map<CurveKey, std::vector<double>> curves;
};

CurveCache& cache() {
  static CurveCache c;
  return c;
}

/// Cached curve that reaches at least `limit_hours` (or `min_n` entries).
std::vector<double> cached_curve(double meanlog, double sdlog, const QuantileOptions& opt, double limit_hours,
                                 int min_n = 0) {
  const CurveKey key{meanlog, sdlog, opt.samples, opt.seed};
  {
    std::lock_guard lock(cache().mutex);
    auto it = cache().curves.find(key);
    if (it != cache().curves.end()) {
      const auto& c = it->second;
      const bool reaches = c.back() > limit_hours + kFitTolerance || static_cast<int>(c.size()) > kMaxCount;
      if (reaches && static_cast<int>(c.size()) > min_n) return c;
    }
  }
  const int max_n = std::max(kMaxCount, min_n);
  auto curve = q95_curve(meanlog, sdlog, opt.samples, opt.seed, limit_hours, max_n);
  if (static_cast<int>(curve.size()) <= min_n) {
    // Curve stopped at the limit; extend without a limit up to min_n.
    curve = q95_curve(meanlog, sdlog, opt.samples, opt.seed, 1e300, min_n);
  }
  std::lock_guard lock(cache().mutex);
  auto& slot = cache().curves[key];
  if (curve.size() > slot.size()) slot = curve;
  return slot;
}

}  // namespace

double q95_sum(double meanlog, double sdlog, int n, std::size_t samples, std::uint64_t seed) {
  if (n <= 0) return 0.0;
  if (n == 1) return std::exp(meanlog + kZ95 * sdlog);
  auto curve = q95_curve(meanlog, sdlog, samples, seed, 1e300, n);
  return curve[n];
}

BlockCapacity block_capacity(double meanlog, double sdlog, double block_length, bool full_day,
                             const QuantileOptions& options) {
  const auto curve = cached_curve(meanlog, sdlog, options, block_length);
  int count = 0;
  for (int n = 1; n < static_cast<int>(curve.size()); ++n) {
    if (curve[n] <= block_length + kFitTolerance)
      count = n;
    else
      break;
  }
  if (count == 0 && full_day) return {1, true};
  return {count, false};
}

CapacityTable::CapacityTable(std::vector<SpecialtyCapacity> entries, std::vector<LognormalParams> elective,
                             std::vector<LognormalParams> nonelective, QuantileOptions options)
    : entries_(std::move(entries)),
      elective_(std::move(elective)),
      nonelective_(std::move(nonelective)),
      options_(options) {}

double CapacityTable::q95(int s, int n, bool nonelective_side) const {
  if (n <= 0 || elective_.empty()) return 0.0;
  const auto& params = nonelective_side ? nonelective_[s] : elective_[s];
  const auto curve = cached_curve(params.meanlog, params.sdlog, options_, 0.0, n);
  return curve[n];
}

CapacityTable compute_table(const Instance& instance, const QuantileOptions& options) {
  std::vector<SpecialtyCapacity> entries(instance.num_specialties);
  std::vector<LognormalParams> elective(instance.elective_durations);
  std::vector<LognormalParams> nonelective(instance.num_specialties);
  const double full = instance.calendar.full_day_hours;
  const double half = instance.calendar.half_day_hours;
  for (int s = 0; s < instance.num_specialties; ++s) {
    const auto& ep = instance.elective_durations[s];
    const auto& np = instance.nonelective_params(s);
    nonelective[s] = np;
    auto& e = entries[s];
    const auto ef = block_capacity(ep.meanlog, ep.sdlog, full, true, options);
    const auto eh = block_capacity(ep.meanlog, ep.sdlog, half, false, options);
    const auto nf = block_capacity(np.meanlog, np.sdlog, full, true, options);
    const auto nh = block_capacity(np.meanlog, np.sdlog, half, false, options);
    e.elective_full = ef.count;
    e.elective_half = eh.count;
    e.solo_oversize = ef.solo_oversize;
    e.nonelective_full = nf.count;
    e.nonelective_half = nh.count;
    e.nonelective_solo_oversize = nf.solo_oversize;
    if (e.elective_full < 2 * e.elective_half) {
      std::ostringstream os;
      os << "specialty " << s << ": full-day capacity " << e.elective_full << " is below twice the half-day capacity "
         << e.elective_half;
      throw CapacityError(s, os.str());
    }
  }
  return CapacityTable(std::move(entries), std::move(elective), std::move(nonelective), options);
}

CapacityTable table_from_counts(std::vector<SpecialtyCapacity> entries) {
  // Durations are unknown for hand-made tables; q95 then reports zero hours.
  return CapacityTable(std::move(entries), {}, {}, QuantileOptions{});
}

}  // namespace ots
