#pragma once

// Reference implementations used only by the tests. They work from the
// instance matrices and the model rows directly and share no code with the
// solver beyond the data types.

#include <cstdint>
#include <optional>
#include <set>

#include "ots/capacity.hpp"
#include "ots/instance.hpp"
#include "ots/schedule.hpp"

namespace oracle {

/// Constraint families violated by `schedule`, evaluated on dense X, Y, Z
/// and Psi arrays, one model row at a time.
std::set<ots::ConstraintId> dense_violations(const ots::Instance& instance, const ots::Schedule& schedule,
                                             const ots::CapacityTable& capacities);

/// Largest number of elective patients any feasible one-week schedule treats.
/// Exhaustive over the opening pattern of every weekday; valid for instances
/// without non-elective demand whose patients name exactly one surgeon.
int elective_optimum(const ots::Instance& instance, const ots::CapacityTable& capacities);

/// Fewest reserved blocks meeting every weekly non-elective target of a
/// one-week instance (nullopt when no reservation plan exists), by
/// depth-bounded exhaustive search.
std::optional<int> baseline_minimum(const ots::Instance& instance, const ots::CapacityTable& capacities);

/// Fraction of `samples` draws in which n iid lognormal durations exceed
/// `hours`. Plain sampling, separate from the q95 estimator.
double overflow_probability(double meanlog, double sdlog, int n, double hours, int samples, std::uint64_t seed);

}  // namespace oracle
