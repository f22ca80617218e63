#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ots {

/// One table line: a method run over a set of seeds at one horizon length.
struct ReportRow {
  int horizon = 1;
  std::string method;
  std::string budget = "flat";
  std::vector<double> samples;    // total patients treated per seed, in seed order
  std::optional<double> seconds;  // mean wall-clock per seed; absent when timing is off

  double mean() const;
  double variance() const;
  double worst() const;
  double best() const;
};

/// Tab-separated table with the columns
/// Horizon Length (weeks), Method, Budget, Mean, Variance, Worst, Best,
/// Time (seconds), Samples.
struct ExperimentReport {
  std::vector<ReportRow> rows;

  std::string to_tsv() const;
  static ExperimentReport from_tsv(const std::string& text);

  /// Rows of `other` appended; rows with the same (horizon, method, budget)
  /// have their samples concatenated.
  void merge(const ExperimentReport& other);

  /// Pairwise one-sided Welch tests between methods sharing a horizon and budget.
  std::string comparison_summary() const;
};

}  // namespace ots
