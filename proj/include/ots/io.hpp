#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "ots/baseline.hpp"
#include "ots/engines.hpp"
#include "ots/instance.hpp"
#include "ots/schedule.hpp"

namespace ots {

inline constexpr int kSchemaVersion = 1;

/// Parse failure; `path()` names the offending field, e.g.
/// "schedule.patient_assign[4][0]".
class FormatError : public std::runtime_error {
 public:
  FormatError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

std::string instance_to_json(const Instance& instance);
Instance instance_from_json(const std::string& text);

/// Patients are written by id; `instance` resolves ids back to indices.
std::string schedule_to_json(const Instance& instance, const Schedule& schedule);
Schedule schedule_from_json(const Instance& instance, const std::string& text);

std::string baseline_to_json(const Instance& instance, const BaselinePlan& plan);
BaselinePlan baseline_from_json(const Instance& instance, const std::string& text);

/// Engine parameter overrides; absent fields keep the values of `defaults`.
EngineParams params_from_json(const std::string& text, EngineParams defaults = {});

/// Number of weeks a schedule file was written for (its "weeks" field).
int schedule_weeks(const std::string& text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

Instance load_instance(const std::filesystem::path& path);
void save_instance(const std::filesystem::path& path, const Instance& instance);

}  // namespace ots
