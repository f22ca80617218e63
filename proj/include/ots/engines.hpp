#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "ots/moves.hpp"
#include "ots/plan.hpp"
#include "ots/schedule.hpp"

namespace ots {

enum class Method { Constructive, SA, HyperSA, HyperSATS };

std::string_view to_string(Method method);
std::optional<Method> method_from_string(std::string_view name);

struct EngineParams {
  double initial_temperature = 2.0;
  double cooling = 0.999;   // SA every iteration; Hyper SA after an accepted move
  double reheat = 1.0001;   // Hyper SA after a rejected or infeasible move
  double min_temperature = 1e-4;
  double max_temperature = 1e3;
  int iterations = 16000;
  int block_size = 200;     // Hyper SA iterations per selected move kind
  int tabu_tenure = 400;    // iterations a non-improving kind stays tabu
  int twd_initial_length = 20;
  int twd_shrink_every = 800;
  int twd_resample_limit = 10;
  int generation_attempts = 20;  // retries when a kind finds no feasible move
  bool sa_reheat = false;   // SA uses the Hyper SA temperature rule
  bool record_trace = false;
  std::vector<MoveKind> kinds{kAllMoves.begin(), kAllMoves.end()};
};

struct TraceRow {
  int iteration = 0;
  MoveKind kind = MoveKind::Insert;
  int delta = 0;
  bool generated = false;
  bool accepted = false;
  double temperature = 0.0;
  int objective = 0;
  int best = 0;
};

struct EngineStats {
  std::array<int, kMoveKinds> generated{};
  std::array<int, kMoveKinds> accepted{};
  int tabu_rejections = 0;
};

struct EngineResult {
  Schedule best;
  int best_objective = 0;
  int initial_objective = 0;
  int final_objective = 0;
  EngineStats stats;
  std::vector<TraceRow> trace;
};

/// Called after every iteration with the current plan; tests use it to
/// re-validate the working state.
using IterationHook = std::function<void(const Plan&, int iteration)>;

/// Runs one metaheuristic from `start` (copied). Method::Constructive is not
/// an engine and is rejected with std::invalid_argument.
EngineResult run_engine(Method method, const Plan& start, const EngineParams& params, std::uint64_t seed,
                        const IterationHook& hook = {});

/// Metropolis rule for a maximisation objective: improvements always pass,
/// a loss of |delta| passes with probability exp(delta / temperature). Draws
/// from `rng` only when delta < 0.
bool accept(int delta, double temperature, Rng& rng);

/// Temperature rule of Hyper SA for one outcome, clamped to the bounds.
double hyper_temperature(double temperature, bool accepted, const EngineParams& params);

/// Move kind ranking with tabu status used by Hyper SA.
class KindTabu {
 public:
  KindTabu(std::vector<MoveKind> kinds, int tenure);

  /// Highest-rank non-tabu kinds at `iteration`; clears the oldest tabu entry
  /// when every kind is tabu.
  std::vector<MoveKind> candidates(int iteration);
  /// End of a block: improvement raises the rank, otherwise the kind turns tabu.
  void record(MoveKind kind, bool improved, int iteration);

  int rank(MoveKind kind) const { return rank_[static_cast<int>(kind)]; }
  bool is_tabu(MoveKind kind, int iteration) const { return until_[static_cast<int>(kind)] > iteration; }

 private:
  std::vector<MoveKind> kinds_;
  int tenure_;
  std::array<int, kMoveKinds> rank_{};
  std::array<int, kMoveKinds> until_{};
  std::array<int, kMoveKinds> since_{};
};

/// (OR, week, day) keys recently worsened; moves touching them are resampled.
class TwdTabu {
 public:
  struct Key {
    int room, week, day;
    bool operator==(const Key&) const = default;
  };

  explicit TwdTabu(int max_length) : max_length_(max_length) {}

  bool contains(const Key& key) const;
  void push(const Key& key);
  void shrink();  // max length decreases by one, never below zero
  int max_length() const { return max_length_; }
  int size() const { return static_cast<int>(entries_.size()); }
  bool empty() const { return entries_.empty(); }

 private:
  int max_length_;
  std::vector<Key> entries_;  // most recent first
};

std::vector<TwdTabu::Key> twd_keys(const Plan& plan, const Move& move);

}  // namespace ots
