#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "ots/plan.hpp"

namespace ots {

using Rng = std::mt19937_64;

enum class MoveKind { Insert, Remove, Transfer, SwapPatients, SwapBlockOr, ChangeSurgeon, ReassignBlock };
inline constexpr int kMoveKinds = 7;
inline constexpr std::array<MoveKind, kMoveKinds> kAllMoves{
    MoveKind::Insert,      MoveKind::Remove,        MoveKind::Transfer,     MoveKind::SwapPatients,
    MoveKind::SwapBlockOr, MoveKind::ChangeSurgeon, MoveKind::ReassignBlock};

std::string_view to_string(MoveKind kind);
std::optional<MoveKind> move_kind_from_string(std::string_view name);

/// Elementary edit of a Plan. `value` is the surgeon for Open/Close and the
/// patient for Add/Remove.
struct Op {
  enum Type { Open, Close, Add, Remove } type;
  int cell;
  int value;
};

struct Move {
  MoveKind kind = MoveKind::Insert;
  std::vector<Op> ops;
  int delta = 0;                    // change in the number of scheduled patients
  std::vector<int> touched_cells;   // cells whose content changes
  std::uint64_t version = 0;        // plan version the move was built against
};

class StaleMove : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Draws one feasible move of the given kind, or nullopt when none exists
/// (or sampling gave up). The plan is left unchanged.
std::optional<Move> generate(MoveKind kind, Plan& plan, Rng& rng);

/// Applies the move; throws StaleMove when the plan changed since generation.
void apply(Plan& plan, Move& move);
/// Reverts a move applied last.
void undo(Plan& plan, const Move& move);

}  // namespace ots
