#include "ots/moves.hpp"

#include <algorithm>

namespace ots {

namespace {

constexpr std::array<std::string_view, kMoveKinds> kNames{"insert",        "remove",         "transfer",
                                                          "swap-patients", "swap-block-or",  "change-surgeon",
                                                          "reassign-block"};

void execute(Plan& plan, const Op& op) {
  switch (op.type) {
    case Op::Open: plan.open(op.cell, op.value); break;
    case Op::Close: plan.close(op.cell); break;
    case Op::Add: plan.add(op.value, op.cell); break;
    case Op::Remove: plan.remove(op.value); break;
  }
}

Op inverse(const Op& op) {
  switch (op.type) {
    case Op::Open: return {Op::Close, op.cell, op.value};
    case Op::Close: return {Op::Open, op.cell, op.value};
    case Op::Add: return {Op::Remove, op.cell, op.value};
    case Op::Remove: return {Op::Add, op.cell, op.value};
  }
  return op;
}

int uniform(Rng& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

/// Records edits while applying them, so that the draft can be checked and
/// rolled back before the move is handed out.
class Draft {
 public:
  explicit Draft(Plan& plan) : plan_(plan), start_(plan.version()) {}

  void open(int c, int h) { run({Op::Open, c, h}); }
  void close(int c) { run({Op::Close, c, plan_.cell(c).surgeon}); }
  void add(int p, int c) { run({Op::Add, c, p}); }
  void remove(int p) { run({Op::Remove, plan_.patient_cell(p), p}); }

  std::optional<Move> finish(MoveKind kind, int delta) {
    bool ok = plan_.within_budget();
    for (int c : touched_) ok = ok && !plan_.frozen(c) && plan_.cell_feasible(c);
    std::optional<Move> out;
    if (ok) out = Move{kind, ops_, delta, touched_, start_};
    rollback();
    return out;
  }

  void rollback() {
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) execute(plan_, inverse(*it));
    plan_.restore_version(start_);
    ops_.clear();
    touched_.clear();
  }

 private:
  void run(const Op& op) {
    execute(plan_, op);
    ops_.push_back(op);
    if (std::find(touched_.begin(), touched_.end(), op.cell) == touched_.end()) touched_.push_back(op.cell);
  }

  Plan& plan_;
  std::uint64_t start_;
  std::vector<Op> ops_;
  std::vector<int> touched_;
};

struct Target {
  int cell;
  int surgeon;  // -1: already open
};

bool elective_cell(const Plan& plan, int c) {
  const auto& cell = plan.cell(c);
  return cell.open() && !cell.fixed && cell.surgeon >= 0;
}

/// Open cells with room for p plus empty cells that one of p's surgeons can open.
std::vector<Target> targets_for(const Plan& plan, int p) {
  const auto& inst = plan.instance();
  std::vector<Target> out;
  const int current = plan.patient_cell(p);
  for (int c : plan.open_cells())
    if (c != current && plan.cell(c).surgeon >= 0 && plan.compatible(p, c) &&
        static_cast<int>(plan.cell(c).patients.size()) < plan.elective_capacity(c))
      out.push_back({c, -1});
  const int s = inst.patient_specialty_of[p];
  for (int h : inst.patient_surgeons[p])
    for (int w = 0; w < inst.num_weeks; ++w)
      for (int d = 0; d < inst.calendar.weekdays; ++d)
        for (int k = 0; k < Calendar::kBlocksPerDay; ++k) {
          const int t = inst.block_at(w, d, static_cast<BlockKind>(k));
          if (!inst.surgeon_available(h, t) || !plan.surgeon_free(h, t) || plan.elective_capacity(s, t) <= 0) continue;
          for (int r = 0; r < inst.num_ors; ++r) {
            const int c = plan.cell_id(r, t);
            if (inst.or_equipped(r, s) && plan.room_free(c)) out.push_back({c, h});
          }
        }
  return out;
}

void place(Draft& draft, int p, const Target& target) {
  if (target.surgeon >= 0) draft.open(target.cell, target.surgeon);
  draft.add(p, target.cell);
}

/// Unscheduled head of p's group (first surgeon, specialty); ties drawn at random.
int group_head(const Plan& plan, int p, Rng& rng) {
  const auto& inst = plan.instance();
  const int h = inst.patient_surgeons[p].front();
  const int s = inst.patient_specialty_of[p];
  std::vector<int> ties;
  for (int q : plan.surgeon_patients(h)) {
    if (plan.patient_cell(q) >= 0 || inst.patient_surgeons[q].front() != h || inst.patient_specialty_of[q] != s)
      continue;
    if (!ties.empty() && plan.priority(q) != plan.priority(ties.front())) break;
    ties.push_back(q);
  }
  return ties.size() == 1 ? ties.front() : ties[uniform(rng, static_cast<int>(ties.size()))];
}

std::optional<Move> insert_move(Plan& plan, Rng& rng) {
  const auto& pool = plan.unscheduled();
  if (pool.empty()) return std::nullopt;
  const int p = group_head(plan, pool[uniform(rng, static_cast<int>(pool.size()))], rng);
  const auto targets = targets_for(plan, p);
  if (targets.empty()) return std::nullopt;
  Draft draft(plan);
  place(draft, p, targets[uniform(rng, static_cast<int>(targets.size()))]);
  return draft.finish(MoveKind::Insert, +1);
}

std::optional<Move> remove_move(Plan& plan, Rng& rng) {
  const auto& pool = plan.scheduled();
  if (pool.empty()) return std::nullopt;
  const int p = pool[uniform(rng, static_cast<int>(pool.size()))];
  const int c = plan.patient_cell(p);
  Draft draft(plan);
  draft.remove(p);
  if (plan.cell(c).patients.empty()) draft.close(c);
  return draft.finish(MoveKind::Remove, -1);
}

std::optional<Move> transfer_move(Plan& plan, Rng& rng) {
  const auto& pool = plan.scheduled();
  if (pool.empty()) return std::nullopt;
  const int p = pool[uniform(rng, static_cast<int>(pool.size()))];
  const auto targets = targets_for(plan, p);
  if (targets.empty()) return std::nullopt;
  const auto target = targets[uniform(rng, static_cast<int>(targets.size()))];
  const int c = plan.patient_cell(p);
  Draft draft(plan);
  draft.remove(p);
  if (plan.cell(c).patients.empty()) draft.close(c);
  place(draft, p, target);
  return draft.finish(MoveKind::Transfer, 0);
}

std::optional<Move> swap_patients_move(Plan& plan, Rng& rng) {
  const auto& pool = plan.scheduled();
  const int n = static_cast<int>(pool.size());
  if (n < 2) return std::nullopt;
  for (int attempt = 0; attempt < 200; ++attempt) {
    const int p = pool[uniform(rng, n)];
    const int q = pool[uniform(rng, n)];
    const int cp = plan.patient_cell(p), cq = plan.patient_cell(q);
    if (cp == cq || !plan.compatible(p, cq) || !plan.compatible(q, cp)) continue;
    Draft draft(plan);
    draft.remove(p);
    draft.remove(q);
    draft.add(p, cq);
    draft.add(q, cp);
    if (auto m = draft.finish(MoveKind::SwapPatients, 0)) return m;
  }
  return std::nullopt;
}

/// Swaps the full elective contents of an open cell with another cell of the
/// same block kind (open or empty) on any weekday and OR.
std::optional<Move> swap_block_or_move(Plan& plan, Rng& rng) {
  const auto& inst = plan.instance();
  const auto& open = plan.open_cells();
  if (open.empty()) return std::nullopt;
  for (int attempt = 0; attempt < 50; ++attempt) {
    const int c1 = open[uniform(rng, static_cast<int>(open.size()))];
    if (!elective_cell(plan, c1)) continue;
    const auto kind = inst.kind_of(plan.block_of(c1));
    const int t2 = inst.block_at(uniform(rng, inst.num_weeks), uniform(rng, inst.calendar.weekdays), kind);
    const int c2 = plan.cell_id(uniform(rng, inst.num_ors), t2);
    if (c2 == c1 || plan.cell(c2).fixed || (plan.cell(c2).open() && plan.cell(c2).surgeon < 0)) continue;
    const int h1 = plan.cell(c1).surgeon, h2 = plan.cell(c2).surgeon;
    const auto p1 = plan.cell(c1).patients, p2 = plan.cell(c2).patients;
    Draft draft(plan);
    for (int p : p1) draft.remove(p);
    for (int p : p2) draft.remove(p);
    draft.close(c1);
    if (h2 >= 0) draft.close(c2);
    draft.open(c2, h1);
    for (int p : p1) draft.add(p, c2);
    if (h2 >= 0) {
      draft.open(c1, h2);
      for (int p : p2) draft.add(p, c1);
    }
    if (auto m = draft.finish(MoveKind::SwapBlockOr, 0)) return m;
  }
  return std::nullopt;
}

std::optional<Move> change_surgeon_move(Plan& plan, Rng& rng) {
  const auto& inst = plan.instance();
  const auto& open = plan.open_cells();
  if (open.empty()) return std::nullopt;
  const int c = open[uniform(rng, static_cast<int>(open.size()))];
  if (!elective_cell(plan, c)) return std::nullopt;
  const int h = plan.cell(c).surgeon;
  const int s = plan.cell(c).specialty;
  const int t = plan.block_of(c);
  std::vector<int> options;
  for (int g = 0; g < inst.num_surgeons; ++g)
    if (g != h && inst.surgeon_specialty_of[g] == s && inst.surgeon_available(g, t) && plan.surgeon_free(g, t))
      options.push_back(g);
  if (options.empty()) return std::nullopt;
  const int g = options[uniform(rng, static_cast<int>(options.size()))];
  const auto patients = plan.cell(c).patients;
  std::vector<int> dropped;
  for (int p : patients)
    if (!inst.can_treat(p, g)) dropped.push_back(p);
  std::vector<int> incoming;
  for (int q : plan.surgeon_patients(g)) {
    if (static_cast<int>(incoming.size()) == static_cast<int>(dropped.size())) break;
    if (plan.patient_cell(q) < 0 && inst.patient_specialty_of[q] == s) incoming.push_back(q);
  }
  if (incoming.size() < dropped.size()) return std::nullopt;
  Draft draft(plan);
  for (int p : patients) draft.remove(p);
  draft.close(c);
  draft.open(c, g);
  for (int p : patients)
    if (inst.can_treat(p, g)) draft.add(p, c);
  for (int q : incoming) draft.add(q, c);
  return draft.finish(MoveKind::ChangeSurgeon, 0);
}

/// Clears a weekday OR block (and the overlapping blocks of that OR), hands it
/// to a random eligible surgeon and fills it by priority.
std::optional<Move> reassign_block_move(Plan& plan, Rng& rng) {
  const auto& inst = plan.instance();
  for (int attempt = 0; attempt < 20; ++attempt) {
    const int r = uniform(rng, inst.num_ors);
    const int t = inst.block_at(uniform(rng, inst.num_weeks), uniform(rng, inst.calendar.weekdays),
                                static_cast<BlockKind>(uniform(rng, Calendar::kBlocksPerDay)));
    std::vector<int> area{plan.cell_id(r, t)};
    for (int tau : inst.overlapping[t]) area.push_back(plan.cell_id(r, tau));
    const bool blocked = std::any_of(area.begin(), area.end(), [&](int c) {
      return plan.cell(c).fixed || (plan.cell(c).open() && plan.cell(c).surgeon < 0);
    });
    if (blocked) continue;

    Draft draft(plan);
    int evicted = 0;
    for (int c : area) {
      if (!plan.cell(c).open()) continue;
      const auto patients = plan.cell(c).patients;
      for (int p : patients) draft.remove(p);
      evicted += static_cast<int>(patients.size());
      draft.close(c);
    }
    const int c = area.front();
    std::vector<int> options;
    for (int h = 0; h < inst.num_surgeons; ++h) {
      const int s = inst.surgeon_specialty_of[h];
      if (!inst.surgeon_available(h, t) || !inst.or_equipped(r, s) || !plan.surgeon_free(h, t) ||
          plan.elective_capacity(s, t) <= 0)
        continue;
      const auto& list = plan.surgeon_patients(h);
      if (std::any_of(list.begin(), list.end(), [&](int q) {
            return plan.patient_cell(q) < 0 && inst.patient_specialty_of[q] == s;
          }))
        options.push_back(h);
    }
    if (options.empty()) {
      draft.rollback();
      return std::nullopt;
    }
    const int h = options[uniform(rng, static_cast<int>(options.size()))];
    const int s = inst.surgeon_specialty_of[h];
    const int cap = plan.elective_capacity(s, t);
    draft.open(c, h);
    int filled = 0;
    for (int q : plan.surgeon_patients(h)) {
      if (filled == cap) break;
      if (plan.patient_cell(q) < 0 && inst.patient_specialty_of[q] == s) {
        draft.add(q, c);
        ++filled;
      }
    }
    return draft.finish(MoveKind::ReassignBlock, filled - evicted);
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(MoveKind kind) { return kNames[static_cast<int>(kind)]; }

std::optional<MoveKind> move_kind_from_string(std::string_view name) {
  for (int i = 0; i < kMoveKinds; ++i)
    if (kNames[i] == name) return static_cast<MoveKind>(i);
  return std::nullopt;
}

std::optional<Move> generate(MoveKind kind, Plan& plan, Rng& rng) {
  switch (kind) {
    case MoveKind::Insert: return insert_move(plan, rng);
    case MoveKind::Remove: return remove_move(plan, rng);
    case MoveKind::Transfer: return transfer_move(plan, rng);
    case MoveKind::SwapPatients: return swap_patients_move(plan, rng);
    case MoveKind::SwapBlockOr: return swap_block_or_move(plan, rng);
    case MoveKind::ChangeSurgeon: return change_surgeon_move(plan, rng);
    case MoveKind::ReassignBlock: return reassign_block_move(plan, rng);
  }
  return std::nullopt;
}

void apply(Plan& plan, Move& move) {
  if (plan.version() != move.version) throw StaleMove("move built against an older plan state");
  for (const auto& op : move.ops) execute(plan, op);
}

void undo(Plan& plan, const Move& move) {
  for (auto it = move.ops.rbegin(); it != move.ops.rend(); ++it) execute(plan, inverse(*it));
}

}  // namespace ots
