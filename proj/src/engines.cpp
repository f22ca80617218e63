#include "ots/engines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ots {

namespace {

constexpr std::array<std::string_view, 4> kMethodNames{"constructive", "sa", "hyper-sa", "hyper-sa-ts"};

double clamp_temperature(double t, const EngineParams& p) { return std::clamp(t, p.min_temperature, p.max_temperature); }

MoveKind pick(const std::vector<MoveKind>& kinds, Rng& rng) {
  if (kinds.size() == 1) return kinds.front();
  return kinds[std::uniform_int_distribution<std::size_t>(0, kinds.size() - 1)(rng)];
}

}  // namespace

std::string_view to_string(Method method) { return kMethodNames[static_cast<int>(method)]; }

std::optional<Method> method_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kMethodNames.size(); ++i)
    if (kMethodNames[i] == name) return static_cast<Method>(i);
  // Underscore spellings are accepted as well.
  if (name == "hyper_sa") return Method::HyperSA;
  if (name == "hyper_sa_ts") return Method::HyperSATS;
  return std::nullopt;
}

bool accept(int delta, double temperature, Rng& rng) {
  if (delta >= 0) return true;
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < std::exp(delta / temperature);
}

double hyper_temperature(double temperature, bool accepted, const EngineParams& params) {
  return clamp_temperature(temperature * (accepted ? params.cooling : params.reheat), params);
}

KindTabu::KindTabu(std::vector<MoveKind> kinds, int tenure) : kinds_(std::move(kinds)), tenure_(tenure) {
  if (kinds_.empty()) throw std::invalid_argument("empty move catalogue");
}

std::vector<MoveKind> KindTabu::candidates(int iteration) {
  std::vector<MoveKind> eligible;
  for (auto k : kinds_)
    if (!is_tabu(k, iteration)) eligible.push_back(k);
  if (eligible.empty()) {
    // Aspiration: the kind that has been tabu longest becomes eligible again.
    auto oldest = *std::min_element(kinds_.begin(), kinds_.end(), [&](MoveKind a, MoveKind b) {
      return since_[static_cast<int>(a)] < since_[static_cast<int>(b)];
    });
    until_[static_cast<int>(oldest)] = 0;
    eligible.push_back(oldest);
  }
  int top = rank(eligible.front());
  for (auto k : eligible) top = std::max(top, rank(k));
  std::erase_if(eligible, [&](MoveKind k) { return rank(k) != top; });
  return eligible;
}

void KindTabu::record(MoveKind kind, bool improved, int iteration) {
  const int i = static_cast<int>(kind);
  if (improved) {
    ++rank_[i];
  } else {
    until_[i] = iteration + tenure_;
    since_[i] = iteration;
  }
}

bool TwdTabu::contains(const Key& key) const { return std::find(entries_.begin(), entries_.end(), key) != entries_.end(); }

void TwdTabu::push(const Key& key) {
  if (max_length_ <= 0) return;
  std::erase(entries_, key);
  entries_.insert(entries_.begin(), key);
  if (static_cast<int>(entries_.size()) > max_length_) entries_.resize(max_length_);
}

void TwdTabu::shrink() {
  max_length_ = std::max(0, max_length_ - 1);
  if (static_cast<int>(entries_.size()) > max_length_) entries_.resize(max_length_);
}

std::vector<TwdTabu::Key> twd_keys(const Plan& plan, const Move& move) {
  const auto& inst = plan.instance();
  std::vector<TwdTabu::Key> keys;
  for (int c : move.touched_cells) {
    const int t = plan.block_of(c);
    TwdTabu::Key key{plan.room_of(c), inst.week_of(t), inst.day_of(t)};
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }
  return keys;
}

namespace {

class Runner {
 public:
  Runner(Method method, const Plan& start, const EngineParams& params, std::uint64_t seed, const IterationHook& hook)
      : method_(method),
        params_(params),
        hook_(hook),
        plan_(start),
        best_(start),
        rng_(seed),
        kinds_(params.kinds, params.tabu_tenure),
        twd_(method == Method::HyperSATS ? params.twd_initial_length : 0),
        temperature_(clamp_temperature(params.initial_temperature, params)) {
    if (params.kinds.empty()) throw std::invalid_argument("empty move catalogue");
    result_.initial_objective = plan_.objective();
    best_objective_ = plan_.objective();
  }

  EngineResult run() {
    const bool hyper = method_ != Method::SA;
    MoveKind kind = params_.kinds.front();
    int block_start = 0;
    for (int i = 0; i < params_.iterations; ++i) {
      if (hyper && i % params_.block_size == 0) {
        kind = pick(kinds_.candidates(i), rng_);
        block_start = plan_.objective();
      } else if (!hyper) {
        kind = pick(params_.kinds, rng_);
      }
      step(i, kind);
      if (hyper && (i % params_.block_size == params_.block_size - 1 || i + 1 == params_.iterations))
        kinds_.record(kind, plan_.objective() > block_start, i + 1);
      if (method_ == Method::HyperSATS && params_.twd_shrink_every > 0 && (i + 1) % params_.twd_shrink_every == 0)
        twd_.shrink();
      if (hook_) hook_(plan_, i);
    }
    result_.best = best_.to_schedule();
    result_.best_objective = best_objective_;
    result_.final_objective = plan_.objective();
    return std::move(result_);
  }

 private:
  /// A failed generation is retried; a tabu-hit move is resampled up to the
  /// resample limit.
  std::optional<Move> sample(MoveKind kind) {
    int tabu_hits = 0;
    for (int attempt = 0; attempt < std::max(1, params_.generation_attempts); ++attempt) {
      auto move = generate(kind, plan_, rng_);
      if (!move) continue;
      if (twd_.empty()) return move;
      const auto keys = twd_keys(plan_, *move);
      if (std::none_of(keys.begin(), keys.end(), [&](const auto& k) { return twd_.contains(k); })) return move;
      ++result_.stats.tabu_rejections;
      if (++tabu_hits >= std::max(1, params_.twd_resample_limit)) break;
    }
    return std::nullopt;
  }

  void step(int i, MoveKind kind) {
    auto move = sample(kind);
    bool accepted = false;
    if (move) {
      ++result_.stats.generated[static_cast<int>(kind)];
      accepted = accept(move->delta, temperature_, rng_);
      if (accepted) {
        apply(plan_, *move);
        ++result_.stats.accepted[static_cast<int>(kind)];
        if (move->delta < 0)
          for (const auto& key : twd_keys(plan_, *move)) twd_.push(key);
        if (plan_.objective() > best_objective_) {
          best_objective_ = plan_.objective();
          best_ = plan_;
        }
      }
    }
    if (method_ == Method::SA && !params_.sa_reheat)
      temperature_ = clamp_temperature(temperature_ * params_.cooling, params_);
    else
      temperature_ = hyper_temperature(temperature_, accepted, params_);
    if (params_.record_trace)
      result_.trace.push_back({i, kind, move ? move->delta : 0, move.has_value(), accepted, temperature_,
                               plan_.objective(), best_objective_});
  }

  Method method_;
  const EngineParams& params_;
  const IterationHook& hook_;
  Plan plan_;
  Plan best_;
  int best_objective_ = 0;
  Rng rng_;
  KindTabu kinds_;
  TwdTabu twd_;
  double temperature_;
  EngineResult result_;
};

}  // namespace

EngineResult run_engine(Method method, const Plan& start, const EngineParams& params, std::uint64_t seed,
                        const IterationHook& hook) {
  if (method == Method::Constructive) throw std::invalid_argument("constructive is not a search engine");
  return Runner(method, start, params, seed, hook).run();
}

}  // namespace ots
