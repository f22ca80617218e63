// Command-line front end: gen, baseline, solve, roll, validate, report.

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <sstream>

#include "ots/baseline.hpp"
#include "ots/capacity.hpp"
#include "ots/constructive.hpp"
#include "ots/feasibility.hpp"
#include "ots/generator.hpp"
#include "ots/io.hpp"
#include "ots/report.hpp"
#include "ots/rolling.hpp"

namespace {

using namespace ots;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

/// "30" -> 1..30, "5-9" -> 5..9, "1,4,7" -> {1,4,7}.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  if (text.find(',') != std::string::npos) {
    for (const auto& s : split_list(text)) out.push_back(std::stoull(s));
  } else if (auto dash = text.find('-'); dash != std::string::npos) {
    const auto lo = std::stoull(text.substr(0, dash)), hi = std::stoull(text.substr(dash + 1));
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
  } else {
    const auto n = std::stoull(text);
    for (std::uint64_t s = 1; s <= n; ++s) out.push_back(s);
  }
  if (out.empty()) throw CLI::ValidationError("--seeds", "at least one seed is required");
  return out;
}

Method parse_method(const std::string& name) {
  auto m = method_from_string(name);
  if (!m) throw CLI::ValidationError("--method", "unknown method " + name);
  return *m;
}

BudgetMode parse_budget(const std::string& name) {
  if (name == "flat") return BudgetMode::Flat;
  if (name == "scaled") return BudgetMode::Scaled;
  throw CLI::ValidationError("--budget", "expected flat or scaled");
}

struct Shared {
  std::string instance;
  std::string params;
  std::size_t samples = QuantileOptions{}.samples;

  EngineParams engine_params() const {
    return params.empty() ? EngineParams{} : params_from_json(read_file(params));
  }
  QuantileOptions quantiles() const { return {samples, QuantileOptions{}.seed}; }
};

BaselinePlan baseline_or_exit(const Instance& inst, const CapacityTable& caps) {
  try {
    return solve_baseline(inst, caps);
  } catch (const BaselineError& e) {
    std::cerr << e.what() << '\n';
    std::exit(3);
  }
}

int cmd_gen(std::uint64_t seed, int weeks, const std::string& out) {
  GeneratorConfig config;
  config.seed = seed;
  config.weeks = weeks;
  const Instance inst = generate(config);
  if (out.empty())
    std::cout << instance_to_json(inst);
  else
    save_instance(out, inst);
  return 0;
}

int cmd_baseline(const Shared& shared, const std::string& out) {
  const Instance inst = load_instance(shared.instance);
  const CapacityTable caps = compute_table(inst, shared.quantiles());
  const BaselinePlan plan = baseline_or_exit(inst, caps);
  const std::string text = baseline_to_json(inst, plan);
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);
  std::cerr << "reserved blocks: " << plan.objective() << '\n';
  for (int w = 0; w < inst.num_weeks; ++w)
    std::cerr << "week " << w << " non-elective places: " << plan.reserved_places(inst, w) << '\n';
  return 0;
}

int cmd_solve(const Shared& shared, const std::string& method, int horizon, std::uint64_t seed,
              const std::string& budget, const std::string& out) {
  const Instance base = load_instance(shared.instance);
  const CapacityTable caps = compute_table(base, shared.quantiles());
  const BaselinePlan weekly = baseline_or_exit(base, caps);
  const Instance inst = with_horizon(base, 0, horizon);
  const BaselinePlan tiled = tile_baseline(weekly, base, 0, inst);
  EngineParams params = shared.engine_params();
  params.iterations = iteration_budget(params, parse_budget(budget), horizon);
  const auto t0 = std::chrono::steady_clock::now();
  const Schedule schedule = solve_horizon(inst, caps, tiled, parse_method(method), params, seed);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto violations = check_feasibility(inst, schedule, caps);
  const auto hours = scheduled_hours(inst, schedule, caps);
  if (!out.empty()) write_file(out, schedule_to_json(inst, schedule));
  std::cout << "objective\t" << objective(schedule) << '\n'
            << "violations\t" << violations.size() << '\n'
            << "overtime_hours\t" << hours.total_overtime_hours << '\n'
            << "q95_hours\t" << hours.total_q95_hours << '\n'
            << "seconds\t" << seconds << '\n';
  return violations.empty() ? 0 : 1;
}

int cmd_roll(const Shared& shared, const std::string& methods, const std::string& horizons, int weeks,
             const std::string& seeds, const std::string& budget, double rho, int workers, bool timing,
             const std::string& out) {
  const Instance base = load_instance(shared.instance);
  const CapacityTable caps = compute_table(base, shared.quantiles());
  const BaselinePlan weekly = baseline_or_exit(base, caps);
  RollingConfig config;
  config.weeks = weeks;
  config.params = shared.engine_params();
  config.budget = parse_budget(budget);
  config.rho = rho;
  config.timing = timing;
  config.arrivals = resolved(GeneratorConfig{}).arrivals;
  const auto seed_list = parse_seeds(seeds);
  ExperimentReport report;
  for (const auto& h : split_list(horizons)) {
    config.horizon = std::stoi(h);
    if (config.horizon < 1 || config.horizon > 4) throw CLI::ValidationError("--horizon", "must lie in 1..4");
    if (config.horizon > weeks) throw CLI::ValidationError("--horizon", "must not exceed --weeks");
    for (const auto& m : split_list(methods)) {
      config.method = parse_method(m);
      report.rows.push_back(run_planning_period(base, caps, weekly, config, seed_list, workers));
      std::cerr << "done: horizon " << config.horizon << ' ' << m << '\n';
    }
  }
  if (out.empty())
    std::cout << report.to_tsv();
  else
    write_file(out, report.to_tsv());
  return 0;
}

int cmd_validate(const Shared& shared, const std::string& schedule_path, const std::string& prev_path, double rho) {
  const Instance base = load_instance(shared.instance);
  const std::string text = read_file(schedule_path);
  const int weeks = schedule_weeks(text);
  const Instance inst = weeks == base.num_weeks ? base : with_horizon(base, 0, weeks);
  const CapacityTable caps = compute_table(inst, shared.quantiles());
  const Schedule schedule = schedule_from_json(inst, text);
  auto violations = check_feasibility(inst, schedule, caps);
  if (!prev_path.empty()) {
    const Schedule prev = schedule_from_json(inst, read_file(prev_path));
    for (auto& v : check_rolling(inst, schedule, prev, rho)) violations.push_back(std::move(v));
  }
  for (const auto& v : violations) {
    std::cout << to_string(v.constraint_id);
    for (int i : v.indices) std::cout << '\t' << i;
    std::cout << '\t' << v.detail << '\n';
  }
  std::cout << (violations.empty() ? "feasible" : "infeasible") << " (" << violations.size() << " violations)\n";
  return violations.empty() ? 0 : 1;
}

int cmd_report(const std::vector<std::string>& files) {
  ExperimentReport merged;
  for (const auto& f : files) merged.merge(ExperimentReport::from_tsv(read_file(f)));
  std::cout << merged.to_tsv() << '\n' << merged.comparison_summary();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operating theatre scheduling: generation, baseline, heuristics and rolling experiments"};
  app.require_subcommand(1);
  Shared shared;
  auto add_instance = [&](CLI::App* cmd) {
    cmd->add_option("--instance", shared.instance, "Instance file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--samples", shared.samples, "Monte-Carlo samples per q95 estimate");
  };

  std::uint64_t seed = 1;
  int weeks = 1;
  std::string out;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic instance");
  gen->add_option("--seed", seed);
  gen->add_option("--weeks", weeks)->check(CLI::Range(1, 52));
  gen->add_option("--out", out);

  auto* base = app.add_subcommand("baseline", "Solve the non-elective reservation problem");
  add_instance(base);
  base->add_option("--out", out);

  std::string method = "hyper-sa", budget = "flat", horizons = "1", seeds = "1", schedule, prev;
  int horizon = 1, workers = 1, period_weeks = 6;
  double rho = 0.1;
  bool no_timing = false;
  auto* solve = app.add_subcommand("solve", "Solve one horizon from the baseline");
  add_instance(solve);
  solve->add_option("--method", method);
  solve->add_option("--horizon", horizon)->check(CLI::Range(1, 4));
  solve->add_option("--seed", seed);
  solve->add_option("--budget", budget);
  solve->add_option("--params", shared.params)->check(CLI::ExistingFile);
  solve->add_option("--out", out);

  auto* roll = app.add_subcommand("roll", "Rolling-horizon planning period over several seeds");
  add_instance(roll);
  roll->add_option("--method", method, "Method or comma-separated list");
  roll->add_option("--horizon", horizons, "Horizon or comma-separated list (1..4)");
  roll->add_option("--weeks", period_weeks, "Planning period in weeks")->check(CLI::Range(1, 52));
  roll->add_option("--seeds", seeds, "Count N (1..N), range a-b or list");
  roll->add_option("--budget", budget);
  roll->add_option("--rho", rho)->check(CLI::Range(0.0, 1.0));
  roll->add_option("--workers", workers)->check(CLI::Range(1, 256));
  roll->add_option("--params", shared.params)->check(CLI::ExistingFile);
  roll->add_flag("--no-timing", no_timing, "Write NA instead of wall-clock time");
  roll->add_option("--out", out);

  auto* validate = app.add_subcommand("validate", "Check a schedule; exit 0 iff feasible");
  add_instance(validate);
  validate->add_option("--schedule", schedule)->required()->check(CLI::ExistingFile);
  validate->add_option("--prev", prev, "Previous schedule (Z*) for the deviation budget")->check(CLI::ExistingFile);
  validate->add_option("--rho", rho)->check(CLI::Range(0.0, 1.0));

  std::vector<std::string> files;
  auto* report = app.add_subcommand("report", "Merge report tables and compare methods");
  report->add_option("files", files)->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) return cmd_gen(seed, weeks, out);
    if (*base) return cmd_baseline(shared, out);
    if (*solve) return cmd_solve(shared, method, horizon, seed, budget, out);
    if (*roll) return cmd_roll(shared, method, horizons, period_weeks, seeds, budget, rho, workers, !no_timing, out);
    if (*validate) return cmd_validate(shared, schedule, prev, rho);
    if (*report) return cmd_report(files);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
