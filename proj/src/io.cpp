#include "ots/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ots {

using nlohmann::json;

namespace {

/// Cursor over a JSON document that remembers where it is, for error messages.
class Node {
 public:
  Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return value_; }

  [[noreturn]] void fail(const std::string& message) const { throw FormatError(path_, message); }

  Node operator[](const char* key) const {
    if (!value_.is_object()) fail("expected an object");
    auto it = value_.find(key);
    if (it == value_.end()) throw FormatError(path_ + "." + key, "missing field");
    return Node(*it, path_ + "." + key);
  }
  bool has(const char* key) const { return value_.is_object() && value_.contains(key); }

  Node operator[](int i) const { return Node(value_.at(static_cast<std::size_t>(i)), path_ + "[" + std::to_string(i) + "]"); }
  Node operator[](std::size_t i) const { return (*this)[static_cast<int>(i)]; }

  std::size_t size(std::size_t expected = SIZE_MAX) const {
    if (!value_.is_array()) fail("expected an array");
    if (expected != SIZE_MAX && value_.size() != expected)
      fail("expected " + std::to_string(expected) + " entries, found " + std::to_string(value_.size()));
    return value_.size();
  }

  std::int64_t integer(std::int64_t lo = 0, std::int64_t hi = INT64_MAX) const {
    if (!value_.is_number_integer()) fail("expected an integer");
    const auto v = value_.get<std::int64_t>();
    if (v < lo || v > hi) fail("value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
  }
  int count(int hi = INT32_MAX) const { return static_cast<int>(integer(0, hi)); }
  double number() const {
    if (!value_.is_number()) fail("expected a number");
    return value_.get<double>();
  }
  bool flag() const { return integer(0, 1) == 1; }

 private:
  const json& value_;
  std::string path_;
};

json parse(const std::string& text, const std::string& root) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(root, std::string("malformed document: ") + e.what());
  }
}

void check_header(const Node& doc, const char* kind) {
  const auto version = doc["schema_version"].integer(0);
  if (version != kSchemaVersion)
    throw FormatError(doc.path() + ".schema_version",
                      "unsupported version " + std::to_string(version) + " (expected " + std::to_string(kSchemaVersion) + ")");
  if (doc.has("kind") && doc["kind"].raw() != kind)
    throw FormatError(doc.path() + ".kind", std::string("expected \"") + kind + "\"");
}

json matrix_json(const BoolMatrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c) ? 1 : 0);
    rows.push_back(std::move(row));
  }
  return rows;
}

BoolMatrix read_matrix(const Node& node, int rows, int cols) {
  BoolMatrix m(rows, cols);
  node.size(rows);
  for (int r = 0; r < rows; ++r) {
    const Node row = node[r];
    row.size(cols);
    for (int c = 0; c < cols; ++c) m.set(r, c, row[c].flag());
  }
  return m;
}

json params_json(const std::vector<LognormalParams>& params) {
  json out = json::array();
  for (const auto& p : params) out.push_back({p.meanlog, p.sdlog});
  return out;
}

std::vector<LognormalParams> read_params(const Node& node, int n) {
  std::vector<LognormalParams> out;
  node.size(n);
  for (int s = 0; s < n; ++s) {
    const Node entry = node[s];
    entry.size(2);
    out.push_back({entry[0].number(), entry[1].number()});
    if (out.back().sdlog < 0) entry[1].fail("sdlog must be non-negative");
  }
  return out;
}

template <typename T>
json vector_json(const std::vector<T>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(static_cast<T>(x));
  return out;
}

json flags_json(const std::vector<std::uint8_t>& v) {
  json out = json::array();
  for (auto x : v) out.push_back(x ? 1 : 0);
  return out;
}

void expect_flags(const Node& node, const std::vector<std::uint8_t>& derived) {
  node.size(derived.size());
  for (std::size_t i = 0; i < derived.size(); ++i)
    if (node[i].flag() != (derived[i] != 0)) node[i].fail("disagrees with the calendar descriptor");
}

json triples(const std::set<Assignment>& set, const std::vector<std::int64_t>* ids = nullptr) {
  json out = json::array();
  for (const auto& a : set) out.push_back({ids ? (*ids)[a.entity] : a.entity, a.room, a.block});
  return out;
}

struct Bounds {
  int entities;
  int rooms;
  int blocks;
};

Assignment read_triple(const Node& node, const Bounds& b) {
  node.size(3);
  return {node[0].count(b.entities - 1), node[1].count(b.rooms - 1), node[2].count(b.blocks - 1)};
}

void read_structure(const Node& doc, const Instance& inst, Schedule& out) {
  const Bounds spec{inst.num_specialties, inst.num_ors, inst.num_blocks};
  const Bounds surg{inst.num_surgeons, inst.num_ors, inst.num_blocks};
  const auto weeks = doc["weeks"].count();
  if (weeks != inst.num_weeks)
    doc["weeks"].fail("file covers " + std::to_string(weeks) + " weeks, instance has " + std::to_string(inst.num_weeks));
  const Node xs = doc["specialty_assign"];
  for (std::size_t i = 0, n = xs.size(); i < n; ++i) out.specialty_assign.insert(read_triple(xs[i], spec));
  const Node ys = doc["surgeon_assign"];
  for (std::size_t i = 0, n = ys.size(); i < n; ++i) out.surgeon_assign.insert(read_triple(ys[i], surg));
  const Node psi = doc["nonelective_reserve"];
  for (std::size_t i = 0, n = psi.size(); i < n; ++i) {
    const Node e = psi[i];
    e.size(4);
    const Assignment a{e[0].count(spec.entities - 1), e[1].count(spec.rooms - 1), e[2].count(spec.blocks - 1)};
    if (out.nonelective_reserve.contains(a)) e.fail("duplicate reservation entry");
    out.nonelective_reserve[a] = e[3].count();
  }
}

void write_structure(json& doc, const Instance& inst, const Schedule& s) {
  doc["schema_version"] = kSchemaVersion;
  doc["weeks"] = inst.num_weeks;
  doc["specialty_assign"] = triples(s.specialty_assign);
  doc["surgeon_assign"] = triples(s.surgeon_assign);
  json psi = json::array();
  for (const auto& [a, n] : s.nonelective_reserve) psi.push_back({a.entity, a.room, a.block, n});
  doc["nonelective_reserve"] = psi;
}

std::string render(const json& doc) { return doc.dump() + "\n"; }

}  // namespace

std::string instance_to_json(const Instance& inst) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "instance";
  doc["surgeons"] = inst.num_surgeons;
  doc["patients"] = inst.num_patients;
  doc["specialties"] = inst.num_specialties;
  doc["ors"] = inst.num_ors;
  doc["blocks_per_week"] = inst.blocks_per_week();
  doc["weeks"] = inst.num_weeks;
  doc["m_psi"] = inst.max_nonelective_per_block;
  doc["m_p"] = inst.max_elective_per_block;
  doc["xi"] = inst.weekend_or_limit;
  doc["calendar"] = {{"weekdays", inst.calendar.weekdays},
                     {"weekend_days", inst.calendar.weekend_days},
                     {"full_day_hours", inst.calendar.full_day_hours},
                     {"half_day_hours", inst.calendar.half_day_hours}};
  doc["can_treat"] = matrix_json(inst.can_treat);
  doc["surgeon_available"] = matrix_json(inst.surgeon_available);
  doc["surgeon_specialty"] = matrix_json(inst.surgeon_specialty);
  doc["patient_specialty"] = matrix_json(inst.patient_specialty);
  doc["or_equipped"] = matrix_json(inst.or_equipped);
  doc["is_full_day"] = flags_json(inst.is_full_day);
  doc["is_weekend"] = flags_json(inst.is_weekend);
  doc["block_week"] = matrix_json(inst.block_week);
  doc["weekly_nonelective_target"] = vector_json(inst.weekly_nonelective_target);
  doc["duration_params"] = params_json(inst.elective_durations);
  if (!inst.nonelective_durations.empty()) doc["nonelective_duration_params"] = params_json(inst.nonelective_durations);
  doc["patient_urgency"] = vector_json(inst.patient_urgency);
  doc["patient_wait_days"] = vector_json(inst.patient_wait_days);
  doc["patient_ids"] = vector_json(inst.patient_ids);
  return render(doc);
}

Instance instance_from_json(const std::string& text) {
  const json raw = parse(text, "instance");
  const Node doc(raw, "instance");
  check_header(doc, "instance");
  Calendar cal;
  const Node c = doc["calendar"];
  cal.weekdays = c["weekdays"].count(7);
  cal.weekend_days = c["weekend_days"].count(7);
  cal.full_day_hours = c["full_day_hours"].number();
  cal.half_day_hours = c["half_day_hours"].number();
  const int H = doc["surgeons"].count();
  const int P = doc["patients"].count();
  const int S = doc["specialties"].count();
  const int R = doc["ors"].count();
  const int W = doc["weeks"].count();
  if (W < 1) doc["weeks"].fail("must be at least 1");
  if (doc["blocks_per_week"].count() != cal.blocks_per_week())
    doc["blocks_per_week"].fail("disagrees with the calendar descriptor");

  Instance inst = Instance::empty(H, P, S, R, W, cal);
  inst.max_nonelective_per_block = doc["m_psi"].count();
  inst.max_elective_per_block = doc["m_p"].count();
  inst.weekend_or_limit = doc["xi"].count();
  const int T = inst.num_blocks;
  inst.can_treat = read_matrix(doc["can_treat"], P, H);
  inst.surgeon_available = read_matrix(doc["surgeon_available"], H, T);
  inst.surgeon_specialty = read_matrix(doc["surgeon_specialty"], H, S);
  inst.patient_specialty = read_matrix(doc["patient_specialty"], P, S);
  inst.or_equipped = read_matrix(doc["or_equipped"], R, S);
  const Node targets = doc["weekly_nonelective_target"];
  targets.size(S);
  for (int s = 0; s < S; ++s) inst.weekly_nonelective_target[s] = targets[s].count();
  inst.elective_durations = read_params(doc["duration_params"], S);
  if (doc.has("nonelective_duration_params"))
    inst.nonelective_durations = read_params(doc["nonelective_duration_params"], S);
  const Node urgency = doc["patient_urgency"];
  const Node wait = doc["patient_wait_days"];
  const Node ids = doc["patient_ids"];
  urgency.size(P);
  wait.size(P);
  ids.size(P);
  for (int p = 0; p < P; ++p) {
    inst.patient_urgency[p] = static_cast<int>(urgency[p].integer(1, 3));
    inst.patient_wait_days[p] = wait[p].number();
    if (inst.patient_wait_days[p] < 0) wait[p].fail("must be non-negative");
    inst.patient_ids[p] = ids[p].integer(INT64_MIN);
  }
  try {
    inst.finalize();
  } catch (const InstanceError& e) {
    throw FormatError("instance", e.what());
  }
  expect_flags(doc["is_full_day"], inst.is_full_day);
  expect_flags(doc["is_weekend"], inst.is_weekend);
  const Node bw = doc["block_week"];
  if (read_matrix(bw, T, W) != inst.block_week) bw.fail("disagrees with the calendar descriptor");
  return inst;
}

std::string schedule_to_json(const Instance& inst, const Schedule& s) {
  json doc;
  write_structure(doc, inst, s);
  doc["kind"] = "schedule";
  doc["patient_assign"] = triples(s.patient_assign, &inst.patient_ids);
  return render(doc);
}

Schedule schedule_from_json(const Instance& inst, const std::string& text) {
  const json raw = parse(text, "schedule");
  const Node doc(raw, "schedule");
  check_header(doc, "schedule");
  Schedule out;
  read_structure(doc, inst, out);
  const Node zs = doc["patient_assign"];
  for (std::size_t i = 0, n = zs.size(); i < n; ++i) {
    const Node e = zs[i];
    e.size(3);
    const auto id = e[0].integer(INT64_MIN);
    const int p = inst.patient_index(id);
    if (p < 0) e[0].fail("unknown patient id " + std::to_string(id));
    out.patient_assign.insert({p, e[1].count(inst.num_ors - 1), e[2].count(inst.num_blocks - 1)});
  }
  return out;
}

std::string baseline_to_json(const Instance& inst, const BaselinePlan& plan) {
  json doc;
  write_structure(doc, inst, plan.schedule);
  doc["kind"] = "baseline";
  return render(doc);
}

BaselinePlan baseline_from_json(const Instance& inst, const std::string& text) {
  const json raw = parse(text, "baseline");
  const Node doc(raw, "baseline");
  check_header(doc, "baseline");
  BaselinePlan plan;
  read_structure(doc, inst, plan.schedule);
  return plan;
}

EngineParams params_from_json(const std::string& text, EngineParams params) {
  const json raw = parse(text, "params");
  const Node doc(raw, "params");
  if (!raw.is_object()) doc.fail("expected an object");
  auto real = [&](const char* key, double& field) {
    if (doc.has(key)) field = doc[key].number();
  };
  auto whole = [&](const char* key, int& field) {
    if (doc.has(key)) field = doc[key].count();
  };
  real("initial_temperature", params.initial_temperature);
  real("cooling", params.cooling);
  real("reheat", params.reheat);
  real("min_temperature", params.min_temperature);
  real("max_temperature", params.max_temperature);
  whole("iterations", params.iterations);
  whole("block_size", params.block_size);
  whole("tabu_tenure", params.tabu_tenure);
  whole("twd_initial_length", params.twd_initial_length);
  whole("twd_shrink_every", params.twd_shrink_every);
  whole("twd_resample_limit", params.twd_resample_limit);
  whole("generation_attempts", params.generation_attempts);
  if (doc.has("sa_reheat")) {
    const auto& v = doc["sa_reheat"].raw();
    if (!v.is_boolean()) doc["sa_reheat"].fail("expected true or false");
    params.sa_reheat = v.get<bool>();
  }
  if (doc.has("kinds")) {
    const Node kinds = doc["kinds"];
    params.kinds.clear();
    for (std::size_t i = 0, n = kinds.size(); i < n; ++i) {
      const auto& v = kinds[i].raw();
      auto kind = v.is_string() ? move_kind_from_string(v.get<std::string>()) : std::nullopt;
      if (!kind) kinds[i].fail("unknown move kind");
      params.kinds.push_back(*kind);
    }
    if (params.kinds.empty()) kinds.fail("at least one move kind is required");
  }
  for (const auto& [key, _] : raw.items())
    if (!std::set<std::string>{"initial_temperature", "cooling", "reheat", "min_temperature", "max_temperature",
                               "iterations", "block_size", "tabu_tenure", "twd_initial_length", "twd_shrink_every",
                               "twd_resample_limit", "generation_attempts", "sa_reheat", "kinds"}
             .contains(key))
      throw FormatError("params." + key, "unknown field");
  if (!(params.initial_temperature > 0) || !(params.cooling > 0 && params.cooling < 1) || !(params.reheat > 1) ||
      params.block_size < 1)
    doc.fail("temperatures must be positive with cooling < 1 < reheat, block_size >= 1");
  return params;
}

int schedule_weeks(const std::string& text) {
  const json raw = parse(text, "schedule");
  return Node(raw, "schedule")["weeks"].count();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

Instance load_instance(const std::filesystem::path& path) { return instance_from_json(read_file(path)); }

void save_instance(const std::filesystem::path& path, const Instance& instance) {
  write_file(path, instance_to_json(instance));
}

}  // namespace ots
