#include "ots/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "ots/io.hpp"
#include "ots/stats.hpp"

namespace ots {

namespace {

constexpr const char* kHeader =
    "Horizon Length (weeks)\tMethod\tBudget\tMean\tVariance\tWorst\tBest\tTime (seconds)\tSamples";

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sample_text(double v) {
  // Samples are patient counts; keep them exact.
  if (v == static_cast<double>(static_cast<long long>(v))) return std::to_string(static_cast<long long>(v));
  return fixed(v, 6);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw FormatError(where, "expected a number, found \"" + text + "\"");
  }
}

}  // namespace

double ReportRow::mean() const { return ots::mean(samples); }
double ReportRow::variance() const { return sample_variance(samples); }
double ReportRow::worst() const { return samples.empty() ? 0.0 : *std::min_element(samples.begin(), samples.end()); }
double ReportRow::best() const { return samples.empty() ? 0.0 : *std::max_element(samples.begin(), samples.end()); }

std::string ExperimentReport::to_tsv() const {
  std::ostringstream os;
  os << kHeader << '\n';
  for (const auto& r : rows) {
    os << r.horizon << '\t' << r.method << '\t' << r.budget << '\t' << fixed(r.mean()) << '\t' << fixed(r.variance())
       << '\t' << sample_text(r.worst()) << '\t' << sample_text(r.best()) << '\t'
       << (r.seconds ? fixed(*r.seconds) : std::string("NA")) << '\t';
    for (std::size_t i = 0; i < r.samples.size(); ++i) os << (i ? "," : "") << sample_text(r.samples[i]);
    os << '\n';
  }
  return os.str();
}

ExperimentReport ExperimentReport::from_tsv(const std::string& text) {
  ExperimentReport report;
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != kHeader) throw FormatError("report.header", "unexpected column header");
  int n = 0;
  while (std::getline(is, line)) {
    ++n;
    if (line.empty()) continue;
    const std::string where = "report.row[" + std::to_string(n) + "]";
    const auto cells = split(line, '\t');
    if (cells.size() != 9) throw FormatError(where, "expected 9 columns");
    ReportRow row;
    row.horizon = static_cast<int>(parse_double(cells[0], where + ".horizon"));
    row.method = cells[1];
    row.budget = cells[2];
    if (cells[7] != "NA") row.seconds = parse_double(cells[7], where + ".time");
    if (!cells[8].empty())
      for (const auto& s : split(cells[8], ',')) row.samples.push_back(parse_double(s, where + ".samples"));
    report.rows.push_back(std::move(row));
  }
  return report;
}

void ExperimentReport::merge(const ExperimentReport& other) {
  for (const auto& row : other.rows) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const ReportRow& r) {
      return r.horizon == row.horizon && r.method == row.method && r.budget == row.budget;
    });
    if (it == rows.end()) {
      rows.push_back(row);
      continue;
    }
    const double n1 = static_cast<double>(it->samples.size()), n2 = static_cast<double>(row.samples.size());
    if (it->seconds && row.seconds && n1 + n2 > 0)
      it->seconds = (*it->seconds * n1 + *row.seconds * n2) / (n1 + n2);
    else
      it->seconds.reset();
    it->samples.insert(it->samples.end(), row.samples.begin(), row.samples.end());
  }
}

std::string ExperimentReport::comparison_summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) {
      const auto& a = rows[i];
      const auto& b = rows[j];
      if (i == j || a.horizon != b.horizon || a.budget != b.budget) continue;
      if (a.samples.size() < 2 || b.samples.size() < 2) continue;
      const auto w = welch_test(a.samples, b.samples);
      os << "horizon " << a.horizon << " (" << a.budget << "): " << a.method << " > " << b.method
         << "  t=" << fixed(w.t, 4) << " df=" << fixed(w.df, 1) << " p=" << fixed(w.p_greater, 4) << '\n';
    }
  return os.str();
}

}  // namespace ots
