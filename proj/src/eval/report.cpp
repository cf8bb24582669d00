#include "narx/eval/report.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "json.hpp"
#include "narx/core/error.hpp"

namespace narx {

using nlohmann::json;

std::string to_json(const RunResult& r) {
  json j;
  j["model"] = r.model_id;
  j["algorithm"] = r.algorithm;
  j["plan"] = r.plan;
  j["accuracies"] = r.accuracies;
  j["seeds"] = r.seeds;
  return j.dump(2) + "\n";
}

RunResult run_result_from_json(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Format, source + ": " + e.what());
  }
  RunResult r;
  try {
    r.model_id = j.at("model").get<std::string>();
    r.algorithm = j.at("algorithm").get<std::string>();
    r.plan = j.value("plan", std::string());
    r.accuracies = j.at("accuracies").get<std::vector<double>>();
    r.seeds = j.value("seeds", std::vector<std::uint64_t>{});
  } catch (const json::exception& e) {
    fail(ErrorKind::Format, source + ": " + e.what());
  }
  require(!r.accuracies.empty(), ErrorKind::Format, source + ": no accuracies");
  for (double a : r.accuracies)
    require(a >= 0 && a <= 1, ErrorKind::Format, source + ": accuracy " + std::to_string(a) + " outside [0, 1]");
  return r;
}

void save_run_result(const RunResult& r, const std::string& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot write '" + path + "'");
  out << to_json(r);
}

RunResult load_run_result(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open '" + path + "'");
  return run_result_from_json(std::string(std::istreambuf_iterator<char>(in), {}), path);
}

namespace {

ReportRow row_of(const RunResult& r) {
  ReportRow row;
  row.algorithm = r.algorithm;
  row.stats = summarize(r.accuracies);
  return row;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

ComparisonReport build_report(const std::vector<RunResult>& results, const RunResult& base, bool ttest) {
  ComparisonReport rep;
  rep.has_ttest = ttest;
  rep.baseline = row_of(base);
  if (base.accuracies.size() == 1) rep.warnings.push_back("baseline has a single seed; its std is 0");
  for (const auto& r : results) {
    ReportRow row = row_of(r);
    row.label = win_tie_loss(row.stats, rep.baseline.stats);
    if (r.accuracies.size() == 1) rep.warnings.push_back(r.algorithm + " has a single seed; its std is 0");
    if (ttest && row.stats.n >= 2 && rep.baseline.stats.n >= 2) row.ttest = welch_t(row.stats, rep.baseline.stats);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

std::string ComparisonReport::text() const {
  std::size_t width = baseline.algorithm.size();
  for (const auto& r : rows) width = std::max(width, r.algorithm.size());
  std::ostringstream out;
  auto line = [&](const ReportRow& r, const std::string& label) {
    out << r.algorithm << std::string(width + 2 - r.algorithm.size(), ' ') << fmt("%6.2f", 100 * r.stats.mean)
        << " +- " << fmt("%5.2f", 100 * r.stats.std) << "  " << label;
    if (r.ttest) out << "  t=" << fmt("%.3f", r.ttest->t) << " dof=" << fmt("%.2f", r.ttest->dof)
                     << " p=" << fmt("%.3g", r.ttest->p);
    out << '\n';
  };
  line(baseline, " ");
  for (const auto& r : rows) line(r, std::string(1, outcome_letter(r.label)));
  for (const auto& w : warnings) out << "warning: " << w << '\n';
  return out.str();
}

std::string ComparisonReport::csv() const {
  std::ostringstream out;
  out << "algorithm,mean,std,label" << (has_ttest ? ",t,dof,p" : "") << '\n';
  auto line = [&](const ReportRow& r, const std::string& label) {
    out << r.algorithm << ',' << fmt("%.6f", r.stats.mean) << ',' << fmt("%.6f", r.stats.std) << ',' << label;
    if (has_ttest) {
      if (r.ttest)
        out << ',' << fmt("%.6f", r.ttest->t) << ',' << fmt("%.6f", r.ttest->dof) << ',' << fmt("%.6g", r.ttest->p);
      else
        out << ",,,";
    }
    out << '\n';
  };
  line(baseline, "");
  for (const auto& r : rows) line(r, std::string(1, outcome_letter(r.label)));
  return out.str();
}

std::vector<SummaryRow> load_summary_csv(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open '" + path + "'");
  std::vector<SummaryRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line_no == 1) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    const std::string where = path + ": line " + std::to_string(line_no) + ": ";
    require(cells.size() == 6, ErrorKind::Format, where + "expected 6 columns");
    SummaryRow r;
    r.group = cells[0];
    r.algorithm = cells[1];
    r.dataset = cells[2];
    try {
      r.mean = parse_hundredths(cells[3]);
      r.std = parse_hundredths(cells[4]);
      if (!cells[5].empty()) {
        require(cells[5].size() == 1, ErrorKind::Format, "label must be one letter");
        r.label = parse_outcome(cells[5][0]);
      }
    } catch (const Error& e) {
      fail(ErrorKind::Format, where + e.what());
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

LabelCheck check_summary_labels(const std::vector<SummaryRow>& rows) {
  std::map<std::pair<std::string, std::string>, const SummaryRow*> base;
  for (const auto& r : rows)
    if (r.algorithm == "baseline") base[{r.group, r.dataset}] = &r;
  LabelCheck out;
  for (const auto& r : rows) {
    if (!r.label || r.algorithm == "baseline") continue;
    auto it = base.find({r.group, r.dataset});
    require(it != base.end(), ErrorKind::Format, "no baseline row for " + r.group + "/" + r.dataset);
    const SummaryRow& b = *it->second;
    const Outcome got = win_tie_loss_hundredths(r.mean, r.std, b.mean, b.std);
    ++out.checked;
    if (got != *r.label)
      out.mismatches.push_back(r.group + "/" + r.dataset + "/" + r.algorithm + ": computed " +
                               outcome_letter(got) + ", expected " + outcome_letter(*r.label));
  }
  return out;
}

}  // namespace narx
