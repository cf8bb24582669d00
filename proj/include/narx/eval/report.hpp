#pragma once

#include <optional>
#include <string>
#include <vector>

#include "narx/eval/stats.hpp"

namespace narx {

/// Test accuracies of one model over several seeds.
struct RunResult {
  std::string model_id;
  std::string algorithm;  // pretraining algorithm, or "baseline"
  std::string plan;
  std::vector<double> accuracies;
  std::vector<std::uint64_t> seeds;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

std::string to_json(const RunResult& r);
/// Format error naming `source` on malformed input.
RunResult run_result_from_json(const std::string& text, const std::string& source);
void save_run_result(const RunResult& r, const std::string& path);
RunResult load_run_result(const std::string& path);

struct ReportRow {
  std::string algorithm;
  Summary stats;
  Outcome label = Outcome::Tie;
  std::optional<WelchResult> ttest;
};

struct ComparisonReport {
  ReportRow baseline;
  std::vector<ReportRow> rows;
  std::vector<std::string> warnings;
  bool has_ttest = false;

  /// Aligned table for terminals.
  std::string text() const;
  /// algorithm,mean,std,label[,t,dof,p]; the baseline row has an empty label.
  std::string csv() const;
};

/// Labels every result against the baseline. Single-seed rows keep std 0
/// and add a warning. With `ttest`, rows where both sides have at least two
/// seeds get Welch's t.
ComparisonReport build_report(const std::vector<RunResult>& results, const RunResult& base, bool ttest = false);

/// One row of a summary-statistics table: mean and std as printed with two
/// decimals, plus an optional expected label.
struct SummaryRow {
  std::string group;
  std::string algorithm;
  std::string dataset;
  std::int64_t mean = 0;  // hundredths
  std::int64_t std = 0;
  std::optional<Outcome> label;
};

/// Reads "group,algorithm,dataset,mean,std,label" CSV. Rows whose algorithm
/// is "baseline" are the reference for their (group, dataset).
std::vector<SummaryRow> load_summary_csv(const std::string& path);

struct LabelCheck {
  std::size_t checked = 0;
  std::vector<std::string> mismatches;
};

/// Recomputes each labeled row against its group's baseline in exact
/// hundredths and compares with the expected label.
LabelCheck check_summary_labels(const std::vector<SummaryRow>& rows);

}  // namespace narx
