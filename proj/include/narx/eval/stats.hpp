#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace narx {

/// Fraction of positions where preds and labels agree. Empty or unequal
/// inputs are a contract error.
double accuracy(std::span<const int> preds, std::span<const int> labels);

/// Predictions from logits: sigmoid(z) > 0.5, i.e. z > 0.
std::vector<int> threshold_logits(std::span<const float> logits);
std::vector<int> threshold_logits(std::span<const double> logits);

struct Summary {
  double mean = 0;
  double std = 0;  // sample standard deviation, 0 for a single value
  std::size_t n = 0;
};

Summary summarize(std::span<const double> xs);

enum class Outcome { Win, Tie, Loss };

char outcome_letter(Outcome o);
Outcome parse_outcome(char c);

/// W if mean_m - std_m > mean_b, L if mean_b - std_b > mean_m, else T.
Outcome win_tie_loss(const Summary& model, const Summary& base);

/// Same rule on values given in fixed-point hundredths, so printed
/// two-decimal figures compare exactly.
Outcome win_tie_loss_hundredths(std::int64_t mean_m, std::int64_t std_m, std::int64_t mean_b, std::int64_t std_b);

/// Parses a non-negative decimal with at most two fraction digits into
/// hundredths ("77.16" -> 7716). Anything else is a format error.
std::int64_t parse_hundredths(const std::string& text);

struct WelchResult {
  double t = 0;
  double dof = 0;
  double p = 1;  // two-sided
};

/// Welch's unequal-variance t-test on raw samples (each of size >= 2).
WelchResult welch_t(std::span<const double> xs, std::span<const double> ys);
/// Same test from summary statistics (sample std, n >= 2).
WelchResult welch_t(const Summary& x, const Summary& y);

}  // namespace narx
