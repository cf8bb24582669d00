#include "narx/eval/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <charconv>
#include <cmath>
#include <limits>

#include "narx/core/error.hpp"

namespace narx {

double accuracy(std::span<const int> preds, std::span<const int> labels) {
  require(!preds.empty(), ErrorKind::Contract, "accuracy of an empty prediction list");
  require(preds.size() == labels.size(), ErrorKind::Contract,
          "accuracy: " + std::to_string(preds.size()) + " predictions for " + std::to_string(labels.size()) +
              " labels");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) hits += preds[i] == labels[i];
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

namespace {

template <class T>
std::vector<int> threshold(std::span<const T> logits) {
  std::vector<int> out;
  out.reserve(logits.size());
  for (T z : logits) out.push_back(z > 0 ? 1 : 0);
  return out;
}

}  // namespace

std::vector<int> threshold_logits(std::span<const float> logits) { return threshold(logits); }
std::vector<int> threshold_logits(std::span<const double> logits) { return threshold(logits); }

Summary summarize(std::span<const double> xs) {
  require(!xs.empty(), ErrorKind::Contract, "summary of an empty sample");
  Summary s;
  s.n = xs.size();
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

char outcome_letter(Outcome o) {
  switch (o) {
    case Outcome::Win: return 'W';
    case Outcome::Tie: return 'T';
    case Outcome::Loss: return 'L';
  }
  return '?';
}

Outcome parse_outcome(char c) {
  switch (c) {
    case 'W': return Outcome::Win;
    case 'T': return Outcome::Tie;
    case 'L': return Outcome::Loss;
  }
  fail(ErrorKind::Format, std::string("outcome must be W, T or L, got '") + c + "'");
}

Outcome win_tie_loss(const Summary& model, const Summary& base) {
  require(model.std >= 0 && base.std >= 0, ErrorKind::Domain, "standard deviations must be non-negative");
  if (model.mean - model.std > base.mean) return Outcome::Win;
  if (base.mean - base.std > model.mean) return Outcome::Loss;
  return Outcome::Tie;
}

Outcome win_tie_loss_hundredths(std::int64_t mean_m, std::int64_t std_m, std::int64_t mean_b, std::int64_t std_b) {
  require(std_m >= 0 && std_b >= 0, ErrorKind::Domain, "standard deviations must be non-negative");
  if (mean_m - std_m > mean_b) return Outcome::Win;
  if (mean_b - std_b > mean_m) return Outcome::Loss;
  return Outcome::Tie;
}

std::int64_t parse_hundredths(const std::string& text) {
  const auto dot = text.find('.');
  const std::string whole = text.substr(0, dot);
  std::string frac = dot == std::string::npos ? "" : text.substr(dot + 1);
  auto bad = [&] { fail(ErrorKind::Format, "'" + text + "' is not a decimal with at most two fraction digits"); };
  if (whole.empty() || frac.size() > 2) bad();
  for (char c : whole + frac)
    if (c < '0' || c > '9') bad();
  while (frac.size() < 2) frac += '0';
  std::int64_t w = 0, f = 0;
  std::from_chars(whole.data(), whole.data() + whole.size(), w);
  std::from_chars(frac.data(), frac.data() + frac.size(), f);
  return w * 100 + f;
}

namespace {

WelchResult welch_from(double mx, double vx, double nx, double my, double vy, double ny) {
  const double ax = vx / nx, ay = vy / ny;
  const double se2 = ax + ay;
  WelchResult r;
  if (se2 == 0) {
    require(mx == my, ErrorKind::Domain, "Welch t is infinite: both samples have zero variance and different means");
    r.t = 0;
    r.dof = nx + ny - 2;
    r.p = 1;
    return r;
  }
  r.t = (mx - my) / std::sqrt(se2);
  r.dof = se2 * se2 / (ax * ax / (nx - 1) + ay * ay / (ny - 1));
  const boost::math::students_t dist(r.dof);
  r.p = 2 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
  return r;
}

}  // namespace

WelchResult welch_t(std::span<const double> xs, std::span<const double> ys) {
  require(xs.size() >= 2 && ys.size() >= 2, ErrorKind::Contract, "Welch t needs at least two values per sample");
  const Summary x = summarize(xs), y = summarize(ys);
  return welch_t(x, y);
}

WelchResult welch_t(const Summary& x, const Summary& y) {
  require(x.n >= 2 && y.n >= 2, ErrorKind::Contract, "Welch t needs at least two values per sample");
  return welch_from(x.mean, x.std * x.std, static_cast<double>(x.n), y.mean, y.std * y.std,
                    static_cast<double>(y.n));
}

}  // namespace narx
