#include "narx/training/loss.hpp"

#include <cmath>

#include "narx/core/error.hpp"

namespace narx {

using clrs::ProbeKind;

namespace {

void expect_rows(const Tensor& logits, std::size_t rows, std::size_t cols, const clrs::ProbeSpec& spec) {
  require(logits.rank() == 2 && logits.shape()[0] == rows && logits.shape()[1] == cols, ErrorKind::Dimension,
          "probe '" + spec.name + "': logits " + shape_str(logits.shape()) + ", expected [" + std::to_string(rows) +
              ", " + std::to_string(cols) + "]");
}

// Global pair index of (row, target) for every node row.
IndexList pointer_targets(const std::vector<double>& targets, const Topology& topo, const PairIndex& pairs,
                          const clrs::ProbeSpec& spec) {
  std::vector<Index> idx(topo.num_nodes);
  for (std::size_t g = 0; g < topo.num_graphs; ++g) {
    const auto lo = topo.node_offsets[g], n = topo.node_offsets[g + 1] - lo;
    for (auto i = lo; i < lo + n; ++i) {
      const double t = targets[i];
      if (!(t >= 0 && t < static_cast<double>(n) && t == std::floor(t)))
        fail(ErrorKind::Index, "pointer probe '" + spec.name + "' target " + std::to_string(t) + " outside [0, " +
                  std::to_string(n) + ")");
      idx[i] = static_cast<Index>(pairs.row_start[i] + static_cast<std::size_t>(t));
    }
  }
  return make_index(std::move(idx));
}

}  // namespace

Var probe_loss(Var logits, const std::vector<double>& targets, const clrs::ProbeSpec& spec, const Topology& topo,
               const PairIndex* pairs) {
  const Tensor& z = logits.value();
  switch (spec.kind) {
    case ProbeKind::Mask: {
      require(z.size() == targets.size(), ErrorKind::Dimension,
              "probe '" + spec.name + "': " + std::to_string(z.size()) + " logits vs " +
                  std::to_string(targets.size()) + " targets");
      Tensor y(z.shape());
      for (std::size_t i = 0; i < targets.size(); ++i) y[i] = static_cast<Real>(targets[i]);
      return bce_with_logits(logits, y);
    }
    case ProbeKind::Pointer: {
      require(pairs != nullptr, ErrorKind::Contract, "pointer loss needs a pair index");
      expect_rows(z, pairs->size(), 1, spec);
      require(targets.size() == topo.num_nodes, ErrorKind::Dimension,
              "pointer probe '" + spec.name + "' needs one target per node");
      Var lse = segment_logsumexp(logits, pairs->row, topo.num_nodes);
      Var picked = gather_rows(logits, pointer_targets(targets, topo, *pairs, spec));
      return mean(sub(lse, picked));
    }
    case ProbeKind::Categorical: {
      const auto k = static_cast<std::size_t>(spec.categories);
      const std::size_t rows = targets.size();
      expect_rows(z, rows, k, spec);
      std::vector<Index> seg(rows * k), pick(rows);
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < k; ++c) seg[r * k + c] = static_cast<Index>(r);
        require(targets[r] >= 0 && targets[r] < static_cast<double>(k), ErrorKind::Index,
                "categorical probe '" + spec.name + "' class out of range");
        pick[r] = static_cast<Index>(r * k + static_cast<std::size_t>(targets[r]));
      }
      Var flat = reshape(logits, {rows * k, 1});
      Var lse = segment_logsumexp(flat, make_index(std::move(seg)), rows);
      return mean(sub(lse, gather_rows(flat, make_index(std::move(pick)))));
    }
    case ProbeKind::Scalar: {
      require(z.size() == targets.size(), ErrorKind::Dimension,
              "probe '" + spec.name + "': " + std::to_string(z.size()) + " predictions vs " +
                  std::to_string(targets.size()) + " targets");
      Tensor y(z.shape());
      for (std::size_t i = 0; i < targets.size(); ++i) y[i] = static_cast<Real>(targets[i] / spec.scale);
      Var d = sub(logits, logits.tape().constant(std::move(y)));
      return mean(mul(d, d));
    }
  }
  fail(ErrorKind::Config, "unknown probe kind");
}

Hits probe_hits(const Tensor& logits, const std::vector<double>& targets, const clrs::ProbeSpec& spec,
                const Topology& topo, const PairIndex* pairs) {
  Hits h;
  switch (spec.kind) {
    case ProbeKind::Mask:
      for (std::size_t i = 0; i < targets.size(); ++i) h.correct += (logits[i] > 0) == (targets[i] > 0.5);
      h.total = targets.size();
      break;
    case ProbeKind::Pointer:
      require(pairs != nullptr, ErrorKind::Contract, "pointer accuracy needs a pair index");
      for (std::size_t g = 0; g < topo.num_graphs; ++g) {
        const auto lo = topo.node_offsets[g], n = topo.node_offsets[g + 1] - lo;
        for (auto i = lo; i < lo + n; ++i) {
          const auto start = pairs->row_start[i];
          std::size_t best = 0;
          for (std::size_t j = 1; j < n; ++j)
            if (logits[start + j] > logits[start + best]) best = j;
          h.correct += static_cast<double>(best) == targets[i];
        }
      }
      h.total = topo.num_nodes;
      break;
    case ProbeKind::Categorical: {
      const auto k = static_cast<std::size_t>(spec.categories);
      for (std::size_t r = 0; r < targets.size(); ++r) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < k; ++c)
          if (logits[r * k + c] > logits[r * k + best]) best = c;
        h.correct += static_cast<double>(best) == targets[r];
      }
      h.total = targets.size();
      break;
    }
    case ProbeKind::Scalar:
      for (std::size_t i = 0; i < targets.size(); ++i) {
        const double pred = static_cast<double>(logits[i]) * spec.scale;
        const double tol = kScalarTolerance * std::max(std::abs(targets[i]), 1e-12);
        h.correct += std::abs(pred - targets[i]) <= tol;
      }
      h.total = targets.size();
      break;
  }
  return h;
}

}  // namespace narx
