#pragma once

#include "narx/clrs/probes.hpp"
#include "narx/model/heads.hpp"

namespace narx {

/// Scalar loss of decoder logits against probe targets. Pointer targets are
/// graph-local node indices. Mask: mean BCE on logits; pointer: mean
/// cross-entropy over each row's scores; categorical: cross-entropy; scalar:
/// mean squared error against target / spec.scale.
Var probe_loss(Var logits, const std::vector<double>& targets, const clrs::ProbeSpec& spec, const Topology& topo,
               const PairIndex* pairs = nullptr);

/// Correct / total under the probe's scoring rule: argmax rows for pointers
/// and categoricals, thresholded logits for masks, 5% relative error for
/// scalars.
struct Hits {
  std::size_t correct = 0;
  std::size_t total = 0;
  double rate() const { return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total); }
  Hits& operator+=(const Hits& o) {
    correct += o.correct;
    total += o.total;
    return *this;
  }
};

Hits probe_hits(const Tensor& logits, const std::vector<double>& targets, const clrs::ProbeSpec& spec,
                const Topology& topo, const PairIndex* pairs = nullptr);

inline constexpr double kScalarTolerance = 0.05;

}  // namespace narx
