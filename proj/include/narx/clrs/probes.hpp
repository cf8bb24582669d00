#pragma once

#include <string>
#include <vector>

#include "narx/clrs/algorithms.hpp"

namespace narx::clrs {

enum class Location { Node, Edge, Graph };
enum class ProbeKind { Pointer, Mask, Categorical, Scalar };

std::string_view to_string(Location loc);
std::string_view to_string(ProbeKind kind);

/// Typed supervision or input slot.
struct ProbeSpec {
  std::string name;
  Location location = Location::Node;
  ProbeKind kind = ProbeKind::Scalar;
  int categories = 0;  // Categorical only
  double scale = 1.0;  // Scalar targets are divided by this inside losses

  friend bool operator==(const ProbeSpec&, const ProbeSpec&) = default;
};

/// Values of one probe for one instance: one entry per node / edge, or one
/// entry for graph-level probes. Pointers hold node indices, masks 0/1,
/// categoricals the class index.
struct ProbeValue {
  ProbeSpec spec;
  std::vector<double> values;

  friend bool operator==(const ProbeValue&, const ProbeValue&) = default;
};

using ProbeSet = std::vector<ProbeValue>;

struct AlgoTrace {
  AlgoName algo = AlgoName::BFS;
  ProbeSet inputs;
  std::vector<ProbeSet> hints;  // empty, or one state per step
  ProbeSet outputs;
  std::size_t steps = 1;

  friend bool operator==(const AlgoTrace&, const AlgoTrace&) = default;
};

const ProbeValue* find_probe(const ProbeSet& set, std::string_view name);

/// The single output probe of an algorithm.
ProbeSpec output_spec(AlgoName algo);
/// Hint probes (empty for algorithms without hints).
std::vector<ProbeSpec> hint_specs(AlgoName algo);

}  // namespace narx::clrs
