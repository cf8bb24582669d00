#pragma once

#include <iosfwd>
#include <string>
#include <utility>

#include "narx/clrs/instance.hpp"

namespace narx::clrs {

using NamedValues = std::vector<std::pair<std::string, std::vector<double>>>;

/// One parsed trace line. Probe kinds are not stored in the file; they are
/// recoverable from the algorithm name.
struct TraceRecord {
  AlgoName algo = AlgoName::BFS;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  NamedValues inputs;
  std::vector<NamedValues> hints;
  NamedValues outputs;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

TraceRecord make_record(const AlgoInstance& inst, const AlgoTrace& trace);

/// Single JSON line with fields in the order algo, seed, n, inputs, hints,
/// outputs.
std::string to_json_line(const TraceRecord& rec);

/// Raises a format error naming the offending field.
TraceRecord parse_json_line(std::string_view line);

std::vector<TraceRecord> read_trace_file(std::istream& in);

}  // namespace narx::clrs
