#include "narx/eval/embeddings.hpp"

#include <fstream>
#include <limits>

#include "narx/core/error.hpp"

namespace narx {

void export_embeddings(const LayerStack& stack, const MolDataset& ds, const std::string& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot write '" + path + "'");
  out.precision(std::numeric_limits<Real>::max_digits10);
  const std::size_t width = 2 * stack.config().model.hidden_dim;
  out << "graph,label";
  for (std::size_t i = 0; i < width; ++i) out << ",e" << i;
  out << '\n';
  constexpr std::size_t kChunk = 64;
  for (std::size_t start = 0; start < ds.graphs.size(); start += kChunk) {
    const std::size_t end = std::min(ds.graphs.size(), start + kChunk);
    const GraphBatch b = batch(std::span<const GraphInstance>(ds.graphs).subspan(start, end - start));
    const Topology topo = Topology::from(b);
    Tape tape;
    const Tensor pooled = pool_nodes(stack.embed(tape, b, topo).nodes, topo).value();
    for (std::size_t g = start; g < end; ++g) {
      out << g << ',' << ds.labels[g];
      for (Real v : pooled.row(g - start)) out << ',' << v;
      out << '\n';
    }
  }
  require(static_cast<bool>(out), ErrorKind::Io, "failed writing '" + path + "'");
}

}  // namespace narx
