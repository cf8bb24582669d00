#pragma once

#include <string>

#include "narx/data/dataset.hpp"
#include "narx/transfer/stack.hpp"

namespace narx {

/// Writes "graph,label,e0,...,e{2h-1}" with one row per graph: the pooled
/// (mean, max) final-layer node states that feed the classification head.
void export_embeddings(const LayerStack& stack, const MolDataset& ds, const std::string& path);

}  // namespace narx
