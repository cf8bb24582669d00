#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "narx/model/params.hpp"

namespace narx {

inline constexpr std::uint16_t kCheckpointVersion = 1;

struct CheckpointMeta {
  std::uint32_t hidden_dim = 0;
  std::uint32_t triplet_dim = 0;
  std::string algo;
  std::uint64_t seed = 0;

  friend bool operator==(const CheckpointMeta&, const CheckpointMeta&) = default;
};

struct CheckpointEntry {
  std::string name;
  Tensor value;
};

/// Named parameter tensors plus the config they were trained with.
///
/// On disk, all integers little-endian:
///   "NARX" u16 version
///   u32 hidden_dim, u32 triplet_dim, u32 len + algo bytes, u64 seed
///   u32 entry count, then per entry:
///     u32 len + name bytes, u32 rank, rank x u32 dims, f32 values
struct Checkpoint {
  CheckpointMeta meta;
  std::vector<CheckpointEntry> entries;

  const CheckpointEntry* find(std::string_view name) const;
};

/// Copies every parameter of `ps`. Duplicate names are a contract error.
Checkpoint make_checkpoint(const ParamSet& ps, CheckpointMeta meta);

std::string serialize(const Checkpoint& ckpt);
/// Malformed input raises a format error with the byte offset and, inside
/// an entry, the entry's name. `source` prefixes messages.
Checkpoint deserialize(std::string_view bytes, const std::string& source = "checkpoint");

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace narx
