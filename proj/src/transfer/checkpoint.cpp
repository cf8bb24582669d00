#include "narx/transfer/checkpoint.hpp"

#include <bit>
#include <fstream>
#include <iterator>
#include <set>

#include "narx/core/error.hpp"

namespace narx {

namespace {

constexpr char kMagic[4] = {'N', 'A', 'R', 'X'};
constexpr std::uint32_t kMaxRank = 8;

class Writer {
 public:
  void bytes(std::string_view s) { out_.append(s); }
  template <class T>
  void uint(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void str(std::string_view s) {
    uint(static_cast<std::uint32_t>(s.size()));
    bytes(s);
  }
  void f32(float v) { uint(std::bit_cast<std::uint32_t>(v)); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  Reader(std::string_view in, const std::string& source) : in_(in), source_(source) {}

  void set_entry(std::string name) { entry_ = std::move(name); }
  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return in_.size() - pos_; }

  [[noreturn]] void error(const std::string& what) const {
    std::string msg = source_ + ": " + what + " at byte offset " + std::to_string(pos_);
    if (!entry_.empty()) msg += " (entry '" + entry_ + "')";
    fail(ErrorKind::Format, msg);
  }

  void need(std::size_t n, const char* what) const {
    if (remaining() < n) error(std::string("truncated ") + what);
  }

  std::string_view bytes(std::size_t n, const char* what) {
    need(n, what);
    auto s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  template <class T>
  T uint(const char* what) {
    need(sizeof(T), what);
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
      v |= static_cast<T>(static_cast<T>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i));
    pos_ += sizeof(T);
    return v;
  }

  std::string str(const char* what) {
    const auto len = uint<std::uint32_t>(what);
    return std::string(bytes(len, what));
  }

  float f32() { return std::bit_cast<float>(uint<std::uint32_t>("tensor data")); }

 private:
  std::string_view in_;
  const std::string& source_;
  std::string entry_;
  std::size_t pos_ = 0;
};

}  // namespace

const CheckpointEntry* Checkpoint::find(std::string_view name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

Checkpoint make_checkpoint(const ParamSet& ps, CheckpointMeta meta) {
  Checkpoint c;
  c.meta = std::move(meta);
  std::set<std::string_view> seen;
  for (const Parameter* p : ps.all()) {
    require(seen.insert(p->name).second, ErrorKind::Contract, "duplicate parameter '" + p->name + "'");
    c.entries.push_back({p->name, p->value});
  }
  return c;
}

std::string serialize(const Checkpoint& ckpt) {
  Writer w;
  w.bytes(std::string_view(kMagic, 4));
  w.uint(kCheckpointVersion);
  w.uint(ckpt.meta.hidden_dim);
  w.uint(ckpt.meta.triplet_dim);
  w.str(ckpt.meta.algo);
  w.uint(ckpt.meta.seed);
  w.uint(static_cast<std::uint32_t>(ckpt.entries.size()));
  std::set<std::string_view> seen;
  for (const auto& e : ckpt.entries) {
    require(seen.insert(e.name).second, ErrorKind::Contract, "duplicate checkpoint entry '" + e.name + "'");
    require(e.value.rank() <= kMaxRank, ErrorKind::Contract, "entry '" + e.name + "' has rank above 8");
    w.str(e.name);
    w.uint(static_cast<std::uint32_t>(e.value.rank()));
    for (auto d : e.value.shape()) w.uint(static_cast<std::uint32_t>(d));
    for (Real v : e.value.storage()) w.f32(static_cast<float>(v));
  }
  return w.take();
}

Checkpoint deserialize(std::string_view bytes, const std::string& source) {
  Reader r(bytes, source);
  if (r.bytes(4, "magic") != std::string_view(kMagic, 4)) r.error("bad magic");
  const auto version = r.uint<std::uint16_t>("version");
  if (version != kCheckpointVersion)
    r.error("unsupported version " + std::to_string(version) + " (expected " +
            std::to_string(kCheckpointVersion) + ")");
  Checkpoint c;
  c.meta.hidden_dim = r.uint<std::uint32_t>("metadata");
  c.meta.triplet_dim = r.uint<std::uint32_t>("metadata");
  c.meta.algo = r.str("metadata");
  c.meta.seed = r.uint<std::uint64_t>("metadata");
  const auto count = r.uint<std::uint32_t>("entry count");
  std::set<std::string> seen;
  for (std::uint32_t i = 0; i < count; ++i) {
    r.set_entry("#" + std::to_string(i));
    std::string name = r.str("entry name");
    r.set_entry(name);
    if (!seen.insert(name).second) r.error("duplicate entry name");
    const auto rank = r.uint<std::uint32_t>("shape");
    if (rank > kMaxRank) r.error("rank " + std::to_string(rank) + " above 8");
    Shape shape;
    std::size_t numel = 1;
    for (std::uint32_t d = 0; d < rank; ++d) {
      const auto dim = r.uint<std::uint32_t>("shape");
      shape.push_back(dim);
      numel *= dim;
      // Checked per dimension so a corrupted shape cannot overflow or
      // trigger a huge allocation.
      if (numel > r.remaining() / 4) r.error("shape " + shape_str(shape) + " exceeds the remaining data");
    }
    r.need(numel * 4, "tensor data");
    std::vector<Real> data(numel);
    for (auto& v : data) v = static_cast<Real>(r.f32());
    c.entries.push_back({std::move(name), Tensor(std::move(shape), std::move(data))});
  }
  r.set_entry("");
  if (r.remaining() != 0) r.error(std::to_string(r.remaining()) + " trailing bytes");
  return c;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  const std::string bytes = serialize(ckpt);
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  require(static_cast<bool>(out), ErrorKind::Io, "failed writing '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open '" + path + "'");
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize(bytes, path);
}

}  // namespace narx
