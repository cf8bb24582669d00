#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "model_checks.hpp"
#include "narx/core/error.hpp"
#include "narx/training/downstream.hpp"

using namespace narx;
using testing::random_tensor;
namespace fs = std::filesystem;

namespace {

const ModelConfig kModel{16, 4, 0};

Checkpoint pretrained(std::vector<clrs::AlgoName> algos = {clrs::AlgoName::BFS}, std::uint64_t seed = 3,
                      ModelConfig cfg = kModel) {
  ClrsModel model(cfg, algos, seed);
  return make_checkpoint(model.params(), {static_cast<std::uint32_t>(cfg.hidden_dim),
                                          static_cast<std::uint32_t>(cfg.triplet_dim), "bfs", seed});
}

MolDataset small_dataset(std::size_t graphs = 60, std::uint64_t seed = 1) {
  SyntheticSpec spec;
  spec.num_graphs = graphs;
  spec.max_nodes = 10;
  spec.seed = seed;
  return gen_synthetic(spec);
}

std::string tmp_path(const std::string& name) {
  return (fs::temp_directory_path() / ("narx_transfer_" + std::to_string(::getpid()) + "_" + name)).string();
}

Error error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected an error");
  return Error(ErrorKind::Contract, "unreachable");
}

// Offset of the first entry's first shape dimension.
std::size_t first_dim_offset(const Checkpoint& c) {
  return 4 + 2 + 4 + 4 + 4 + c.meta.algo.size() + 8 + 4 + 4 + c.entries[0].name.size() + 4;
}

}  // namespace

TEST_CASE("checkpoint round trip is byte-exact") {
  const Checkpoint c = pretrained();
  const std::string bytes = serialize(c);
  const Checkpoint back = deserialize(bytes, "memory");
  CHECK(back.meta.hidden_dim == 16);
  CHECK(back.meta.algo == "bfs");
  REQUIRE(back.entries.size() == c.entries.size());
  for (std::size_t i = 0; i < c.entries.size(); ++i) {
    CHECK(back.entries[i].name == c.entries[i].name);
    CHECK(bitwise_equal(back.entries[i].value, c.entries[i].value));
  }
  CHECK(serialize(back) == bytes);

  const std::string path = tmp_path("rt.bin");
  save_checkpoint(c, path);
  const std::string path2 = tmp_path("rt2.bin");
  save_checkpoint(load_checkpoint(path), path2);
  std::ifstream a(path, std::ios::binary), b(path2, std::ios::binary);
  CHECK(std::string(std::istreambuf_iterator<char>(a), {}) == std::string(std::istreambuf_iterator<char>(b), {}));
  fs::remove(path);
  fs::remove(path2);
}

TEST_CASE("checkpoint format errors") {
  const Checkpoint c = pretrained();
  const std::string bytes = serialize(c);
  SUBCASE("every truncation is rejected") {
    for (std::size_t len = 0; len < bytes.size(); len += 97) {
      const Error e = error_of([&] { deserialize(bytes.substr(0, len), "cut.bin"); });
      CHECK(e.kind() == ErrorKind::Format);
      CHECK(std::string(e.what()).find("cut.bin") != std::string::npos);
    }
    CHECK_THROWS_AS(deserialize(bytes.substr(0, bytes.size() - 1), "cut.bin"), Error);
  }
  SUBCASE("bad magic and version") {
    std::string bad = bytes;
    bad[0] = 'X';
    CHECK(std::string(error_of([&] { deserialize(bad, "m"); }).what()).find("magic") != std::string::npos);
    bad = bytes;
    bad[4] = 9;
    CHECK(std::string(error_of([&] { deserialize(bad, "v"); }).what()).find("version") != std::string::npos);
  }
  SUBCASE("corrupted shape names the entry") {
    std::string bad = bytes;
    const auto off = first_dim_offset(c);
    for (std::size_t i = 0; i < 4; ++i) bad[off + i] = static_cast<char>(0xff);
    const Error e = error_of([&] { deserialize(bad, "shape.bin"); });
    CHECK(e.kind() == ErrorKind::Format);
    CHECK(std::string(e.what()).find("'" + c.entries[0].name + "'") != std::string::npos);
  }
  SUBCASE("trailing bytes") { CHECK_THROWS_AS(deserialize(bytes + "x", "t"), Error); }
  SUBCASE("missing file is an I/O error") {
    CHECK(error_of([] { load_checkpoint("/nonexistent/ckpt.bin"); }).kind() == ErrorKind::Io);
  }
}

TEST_CASE("freeze plans") {
  CHECK(parse_plan("alternating") == PlanKind::Alternating);
  CHECK(error_of([] { parse_plan("full"); }).kind() == ErrorKind::Config);
  const auto alt = FreezePlan::make(PlanKind::Alternating);
  for (std::size_t i = 0; i < kStackLayers; ++i) {
    CHECK(alt.layers[i].pretrained == (i == 1 || i == 3));
    CHECK(alt.layers[i].trainable == !(i == 1 || i == 3));
  }
  const auto early = FreezePlan::make(PlanKind::Early);
  for (std::size_t i = 0; i < kStackLayers; ++i) CHECK(early.layers[i].trainable == (i >= 2));
  const auto full = FreezePlan::make(PlanKind::FullFinetune);
  for (const auto& l : full.layers) CHECK(l.trainable);
  CHECK(full.needs_checkpoint());
  CHECK_FALSE(FreezePlan::make(PlanKind::Baseline).needs_checkpoint());
}

TEST_CASE("stack construction") {
  const auto ds = small_dataset(20);
  const StackConfig cfg = stack_config_for(ds, kModel);
  const Checkpoint ckpt = pretrained();

  SUBCASE("alternating slots carry the checkpoint bitwise and are frozen") {
    const LayerStack s = build_stack(FreezePlan::make(PlanKind::Alternating), cfg, &ckpt, 5);
    for (std::size_t layer = 0; layer < kStackLayers; ++layer) {
      const bool slot = layer == 1 || layer == 3;
      for (const auto& name : processor_param_names()) {
        const Parameter* p = s.params().find(LayerStack::layer_prefix(layer) + name);
        REQUIRE(p != nullptr);
        CHECK(p->frozen == slot);
        const bool same = bitwise_equal(p->value, ckpt.find("proc." + name)->value);
        if (slot) CHECK(same);
        else CHECK_FALSE(same);
      }
    }
    // Encoder and head are always fresh and trainable.
    for (const Parameter* p : s.params().all())
      if (p->name.rfind("layer", 0) != 0) CHECK_FALSE(p->frozen);
  }
  SUBCASE("baseline needs no checkpoint; random layers differ") {
    const LayerStack s = build_stack(FreezePlan::make(PlanKind::Baseline), cfg, nullptr, 5);
    for (const Parameter* p : s.params().all()) CHECK_FALSE(p->frozen);
    CHECK_FALSE(bitwise_equal(s.params().find("layer1.msg_out.w")->value, s.params().find("layer2.msg_out.w")->value));
  }
  SUBCASE("same seed gives the same stack") {
    const LayerStack a = build_stack(FreezePlan::make(PlanKind::Baseline), cfg, nullptr, 9);
    const LayerStack b = build_stack(FreezePlan::make(PlanKind::Baseline), cfg, nullptr, 9);
    const auto sa = snapshot(a.params()), sb = snapshot(b.params());
    REQUIRE(sa.size() == sb.size());
    for (std::size_t i = 0; i < sa.size(); ++i) CHECK(bitwise_equal(sa[i].second, sb[i].second));
  }
  SUBCASE("transfer errors") {
    CHECK(error_of([&] { build_stack(FreezePlan::make(PlanKind::Early), cfg, nullptr, 0); }).kind() ==
          ErrorKind::Transfer);
    const Checkpoint wide = pretrained({clrs::AlgoName::BFS}, 3, {64, 4, 0});
    StackConfig big = cfg;
    big.model.hidden_dim = 128;
    CHECK(error_of([&] { build_stack(FreezePlan::make(PlanKind::Alternating), big, &wide, 0); }).kind() ==
          ErrorKind::Transfer);
    Checkpoint partial = ckpt;
    std::erase_if(partial.entries, [](const CheckpointEntry& e) { return e.name == "proc.msg_out.w"; });
    CHECK(error_of([&] { build_stack(FreezePlan::make(PlanKind::Alternating), cfg, &partial, 0); }).kind() ==
          ErrorKind::Transfer);
  }
  SUBCASE("multi-algorithm checkpoints load the shared processor") {
    const Checkpoint multi = pretrained({clrs::AlgoName::BFS, clrs::AlgoName::Dijkstra, clrs::AlgoName::Minimum});
    const LayerStack s = build_stack(FreezePlan::make(PlanKind::Alternating), cfg, &multi, 0);
    for (const auto& name : processor_param_names())
      CHECK(bitwise_equal(s.params().find("layer4." + name)->value, multi.find("proc." + name)->value));
  }
}

TEST_CASE("a pretrained slot computes what the pretrained processor computes") {
  const Checkpoint ckpt = pretrained();
  ClrsModel model(kModel, {clrs::AlgoName::BFS}, 3);
  const auto ds = small_dataset(20);
  const LayerStack s = build_stack(FreezePlan::make(PlanKind::Alternating), stack_config_for(ds, kModel), &ckpt, 1);
  const GraphBatch b = batch(std::span<const GraphInstance>(ds.graphs).subspan(0, 4));
  const Topology topo = Topology::from(b);
  std::mt19937_64 rng(2);
  Tape tape;
  const Latent in{tape.constant(random_tensor({b.num_nodes, 16}, rng)),
                  tape.constant(random_tensor({b.edges.size(), 16}, rng)), tape.constant(random_tensor({4, 16}, rng))};
  for (std::size_t slot : {1u, 3u}) {
    const Latent a = triplet_step(tape, in, s.layer(slot), topo);
    const Latent c = triplet_step(tape, in, model.processor(), topo);
    CHECK(bitwise_equal(a.nodes.value(), c.nodes.value()));
    CHECK(bitwise_equal(a.edges.value(), c.edges.value()));
  }
}

TEST_CASE("freezing holds through downstream training") {
  const auto ds = small_dataset(60);
  const StackConfig cfg = stack_config_for(ds, kModel);
  const Checkpoint ckpt = pretrained();
  DownstreamConfig dcfg;
  dcfg.steps = 10;
  dcfg.batch_size = 8;
  dcfg.eval_every = 1000;  // evaluate once, at the last step

  SUBCASE("alternating") {
    LayerStack s = build_stack(FreezePlan::make(PlanKind::Alternating), cfg, &ckpt, 4);
    const Snapshot before = snapshot(s.params());
    train_stack(s, ds, dcfg, 4);
    const Snapshot after = snapshot(s.params());
    const FreezeReport rep = assert_frozen(s, before, after);
    for (const auto& v : rep.violations) INFO(v);
    CHECK(rep.ok());
    for (std::size_t layer : {0u, 2u, 4u}) CHECK(layer_changed(before, after, layer));
    for (std::size_t layer : {1u, 3u}) CHECK_FALSE(layer_changed(before, after, layer));
  }
  SUBCASE("full fine-tune freezes nothing") {
    LayerStack s = build_stack(FreezePlan::make(PlanKind::FullFinetune), cfg, &ckpt, 4);
    for (const Parameter* p : s.params().all()) CHECK_FALSE(p->frozen);
    const Snapshot before = snapshot(s.params());
    train_stack(s, ds, dcfg, 4);
    const Snapshot after = snapshot(s.params());
    CHECK(assert_frozen(s, before, after).ok());
    for (std::size_t layer = 0; layer < kStackLayers; ++layer) CHECK(layer_changed(before, after, layer));
  }
  SUBCASE("early") {
    LayerStack s = build_stack(FreezePlan::make(PlanKind::Early), cfg, &ckpt, 4);
    const Snapshot before = snapshot(s.params());
    train_stack(s, ds, dcfg, 4);
    const Snapshot after = snapshot(s.params());
    CHECK(assert_frozen(s, before, after).ok());
    for (std::size_t layer : {0u, 1u}) CHECK_FALSE(layer_changed(before, after, layer));
    for (std::size_t layer : {2u, 3u, 4u}) CHECK(layer_changed(before, after, layer));
  }
}

TEST_CASE("assert_frozen reports") {
  const auto ds = small_dataset(20);
  const Checkpoint ckpt = pretrained();
  LayerStack s = build_stack(FreezePlan::make(PlanKind::Alternating), stack_config_for(ds, kModel), &ckpt, 0);
  const Snapshot before = snapshot(s.params());
  SUBCASE("zero-gradient batch skips the change check with a note") {
    const FreezeReport rep = assert_frozen(s, before, before, false);
    CHECK(rep.ok());
    CHECK(rep.notes.size() == 1);
  }
  SUBCASE("no change after a real step is a violation") { CHECK_FALSE(assert_frozen(s, before, before).ok()); }
  SUBCASE("a modified frozen weight is a violation") {
    Snapshot after = before;
    for (auto& [name, t] : after)
      if (name == "layer2.msg_out.w") t[0] += Real(1);
      else if (name == "head.w") t[0] += Real(1);
    const FreezeReport rep = assert_frozen(s, before, after);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].find("layer2.msg_out.w") != std::string::npos);
  }
}
