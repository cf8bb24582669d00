#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>

#include "narx/core/error.hpp"
#include "narx/data/dataset.hpp"

namespace narx {

namespace fs = std::filesystem;

std::size_t FeatureExpansion::node_width() const {
  std::size_t w = 0;
  for (const auto& c : node) w += c.values.size();
  return w;
}

std::size_t FeatureExpansion::edge_width() const {
  if (edge.empty()) return 1;
  std::size_t w = 0;
  for (const auto& c : edge) w += c.values.size();
  return w;
}

namespace {

std::vector<OneHotColumn> columns_of(const std::vector<std::vector<std::int64_t>>& rows) {
  if (rows.empty()) return {};
  std::vector<std::set<std::int64_t>> seen(rows.front().size());
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) seen[c].insert(r[c]);
  std::vector<OneHotColumn> out;
  for (const auto& s : seen) out.push_back({std::vector<std::int64_t>(s.begin(), s.end())});
  return out;
}

}  // namespace

FeatureExpansion make_expansion(const std::vector<std::vector<std::int64_t>>& node_rows,
                                const std::vector<std::vector<std::int64_t>>& edge_rows) {
  return {columns_of(node_rows), columns_of(edge_rows)};
}

std::vector<Real> expand_row(const std::vector<OneHotColumn>& cols, const std::vector<std::int64_t>& row) {
  if (cols.empty()) return {Real(1)};
  std::vector<Real> out;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const auto& vals = cols[c].values;
    const auto it = std::lower_bound(vals.begin(), vals.end(), row.at(c));
    require(it != vals.end() && *it == row[c], ErrorKind::Contract,
            "value " + std::to_string(row[c]) + " missing from one-hot table");
    for (std::size_t i = 0; i < vals.size(); ++i) out.push_back(vals.begin() + static_cast<std::ptrdiff_t>(i) == it);
  }
  return out;
}

namespace {

// Reads a comma-separated file one row at a time, keeping the line number
// for error messages.
class CsvFile {
 public:
  explicit CsvFile(fs::path path) : path_(std::move(path)), in_(path_) {
    require(static_cast<bool>(in_), ErrorKind::Ingestion, path_.string() + ": cannot open file");
  }

  /// Next non-empty row, or nullopt at end of file.
  std::optional<std::vector<std::string>> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::vector<std::string> cells;
      std::size_t start = 0;
      while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      return cells;
    }
    return std::nullopt;
  }

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::Ingestion, path_.filename().string() + ": line " + std::to_string(line_no_) + ": " + what);
  }

  std::int64_t integer(const std::string& cell) const {
    std::int64_t v = 0;
    const auto* end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (ec != std::errc() || ptr != end) error("'" + cell + "' is not an integer");
    return v;
  }

  std::vector<std::int64_t> int_row(const std::vector<std::string>& cells, std::size_t want) const {
    if (want != 0 && cells.size() != want)
      error("expected " + std::to_string(want) + " columns, found " + std::to_string(cells.size()));
    std::vector<std::int64_t> out;
    for (const auto& c : cells) out.push_back(integer(c));
    return out;
  }

  std::size_t line() const { return line_no_; }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
};

std::vector<std::size_t> read_counts(const fs::path& path) {
  CsvFile f(path);
  std::vector<std::size_t> out;
  while (auto row = f.next()) {
    const auto v = f.int_row(*row, 1)[0];
    if (v < 0) f.error("negative count");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

// Reads exactly `rows` integer rows with a consistent column count.
std::vector<std::vector<std::int64_t>> read_table(const fs::path& path, std::size_t rows, std::size_t cols = 0) {
  CsvFile f(path);
  std::vector<std::vector<std::int64_t>> out;
  while (auto row = f.next()) {
    if (out.size() == rows) f.error("extra row; expected " + std::to_string(rows) + " rows");
    out.push_back(f.int_row(*row, cols));
    if (cols == 0) cols = out.back().size();
  }
  if (out.size() != rows)
    f.error("file ends after " + std::to_string(out.size()) + " rows; expected " + std::to_string(rows));
  return out;
}

std::optional<int> parse_label(const CsvFile& f, const std::string& cell) {
  if (cell.empty() || cell == "nan" || cell == "NaN") return std::nullopt;
  double v = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) f.error("label '" + cell + "' is not a number");
  if (std::isnan(v)) return std::nullopt;
  if (v != 0 && v != 1) f.error("label '" + cell + "' is not 0 or 1");
  return static_cast<int>(v);
}

}  // namespace

MolDataset load_ogb_csv_dir(const std::string& dir_str, const LoadOptions& opts) {
  const fs::path dir(dir_str);
  require(fs::is_directory(dir), ErrorKind::Ingestion, dir_str + ": not a directory");
  MolDataset ds;
  ds.name = fs::path(dir).lexically_normal().filename().string();
  if (ds.name.empty()) ds.name = dir.parent_path().filename().string();

  const auto nodes = read_counts(dir / "num-node-list.csv");
  const auto edges = read_counts(dir / "num-edge-list.csv");
  const std::size_t num_graphs = nodes.size();
  if (edges.size() != num_graphs)
    fail(ErrorKind::Ingestion, "num-edge-list.csv: line " + std::to_string(std::min(edges.size(), num_graphs) + 1) +
                                   ": has " + std::to_string(edges.size()) + " rows, num-node-list.csv has " +
                                   std::to_string(num_graphs));
  std::size_t total_nodes = 0, total_edges = 0;
  for (auto n : nodes) total_nodes += n;
  for (auto e : edges) total_edges += e;

  // Edge endpoints are checked against their graph's node count row by row.
  std::vector<std::array<std::size_t, 2>> edge_rows;
  {
    CsvFile f(dir / "edge.csv");
    std::size_t g = 0, left = num_graphs ? edges[0] : 0;
    while (auto row = f.next()) {
      while (g < num_graphs && left == 0) left = ++g < num_graphs ? edges[g] : 0;
      if (g == num_graphs) f.error("extra row; expected " + std::to_string(total_edges) + " edges");
      const auto r = f.int_row(*row, 2);
      for (auto v : r)
        if (v < 0 || static_cast<std::size_t>(v) >= nodes[g])
          f.error("endpoint " + std::to_string(v) + " outside graph " + std::to_string(g) + " with " +
                  std::to_string(nodes[g]) + " nodes");
      edge_rows.push_back({static_cast<std::size_t>(r[0]), static_cast<std::size_t>(r[1])});
      --left;
    }
    if (edge_rows.size() != total_edges)
      f.error("file ends after " + std::to_string(edge_rows.size()) + " rows; expected " + std::to_string(total_edges));
  }
  const auto node_feat = read_table(dir / "node-feat.csv", total_nodes);
  std::vector<std::vector<std::int64_t>> edge_feat;
  if (fs::exists(dir / "edge-feat.csv")) edge_feat = read_table(dir / "edge-feat.csv", total_edges);

  int label_col = opts.label_column;
  if (label_col < 0) label_col = ds.name.find("clintox") != std::string::npos ? 1 : 0;
  std::vector<std::optional<int>> labels;
  {
    CsvFile f(dir / "graph-label.csv");
    while (auto row = f.next()) {
      if (labels.size() == num_graphs) f.error("extra row; expected " + std::to_string(num_graphs) + " labels");
      if (static_cast<std::size_t>(label_col) >= row->size())
        f.error("no label column " + std::to_string(label_col) + " (row has " + std::to_string(row->size()) +
                " columns)");
      labels.push_back(parse_label(f, (*row)[static_cast<std::size_t>(label_col)]));
    }
    if (labels.size() != num_graphs)
      f.error("file ends after " + std::to_string(labels.size()) + " rows; expected " + std::to_string(num_graphs));
  }

  ds.expansion = make_expansion(node_feat, edge_feat);
  std::vector<long> remap(num_graphs, -1);
  std::size_t node_off = 0, edge_off = 0;
  for (std::size_t g = 0; g < num_graphs; ++g) {
    const std::size_t n = nodes[g], m = edges[g];
    if (labels[g]) {
      GraphInstance gi;
      gi.num_nodes = n;
      gi.node_feats = Tensor({n, ds.node_dim()});
      for (std::size_t i = 0; i < n; ++i) {
        const auto row = expand_row(ds.expansion.node, node_feat[node_off + i]);
        std::copy(row.begin(), row.end(), gi.node_feats.row(i).begin());
      }
      gi.edge_feats = Tensor({2 * m, ds.edge_dim()});
      for (std::size_t e = 0; e < m; ++e) {
        const auto [u, v] = edge_rows[edge_off + e];
        gi.edges.push_back({static_cast<Index>(u), static_cast<Index>(v)});
        gi.edges.push_back({static_cast<Index>(v), static_cast<Index>(u)});
        const auto row =
            expand_row(ds.expansion.edge, edge_feat.empty() ? std::vector<std::int64_t>{} : edge_feat[edge_off + e]);
        std::copy(row.begin(), row.end(), gi.edge_feats.row(2 * e).begin());
        std::copy(row.begin(), row.end(), gi.edge_feats.row(2 * e + 1).begin());
      }
      gi.graph_feats = Tensor({1}, Real(1));
      const auto problems = validate(gi);
      if (!problems.empty())
        fail(ErrorKind::Ingestion, "graph " + std::to_string(g) + " is invalid: " + problems.front().message);
      remap[g] = static_cast<long>(ds.graphs.size());
      ds.graphs.push_back(std::move(gi));
      ds.labels.push_back(*labels[g]);
    } else {
      ++ds.dropped_missing_labels;
    }
    node_off += n;
    edge_off += m;
  }

  const fs::path split_dir = dir / "split";
  if (fs::is_directory(split_dir)) {
    auto read_split = [&](const char* file, std::vector<std::size_t>& out) {
      CsvFile f(split_dir / file);
      while (auto row = f.next()) {
        const auto v = f.int_row(*row, 1)[0];
        if (v < 0 || static_cast<std::size_t>(v) >= num_graphs)
          f.error("graph index " + std::to_string(v) + " outside [0, " + std::to_string(num_graphs) + ")");
        if (remap[static_cast<std::size_t>(v)] >= 0) out.push_back(static_cast<std::size_t>(remap[static_cast<std::size_t>(v)]));
      }
    };
    read_split("train.csv", ds.split.train);
    read_split("valid.csv", ds.split.valid);
    read_split("test.csv", ds.split.test);
    std::vector<char> used(ds.graphs.size(), 0);
    for (const auto* part : {&ds.split.train, &ds.split.valid, &ds.split.test})
      for (auto i : *part) {
        require(!used[i], ErrorKind::Ingestion, "split: graph " + std::to_string(i) + " listed twice");
        used[i] = 1;
      }
  } else {
    ds.split = make_split(ds.graphs.size(), {0.8, 0.1, 0.1}, 0);
  }
  return ds;
}

namespace {

std::vector<std::int64_t> collapse_row(const std::vector<OneHotColumn>& cols, std::span<const Real> row) {
  std::vector<std::int64_t> out;
  std::size_t off = 0;
  for (const auto& c : cols) {
    std::size_t hot = c.values.size();
    for (std::size_t i = 0; i < c.values.size(); ++i)
      if (row[off + i] == Real(1)) hot = i;
    require(hot < c.values.size(), ErrorKind::Contract, "feature row is not one-hot");
    out.push_back(c.values[hot]);
    off += c.values.size();
  }
  return out;
}

void write_row(std::ofstream& out, const std::vector<std::int64_t>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
  out << '\n';
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot write '" + p.string() + "'");
  return out;
}

}  // namespace

void export_ogb_csv_dir(const MolDataset& ds, const std::string& dir_str) {
  const fs::path dir(dir_str);
  fs::create_directories(dir / "split");
  auto edge = open_out(dir / "edge.csv"), nn = open_out(dir / "num-node-list.csv"),
       ne = open_out(dir / "num-edge-list.csv"), nf = open_out(dir / "node-feat.csv"),
       gl = open_out(dir / "graph-label.csv");
  std::optional<std::ofstream> ef;
  if (!ds.expansion.edge.empty()) ef = open_out(dir / "edge-feat.csv");
  for (std::size_t g = 0; g < ds.graphs.size(); ++g) {
    const auto& gi = ds.graphs[g];
    require(gi.num_edges() % 2 == 0, ErrorKind::Contract, "graph " + std::to_string(g) + " has unpaired edges");
    nn << gi.num_nodes << '\n';
    ne << gi.num_edges() / 2 << '\n';
    for (std::size_t i = 0; i < gi.num_nodes; ++i) write_row(nf, collapse_row(ds.expansion.node, gi.node_feats.row(i)));
    for (std::size_t e = 0; e < gi.num_edges(); e += 2) {
      edge << gi.edges[e].src << ',' << gi.edges[e].dst << '\n';
      if (ef) write_row(*ef, collapse_row(ds.expansion.edge, gi.edge_feats.row(e)));
    }
    gl << ds.labels[g] << '\n';
  }
  auto write_split = [&](const char* file, const std::vector<std::size_t>& idx) {
    auto out = open_out(dir / "split" / file);
    for (auto i : idx) out << i << '\n';
  };
  write_split("train.csv", ds.split.train);
  write_split("valid.csv", ds.split.valid);
  write_split("test.csv", ds.split.test);
}

}  // namespace narx
