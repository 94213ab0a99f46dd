#include "syncdgc/datasets.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <vector>

#include "syncdgc/errors.hpp"

namespace syncdgc {

namespace {

namespace fs = std::filesystem;

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

[[noreturn]] void fail_at(const std::string& path, std::size_t line_no, const std::string& what) {
  throw IoError(path + ":" + std::to_string(line_no) + ": " + what);
}

long parse_int(const std::string& field, const std::string& path, std::size_t line_no) {
  long value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) fail_at(path, line_no, "expected integer, got '" + field + "'");
  return value;
}

double parse_double(const std::string& field, const std::string& path, std::size_t line_no) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) fail_at(path, line_no, "expected number, got '" + field + "'");
  return value;
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void fnv_bytes(std::uint64_t& h, const void* data, std::size_t len) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
}

void fnv_u64(std::uint64_t& h, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = (v >> (8 * i)) & 0xff;
  fnv_bytes(h, b, 8);
}

}  // namespace

DatasetMeta compute_meta(const Graph& g) {
  DatasetMeta meta;
  meta.n = g.n();
  meta.d = g.features.cols();
  long long edges = 0;
  for (int i = 0; i < g.adjacency.rows(); ++i)
    for (int j = i + 1; j < g.adjacency.cols(); ++j)
      if (g.adjacency(i, j) > 0.0) ++edges;
  meta.edges = edges;
  if (g.has_labels()) {
    meta.k = g.num_classes();
    meta.homophily = homophily_ratio(g);
  }
  return meta;
}

DatasetBundle load_dataset(const std::string& dir) {
  const fs::path base(dir);
  const std::string features_path = (base / "features.tsv").string();
  const std::string edges_path = (base / "edges.tsv").string();
  const std::string labels_path = (base / "labels.tsv").string();

  const std::vector<std::string> feat_lines = read_lines(features_path);
  std::vector<std::vector<double>> rows;
  int d = -1;
  for (std::size_t ln = 0; ln < feat_lines.size(); ++ln) {
    if (feat_lines[ln].empty()) continue;
    const std::vector<std::string> fields = split_tabs(feat_lines[ln]);
    if (d < 0) d = int(fields.size());
    if (int(fields.size()) != d)
      fail_at(features_path, ln + 1,
              "row has " + std::to_string(fields.size()) + " fields, expected " +
                  std::to_string(d));
    std::vector<double> row(d);
    for (int j = 0; j < d; ++j) row[j] = parse_double(fields[j], features_path, ln + 1);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError(features_path + ": no feature rows");
  const int n = int(rows.size());

  Graph g;
  g.features = Matrix(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) g.features(i, j) = rows[i][j];

  g.adjacency = Matrix(n, n);
  const std::vector<std::string> edge_lines = read_lines(edges_path);
  for (std::size_t ln = 0; ln < edge_lines.size(); ++ln) {
    if (edge_lines[ln].empty()) continue;
    const std::vector<std::string> fields = split_tabs(edge_lines[ln]);
    if (fields.size() != 2)
      fail_at(edges_path, ln + 1,
              "expected 2 columns, got " + std::to_string(fields.size()));
    const long a = parse_int(fields[0], edges_path, ln + 1);
    const long b = parse_int(fields[1], edges_path, ln + 1);
    if (a < 0 || a >= n || b < 0 || b >= n)
      fail_at(edges_path, ln + 1,
              "node id out of range [0," + std::to_string(n) + ")");
    if (a == b) continue;  // self-loops are stripped; normalize() re-adds them
    g.adjacency(int(a), int(b)) = 1.0;
    g.adjacency(int(b), int(a)) = 1.0;
  }

  if (fs::exists(labels_path)) {
    const std::vector<std::string> label_lines = read_lines(labels_path);
    for (std::size_t ln = 0; ln < label_lines.size(); ++ln) {
      if (label_lines[ln].empty()) continue;
      const long y = parse_int(label_lines[ln], labels_path, ln + 1);
      if (y < 0) fail_at(labels_path, ln + 1, "negative label");
      g.labels.push_back(int(y));
    }
    if (int(g.labels.size()) != n)
      throw IoError(labels_path + ": " + std::to_string(g.labels.size()) + " labels for " +
                    std::to_string(n) + " nodes");
  }

  validate_graph(g);
  DatasetBundle bundle;
  bundle.name = base.filename().string();
  if (bundle.name.empty()) bundle.name = base.parent_path().filename().string();
  bundle.graph = std::move(g);
  bundle.meta = compute_meta(bundle.graph);
  return bundle;
}

void save_dataset(const std::string& dir, const Graph& g) {
  validate_graph(g);
  const fs::path base(dir);
  std::error_code ec;
  fs::create_directories(base, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());

  std::ofstream edges(base / "edges.tsv", std::ios::binary | std::ios::trunc);
  if (!edges) throw IoError("cannot write " + (base / "edges.tsv").string());
  for (int i = 0; i < g.adjacency.rows(); ++i)
    for (int j = i + 1; j < g.adjacency.cols(); ++j)
      if (g.adjacency(i, j) > 0.0) edges << i << '\t' << j << '\n';

  std::ofstream feats(base / "features.tsv", std::ios::binary | std::ios::trunc);
  if (!feats) throw IoError("cannot write " + (base / "features.tsv").string());
  for (int i = 0; i < g.features.rows(); ++i) {
    for (int j = 0; j < g.features.cols(); ++j) {
      if (j) feats << '\t';
      feats << format_double(g.features(i, j));
    }
    feats << '\n';
  }

  if (g.has_labels()) {
    std::ofstream labels(base / "labels.tsv", std::ios::binary | std::ios::trunc);
    if (!labels) throw IoError("cannot write " + (base / "labels.tsv").string());
    for (int y : g.labels) labels << y << '\n';
  }
}

DatasetBundle generate_sbm(const SbmSpec& spec) {
  if (spec.n < 1 || spec.k < 1 || spec.k > spec.n)
    throw std::invalid_argument("sbm: need 1 <= k <= n");
  if (spec.inter_p < 0.0 || spec.inter_p > spec.intra_p || spec.intra_p > 1.0)
    throw std::invalid_argument("sbm: need 0 <= inter_p <= intra_p <= 1");
  if (spec.feature_noise < 0.0 || spec.feature_noise > 1.0)
    throw std::invalid_argument("sbm: feature_noise must be in [0,1]");

  Rng rng(spec.seed);
  Graph g;
  g.labels.resize(spec.n);
  {
    const int base = spec.n / spec.k;
    const int rem = spec.n % spec.k;  // the first rem blocks get one extra node
    int node = 0;
    for (int b = 0; b < spec.k; ++b) {
      const int size = base + (b < rem ? 1 : 0);
      for (int s = 0; s < size; ++s) g.labels[node++] = b;
    }
  }

  g.adjacency = Matrix(spec.n, spec.n);
  for (int i = 0; i < spec.n; ++i)
    for (int j = i + 1; j < spec.n; ++j) {
      const double p = g.labels[i] == g.labels[j] ? spec.intra_p : spec.inter_p;
      if (rng.bernoulli(p)) {
        g.adjacency(i, j) = 1.0;
        g.adjacency(j, i) = 1.0;
      }
    }

  g.features = Matrix(spec.n, spec.k);
  for (int i = 0; i < spec.n; ++i)
    for (int j = 0; j < spec.k; ++j) {
      const double clean = g.labels[i] == j ? 1.0 : 0.0;
      if (rng.uniform() < spec.feature_noise)
        g.features(i, j) = rng.uniform();
      else
        g.features(i, j) = clean;
    }

  DatasetBundle bundle;
  bundle.name = "sbm";
  bundle.graph = std::move(g);
  bundle.meta = compute_meta(bundle.graph);
  return bundle;
}

Graph perturb_mask_features(const Graph& g, double ratio, Rng& rng) {
  if (ratio < 0.0 || ratio >= 1.0)
    throw std::invalid_argument("perturb_mask_features: ratio must be in [0,1)");
  const int d = g.features.cols();
  const int m = int(ratio * d);
  Graph out = g;
  if (m == 0) return out;
  std::vector<int> cols(d);
  for (int j = 0; j < d; ++j) cols[j] = j;
  for (int i = 0; i < m; ++i) {
    const int j = i + int(rng.index(std::uint64_t(d - i)));
    std::swap(cols[i], cols[j]);
  }
  for (int i = 0; i < m; ++i)
    for (int r = 0; r < out.features.rows(); ++r) out.features(r, cols[i]) = 0.0;
  return out;
}

Graph perturb_add_edges(const Graph& g, double ratio, Rng& rng) {
  if (ratio < 0.0 || ratio >= 1.0)
    throw std::invalid_argument("perturb_add_edges: ratio must be in [0,1)");
  const DatasetMeta meta = compute_meta(g);
  const long long target = (long long)(ratio * double(meta.edges));
  const long long capacity = (long long)(g.n()) * (g.n() - 1) / 2 - meta.edges;
  if (target > capacity)
    throw std::invalid_argument("perturb_add_edges: graph cannot absorb " +
                                std::to_string(target) + " new edges");
  Graph out = g;
  long long added = 0;
  while (added < target) {
    const int i = int(rng.index(std::uint64_t(out.n())));
    const int j = int(rng.index(std::uint64_t(out.n())));
    if (i == j || out.adjacency(i, j) > 0.0) continue;
    out.adjacency(i, j) = 1.0;
    out.adjacency(j, i) = 1.0;
    ++added;
  }
  return out;
}

std::uint64_t fingerprint(const Graph& g) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  fnv_u64(h, std::uint64_t(g.n()));
  fnv_u64(h, std::uint64_t(g.features.cols()));
  fnv_u64(h, std::uint64_t(g.labels.size()));
  for (std::size_t i = 0; i < g.adjacency.size(); ++i)
    fnv_u64(h, std::bit_cast<std::uint64_t>(g.adjacency.data()[i]));
  for (std::size_t i = 0; i < g.features.size(); ++i)
    fnv_u64(h, std::bit_cast<std::uint64_t>(g.features.data()[i]));
  for (int y : g.labels) fnv_u64(h, std::uint64_t(y));
  return h;
}

}  // namespace syncdgc
