#pragma once

#include <cstdint>
#include <string>

#include "syncdgc/graph.hpp"
#include "syncdgc/rng.hpp"

namespace syncdgc {

struct DatasetMeta {
  int n = 0;
  int d = 0;
  int k = 0;  // 0 when labels are absent
  long long edges = 0;
  double homophily = 0.0;  // 0 when labels are absent
};

struct DatasetBundle {
  std::string name;
  Graph graph;
  DatasetMeta meta;
};

DatasetMeta compute_meta(const Graph& g);

// Reads edges.tsv (two int columns, undirected, duplicates merged, self-loops
// stripped), features.tsv (n rows of tab-separated decimals), and labels.tsv
// when present. Malformed content raises IoError with file:line.
DatasetBundle load_dataset(const std::string& dir);

// Inverse of load_dataset; writes values so that a reload is bit-identical.
void save_dataset(const std::string& dir, const Graph& g);

struct SbmSpec {
  int n = 0;
  int k = 0;
  double intra_p = 0.0;
  double inter_p = 0.0;
  double feature_noise = 0.0;
  std::uint64_t seed = 325;
};

// Near-equal contiguous blocks; each potential edge drawn independently;
// features are the one-hot block indicator with entries replaced by uniform
// noise with probability feature_noise.
DatasetBundle generate_sbm(const SbmSpec& spec);

// Zeroes ⌊ratio·d⌋ uniformly chosen feature columns. ratio must be in [0,1).
Graph perturb_mask_features(const Graph& g, double ratio, Rng& rng);

// Adds ⌊ratio·|E|⌋ new distinct non-self undirected edges uniformly at
// random. ratio must be in [0,1) and enough non-edges must exist.
Graph perturb_add_edges(const Graph& g, double ratio, Rng& rng);

// FNV-1a over a canonical little-endian byte stream of shapes, adjacency,
// features, and labels; used to detect mixed-dataset aggregation.
std::uint64_t fingerprint(const Graph& g);

}  // namespace syncdgc
