#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spgm/types.hpp"

namespace spgm {

// A loaded dataset: one sample per column. Labels ride along when the source
// format carries them (the sparse text format does, dense CSV does not).
struct DatasetMatrix {
  Matrix x;
  std::optional<Vector> labels;
  std::vector<std::string> feature_names;
};

// Reads either the standard sparse text format ("label idx:val idx:val ...",
// one sample per line, 1-based indices) or a dense CSV (one sample per line,
// no label column), picking the parser by the ".csv" extension. Keeps the
// first max_n samples; the feature dimension is exactly max_d, with indices
// beyond it dropped and missing ones zero.
//
// Throws std::invalid_argument for a missing or empty file and
// std::runtime_error tagged "<path>:<line>:" for malformed content.
DatasetMatrix read_sparse_dataset(const std::string& path, Index max_n, Index max_d);

// Writes the sample matrix as dense CSV, one sample per line, with enough
// digits that reading it back reproduces every entry exactly. Labels and
// feature names are not written.
void write_dense_csv(const std::string& path, const DatasetMatrix& data);

// Draws n samples x_j = a_j * u + noise_std * eps_j where u is a planted unit
// direction with about (1-sparsity)*d nonzero entries (never fewer than one),
// a_j is standard normal and eps_j is an isotropic standard normal vector.
// Deterministic per seed. The planted direction is reported through the
// optional out-parameter so benchmarks can measure support recovery.
DatasetMatrix generate_synthetic_pca(Index d, Index n, double sparsity, std::uint64_t seed,
                                     double noise_std = 0.1, Vector* planted = nullptr);

}  // namespace spgm
