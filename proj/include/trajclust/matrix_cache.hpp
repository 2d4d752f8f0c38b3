#pragma once

#include "trajclust/dtw.hpp"
#include "trajclust/types.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace trajclust {

using Hash256 = std::array<std::uint8_t, 32>;

/// SHA-256 over a canonical byte serialization of the dataset
/// (ids, classes, frames, coordinates). Used as the matrix cache key.
Hash256 dataset_hash(const Dataset& dataset);

Hash256 file_hash(const std::filesystem::path& path);

std::string to_hex(const Hash256& h);

/// Cache file layout: magic "DTWM", version u16, n u32, dataset hash
/// (32 bytes), then the upper triangle including the diagonal, row-major,
/// as little-endian 64-bit floats.
void save_matrix_cache(const std::filesystem::path& path,
                       const DissimilarityMatrix& m, const Hash256& hash);

/// Loads a cache file, checking magic/version/size. Returns nullopt when
/// the stored hash does not match `expected`; throws DataError on a
/// missing or malformed file.
std::optional<DissimilarityMatrix> load_matrix_cache(
    const std::filesystem::path& path, const Hash256& expected);

/// Returns the cached matrix for this dataset if `cache_dir` holds one,
/// otherwise builds it (parallel over `workers`) and stores it as
/// <hash>.dtwm. Without a cache dir it simply builds.
DissimilarityMatrix load_or_build(const Dataset& dataset, int workers,
                                  const std::optional<std::filesystem::path>& cache_dir);

}  // namespace trajclust
