#pragma once

#include "trajclust/matrix_cache.hpp"
#include "trajclust/pipeline.hpp"

#include <filesystem>

namespace trajclust {

/// Everything save_result needs beyond the sweep itself.
struct RunContext {
  SweepConfig config;
  Hash256 data_hash{};
  NormalizationParams norm{};
};

/// Writes the run artifacts into out_dir and returns the manifest path:
///   labels.csv     trajectory_id,cluster_id (REJECTED for discards)
///   metrics.csv    one row per k: method, wall time, DB scores,
///                  silhouette, spread, nominal (effective) k, kept share
///   partition.json best partition (clusters, medoids, spreads, labels)
///   manifest.json  config, dataset hash, normalization, file checksums
std::filesystem::path save_result(const SweepResult& result,
                                  const Dataset& dataset,
                                  const RunContext& ctx,
                                  const std::filesystem::path& out_dir);

/// Inverse of the partition.json writer; reproduces the Partition exactly.
Partition load_partition_json(const std::filesystem::path& path);
void save_partition_json(const Partition& p, const std::filesystem::path& path);

NormalizationParams load_norm_params(const std::filesystem::path& manifest_path);

/// Small helper shared by the CLI: writes a manifest listing `files`
/// (sizes + sha256) plus a free-form config object.
void write_manifest(const std::filesystem::path& manifest_path,
                    const std::vector<std::filesystem::path>& files,
                    const std::string& config_json);

/// Method-comparison table: one row per sweep at its best k, in the same
/// column shape as metrics.csv (Time holds the mean per-k wall time).
void save_method_summary(const std::vector<std::pair<Method, SweepResult>>& runs,
                         Index dataset_size,
                         const std::filesystem::path& path);

}  // namespace trajclust
