#pragma once

#include "trajclust/partition.hpp"
#include "trajclust/types.hpp"

#include <filesystem>
#include <optional>
#include <vector>

namespace trajclust {

struct ReportSpec {
  std::filesystem::path out_dir;
  bool per_cluster_svg = true;
  bool overview = true;
  bool denormalize = true;  // plot in the scenario's metric frame
};

/// Renders one SVG per cluster (thin member polylines, thick medoid,
/// white cross at each trajectory's start and black cross at its end),
/// an overview SVG with all clusters color-coded, and a self-contained
/// index.html. Output bytes are deterministic for fixed input.
/// Returns the files written.
std::vector<std::filesystem::path> render_report(
    const Partition& partition, const Dataset& dataset,
    const std::optional<NormalizationParams>& norm, const ReportSpec& spec);

}  // namespace trajclust
