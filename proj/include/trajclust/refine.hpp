#pragma once

#include "trajclust/clusterers.hpp"
#include "trajclust/partition.hpp"

#include <optional>
#include <utility>

namespace trajclust {

enum class RefineMode { none, a1ms, a2ms };

struct RefineConfig {
  RefineMode mode = RefineMode::none;
  Scalar min_trace = 0.6;               // in (0, 1]
  std::optional<Scalar> bandwidth;      // nullopt = automatic
};

/// Where a perpendicular foot landed: segment index of the trimmed
/// trajectory plus the interpolation parameter within that segment.
struct ProjectionCut {
  Index segment = -1;  // -1: no cut on this side
  Scalar lambda = 0;
};

struct ProjectionResult {
  Points trimmed;        // contiguous sub-polyline of `onto` (may be empty)
  ProjectionCut start_cut;
  ProjectionCut end_cut;
  Scalar trace_fraction = 0;  // arc length of trimmed / arc length of onto
};

/// Sub-splits every cluster by its members' endpoints. a2ms runs one mean
/// shift on the start points and one on the end points (sub-cluster =
/// mode pair); a1ms runs a single mean shift on the concatenated 4-D
/// start/end vectors. Members never cross parent clusters.
Partition split_clusters(const Partition& partition, const Dataset& dataset,
                         RefineMode mode, std::optional<Scalar> bandwidth,
                         const DissimilarityMatrix& m);

/// Trims `onto` at the perpendicular feet of reference's first point
/// (forward segment scan) and last point (backward scan). A side with no
/// foot in [0,1] is left untrimmed; cuts in the wrong order yield an empty
/// overlap with trace 0.
ProjectionResult project(const Points& onto, const Points& reference);
inline ProjectionResult project(const Trajectory& onto,
                                const Trajectory& reference) {
  return project(onto.xy, reference.xy);
}

/// Fuses cluster pairs whose medoids coincide up to endpoint differences:
/// for each ordered pair (i, j) the candidate medoid i is trimmed by the
/// endpoint projections of medoid j; the pair merges when
/// dtw(medoid_j, trimmed_i) <= spread_i + spread_j and the trimmed path
/// keeps at least min_trace of medoid i's arc length. The scan restarts
/// after every merge.
Partition merge_clusters(const Partition& partition,
                         const DissimilarityMatrix& m, const Dataset& dataset,
                         Scalar min_trace);

/// Removes single-element clusters; their members are labeled kRejected
/// and returned.
std::pair<Partition, std::vector<Index>> discard_singletons(
    const Partition& partition);

/// The split-then-merge post-processing pass: split_clusters followed by
/// merge_clusters. A config with mode none returns the partition as-is.
Partition refine(const Partition& partition, const Dataset& dataset,
                 const DissimilarityMatrix& m, const RefineConfig& config);

}  // namespace trajclust
