#pragma once

#include "trajclust/partition.hpp"

#include <optional>
#include <span>

namespace trajclust {

/// Mean cross-pair distance between two clusters (average linkage).
Scalar average_linkage(std::span<const Index> a, std::span<const Index> b,
                       const DissimilarityMatrix& m);

/// Agglomerative clustering under average linkage: starts from singletons
/// and merges the closest pair until k clusters remain. Ties break to the
/// lexicographically smallest cluster-id pair, where a cluster's id is its
/// smallest member. O(n^2 log n) via cross-sum updates and a lazily
/// invalidated heap.
Partition agglomerative(const DissimilarityMatrix& m, int k);

/// K-medoids: greedy BUILD seeding, then alternate nearest-medoid
/// assignment and per-cluster medoid recomputation until assignments
/// stabilize or `max_iter` passes (non-convergence flagged on the result).
Partition pam(const DissimilarityMatrix& m, int k, int max_iter = 100);

/// Row-wise dissimilarity-matrix clustering: per remaining row, a 1-D
/// k-means over that row's distances proposes the group nearest the row
/// element; the globally smallest-centered proposal is extracted as a
/// cluster and removed. Leftovers after k extractions join the cluster
/// with the nearest medoid.
Partition dissim_row_clustering(const DissimilarityMatrix& m, int k);

struct MeanShiftResult {
  std::vector<int> mode_assignments;  // one mode id per input point
  Mat modes;                          // one row per mode
  Scalar bandwidth = 0;               // the bandwidth actually used
};

/// Flat-kernel mean shift over row-vector points (any dimension; used here
/// with 2-D endpoints and 4-D endpoint pairs). Each point iterates to the
/// mean of the input points within `bandwidth` until the shift drops below
/// 1e-6 or 300 iterations; converged positions within bandwidth/2 merge
/// into one mode. Without an explicit bandwidth the 0.3 quantile of the
/// pairwise-distance distribution is used (smallest nonzero distance if
/// that quantile is zero; a single mode if all points coincide).
MeanShiftResult mean_shift(const Mat& points,
                           std::optional<Scalar> bandwidth = std::nullopt);

}  // namespace trajclust
