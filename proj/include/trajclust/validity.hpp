#pragma once

#include "trajclust/partition.hpp"

namespace trajclust {

/// Partition-quality scores over the clustered (non-rejected) elements.
struct ValidityReport {
  Scalar db_original = 0;
  Scalar db_modified = 0;
  Scalar silhouette = 0;
  Scalar spread_on_cluster = 0;
  int k_effective = 0;
  Index n_clustered = 0;
  Index n_rejected = 0;
};

/// Davies-Bouldin: mean over clusters of the worst (s_i + s_j) / d_ij,
/// with s the cluster spread and d the medoid-to-medoid distance.
/// Throws ComputeError with the offending pair if two medoids coincide,
/// or when fewer than 2 clusters exist.
Scalar db_original(const Partition& p, const DissimilarityMatrix& m);

/// Variant averaging (s_i + s_j) / d_ij over all ordered pairs instead of
/// taking per-cluster maxima; equals db_original when there are exactly
/// two clusters.
Scalar db_modified(const Partition& p, const DissimilarityMatrix& m);

/// Mean silhouette over clustered elements: s(i) = (b - a) / max(a, b)
/// with a the mean distance to the element's own cluster and b the
/// smallest mean distance to a foreign cluster. An element alone in its
/// cluster contributes 0.
Scalar silhouette(const Partition& p, const DissimilarityMatrix& m);

/// Mean over clusters of (largest intra-cluster pairwise distance divided
/// by the cluster size).
Scalar spread_on_cluster(const Partition& p, const DissimilarityMatrix& m);

ValidityReport make_report(const Partition& p, const DissimilarityMatrix& m);

}  // namespace trajclust
