#pragma once

#include "trajclust/dtw.hpp"
#include "trajclust/types.hpp"

#include <vector>

namespace trajclust {

/// Label value for trajectories excluded from the final distribution.
inline constexpr int kRejected = -1;

struct Cluster {
  std::vector<Index> members;  // sorted ascending
  Index medoid = -1;
  Scalar spread = 0;
};

/// Assignment of trajectory indices to clusters. Canonical form: members
/// sorted, clusters ordered by smallest member, labels[i] = cluster
/// position (or kRejected).
struct Partition {
  std::vector<int> labels;
  std::vector<Cluster> clusters;
  int k_nominal = 0;
  int k_effective = 0;
  bool converged = true;
};

/// Builds a canonical Partition from raw member groups: drops empty groups,
/// sorts members and clusters, computes medoid and spread per cluster.
/// Indices absent from every group are labeled kRejected.
Partition make_partition(std::vector<std::vector<Index>> groups, int k_nominal,
                         const DissimilarityMatrix& m, Index n,
                         bool converged = true);

/// Structural invariant check: labels and clusters cross-consistent,
/// clusters non-empty, medoid a member, spread matching cluster_spread.
/// Throws ComputeError on violation.
void check_partition(const Partition& p, const DissimilarityMatrix& m);

}  // namespace trajclust
