#pragma once

#include "trajclust/types.hpp"

#include <span>

namespace trajclust {

/// Symmetric matrix of pairwise DTW distances over one dataset.
struct DissimilarityMatrix {
  Mat values;  // n x n, symmetric, zero diagonal, finite, non-negative

  Index n() const { return values.rows(); }
  Scalar operator()(Index i, Index j) const { return values(i, j); }
};

/// Cumulative DTW cost between two planar traces: three-step recursion
/// (insert, delete, match) over pointwise Euclidean distances, evaluated
/// with two rolling rows. Symmetric, dtw(a, a) == 0.
/// Throws DataError on an empty input.
Scalar dtw(const Points& a, const Points& b);
inline Scalar dtw(const Trajectory& a, const Trajectory& b) {
  return dtw(a.xy, b.xy);
}

/// Same recursion with the full cost table kept; reference path for
/// comparing against the rolling-row implementation.
Scalar dtw_full_table(const Points& a, const Points& b);

/// All pairwise DTW distances. Only the upper triangle is computed and
/// mirrored; pairs are split across `workers` threads writing disjoint
/// entries, so the result is identical for any worker count.
/// Throws DataError (with the offending ids) if a trajectory is empty.
DissimilarityMatrix build_matrix(const Dataset& dataset, int workers = 1);

/// Member index minimizing the summed distance to all members.
/// Ties break to the smallest index. Throws ComputeError on empty input.
Index medoid(std::span<const Index> members, const DissimilarityMatrix& m);

/// Mean distance from the medoid to the members (the medoid's own term
/// contributes zero).
Scalar cluster_spread(std::span<const Index> members, Index medoid_index,
                      const DissimilarityMatrix& m);

}  // namespace trajclust
