#include "trajclust/partition.hpp"

#include <algorithm>
#include <cmath>

namespace trajclust {

Partition make_partition(std::vector<std::vector<Index>> groups, int k_nominal,
                         const DissimilarityMatrix& m, Index n,
                         bool converged) {
  std::erase_if(groups, [](const std::vector<Index>& g) { return g.empty(); });
  for (std::vector<Index>& g : groups) std::sort(g.begin(), g.end());
  std::sort(groups.begin(), groups.end(),
            [](const std::vector<Index>& a, const std::vector<Index>& b) {
              return a.front() < b.front();
            });

  Partition p;
  p.k_nominal = k_nominal;
  p.k_effective = static_cast<int>(groups.size());
  p.converged = converged;
  p.labels.assign(static_cast<std::size_t>(n), kRejected);
  p.clusters.reserve(groups.size());
  for (std::size_t c = 0; c < groups.size(); ++c) {
    Cluster cl;
    cl.members = std::move(groups[c]);
    cl.medoid = medoid(cl.members, m);
    cl.spread = cluster_spread(cl.members, cl.medoid, m);
    for (const Index i : cl.members) p.labels[static_cast<std::size_t>(i)] = static_cast<int>(c);
    p.clusters.push_back(std::move(cl));
  }
  return p;
}

void check_partition(const Partition& p, const DissimilarityMatrix& m) {
  std::vector<int> seen(p.labels.size(), 0);
  if (static_cast<int>(p.clusters.size()) != p.k_effective) {
    throw ComputeError("partition: k_effective does not match cluster count");
  }
  for (std::size_t c = 0; c < p.clusters.size(); ++c) {
    const Cluster& cl = p.clusters[c];
    if (cl.members.empty()) throw ComputeError("partition: empty cluster");
    bool medoid_found = false;
    for (const Index i : cl.members) {
      if (i < 0 || i >= static_cast<Index>(p.labels.size())) {
        throw ComputeError("partition: member index out of range");
      }
      if (p.labels[static_cast<std::size_t>(i)] != static_cast<int>(c)) {
        throw ComputeError("partition: label/cluster mismatch");
      }
      ++seen[static_cast<std::size_t>(i)];
      if (i == cl.medoid) medoid_found = true;
    }
    if (!medoid_found) throw ComputeError("partition: medoid not a member");
    const Scalar expect = cluster_spread(cl.members, cl.medoid, m);
    if (std::abs(cl.spread - expect) > 1e-12) {
      throw ComputeError("partition: stale spread");
    }
  }
  for (std::size_t i = 0; i < p.labels.size(); ++i) {
    const bool clustered = p.labels[i] != kRejected;
    if (clustered != (seen[i] == 1)) {
      throw ComputeError("partition: index in " + std::to_string(seen[i]) +
                         " clusters but label says " +
                         (clustered ? "clustered" : "rejected"));
    }
  }
}

}  // namespace trajclust
