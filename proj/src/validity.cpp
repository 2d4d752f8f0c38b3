#include "trajclust/validity.hpp"

#include <algorithm>
#include <limits>

namespace trajclust {

namespace {

void need_clusters(const Partition& p, std::size_t at_least, const char* who) {
  if (p.clusters.size() < at_least) {
    throw ComputeError(std::string(who) + ": needs at least " +
                       std::to_string(at_least) + " clusters, got " +
                       std::to_string(p.clusters.size()));
  }
}

Scalar medoid_distance(const Partition& p, const DissimilarityMatrix& m,
                       std::size_t i, std::size_t j, const char* who) {
  const Scalar d = m(p.clusters[i].medoid, p.clusters[j].medoid);
  if (d == 0) {
    throw ComputeError(std::string(who) + ": coincident medoids of clusters " +
                       std::to_string(i) + " and " + std::to_string(j) +
                       " (indices " + std::to_string(p.clusters[i].medoid) +
                       ", " + std::to_string(p.clusters[j].medoid) + ")");
  }
  return d;
}

}  // namespace

Scalar db_original(const Partition& p, const DissimilarityMatrix& m) {
  need_clusters(p, 2, "db_original");
  const std::size_t nc = p.clusters.size();
  Scalar total = 0;
  for (std::size_t i = 0; i < nc; ++i) {
    Scalar worst = -std::numeric_limits<Scalar>::infinity();
    for (std::size_t j = 0; j < nc; ++j) {
      if (j == i) continue;
      const Scalar d = medoid_distance(p, m, i, j, "db_original");
      worst = std::max(worst, (p.clusters[i].spread + p.clusters[j].spread) / d);
    }
    total += worst;
  }
  return total / static_cast<Scalar>(nc);
}

Scalar db_modified(const Partition& p, const DissimilarityMatrix& m) {
  need_clusters(p, 2, "db_modified");
  const std::size_t nc = p.clusters.size();
  Scalar total = 0;
  for (std::size_t i = 0; i < nc; ++i) {
    for (std::size_t j = 0; j < nc; ++j) {
      if (j == i) continue;
      const Scalar d = medoid_distance(p, m, i, j, "db_modified");
      total += (p.clusters[i].spread + p.clusters[j].spread) / d;
    }
  }
  return total / (static_cast<Scalar>(nc) * static_cast<Scalar>(nc - 1));
}

Scalar silhouette(const Partition& p, const DissimilarityMatrix& m) {
  need_clusters(p, 2, "silhouette");
  Scalar total = 0;
  Index count = 0;
  for (std::size_t c = 0; c < p.clusters.size(); ++c) {
    const Cluster& own = p.clusters[c];
    for (const Index i : own.members) {
      ++count;
      if (own.members.size() < 2) continue;  // s(i) = 0 by convention
      Scalar a = 0;
      for (const Index other : own.members) a += m(i, other);
      a /= static_cast<Scalar>(own.members.size() - 1);

      Scalar b = std::numeric_limits<Scalar>::infinity();
      for (std::size_t f = 0; f < p.clusters.size(); ++f) {
        if (f == c) continue;
        Scalar mean = 0;
        for (const Index other : p.clusters[f].members) mean += m(i, other);
        mean /= static_cast<Scalar>(p.clusters[f].members.size());
        b = std::min(b, mean);
      }
      const Scalar denom = std::max(a, b);
      if (denom > 0) total += (b - a) / denom;
    }
  }
  return count > 0 ? total / static_cast<Scalar>(count) : 0;
}

Scalar spread_on_cluster(const Partition& p, const DissimilarityMatrix& m) {
  need_clusters(p, 1, "spread_on_cluster");
  Scalar total = 0;
  for (const Cluster& c : p.clusters) {
    Scalar widest = 0;
    for (std::size_t a = 0; a < c.members.size(); ++a) {
      for (std::size_t b = a + 1; b < c.members.size(); ++b) {
        widest = std::max(widest, m(c.members[a], c.members[b]));
      }
    }
    total += widest / static_cast<Scalar>(c.members.size());
  }
  return total / static_cast<Scalar>(p.clusters.size());
}

ValidityReport make_report(const Partition& p, const DissimilarityMatrix& m) {
  ValidityReport r;
  r.db_original = db_original(p, m);
  r.db_modified = db_modified(p, m);
  r.silhouette = silhouette(p, m);
  r.spread_on_cluster = spread_on_cluster(p, m);
  r.k_effective = p.k_effective;
  for (const int label : p.labels) {
    if (label == kRejected) {
      ++r.n_rejected;
    } else {
      ++r.n_clustered;
    }
  }
  return r;
}

}  // namespace trajclust
