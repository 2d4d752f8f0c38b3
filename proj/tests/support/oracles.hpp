// Independent brute-force references for the test suites. Everything here
// is written directly from the definitions and stays off the library's
// optimized code paths.
#pragma once

#include "trajclust/types.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using trajclust::Index;
using trajclust::Mat;
using trajclust::Points;
using trajclust::Scalar;

inline Scalar point_dist(const Points& a, Index i, const Points& b, Index j) {
  const Scalar dx = a(i, 0) - b(j, 0);
  const Scalar dy = a(i, 1) - b(j, 1);
  return std::sqrt(dx * dx + dy * dy);
}

namespace detail {

inline void walk_paths(const Points& a, const Points& b, Index i, Index j,
                       Scalar acc, Scalar& best) {
  acc += point_dist(a, i, b, j);
  if (i == a.rows() - 1 && j == b.rows() - 1) {
    best = std::min(best, acc);
    return;
  }
  if (i + 1 < a.rows()) walk_paths(a, b, i + 1, j, acc, best);
  if (j + 1 < b.rows()) walk_paths(a, b, i, j + 1, acc, best);
  if (i + 1 < a.rows() && j + 1 < b.rows()) walk_paths(a, b, i + 1, j + 1, acc, best);
}

}  // namespace detail

/// Exhaustive minimum over every monotone warping path (no DP table).
/// Only usable for short series.
inline Scalar dtw_by_enumeration(const Points& a, const Points& b) {
  Scalar best = std::numeric_limits<Scalar>::infinity();
  detail::walk_paths(a, b, 0, 0, 0.0, best);
  return best;
}

/// Mean cross-pair distance, straight from the definition.
inline Scalar average_linkage(const std::vector<Index>& a,
                              const std::vector<Index>& b, const Mat& d) {
  Scalar sum = 0;
  for (const Index i : a) {
    for (const Index j : b) sum += d(i, j);
  }
  return sum / (static_cast<Scalar>(a.size()) * static_cast<Scalar>(b.size()));
}

/// O(n^3)-style agglomerative reference: rescans every active cluster pair
/// each step. Returns the member sets, sorted canonically.
inline std::vector<std::vector<Index>> naive_agglomerative(const Mat& d, int k) {
  std::vector<std::vector<Index>> clusters(static_cast<std::size_t>(d.rows()));
  for (Index i = 0; i < d.rows(); ++i) clusters[static_cast<std::size_t>(i)] = {i};

  while (static_cast<int>(clusters.size()) > k) {
    std::size_t best_a = 0, best_b = 1;
    Scalar best_link = std::numeric_limits<Scalar>::infinity();
    for (std::size_t a = 0; a < clusters.size(); ++a) {
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        const Scalar link = average_linkage(clusters[a], clusters[b], d);
        // Clusters stay sorted by smallest member, so (a, b) order is the
        // lexicographic id order the tie rule wants.
        if (link < best_link) {
          best_link = link;
          best_a = a;
          best_b = b;
        }
      }
    }
    std::vector<Index>& into = clusters[best_a];
    into.insert(into.end(), clusters[best_b].begin(), clusters[best_b].end());
    std::sort(into.begin(), into.end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(best_b));
    std::sort(clusters.begin(), clusters.end(),
              [](const std::vector<Index>& x, const std::vector<Index>& y) {
                return x.front() < y.front();
              });
  }
  return clusters;
}

inline Index medoid(const std::vector<Index>& members, const Mat& d) {
  Index best = members.front();
  Scalar best_sum = std::numeric_limits<Scalar>::infinity();
  for (const Index i : members) {
    Scalar s = 0;
    for (const Index j : members) s += d(i, j);
    if (s < best_sum) {
      best_sum = s;
      best = i;
    }
  }
  return best;
}

inline Scalar spread(const std::vector<Index>& members, Index med, const Mat& d) {
  Scalar s = 0;
  for (const Index i : members) s += d(med, i);
  return s / static_cast<Scalar>(members.size());
}

struct MetricInput {
  std::vector<std::vector<Index>> clusters;
  std::vector<Index> medoids;
  std::vector<Scalar> spreads;
};

inline MetricInput metric_input(const std::vector<std::vector<Index>>& clusters,
                                const Mat& d) {
  MetricInput in;
  in.clusters = clusters;
  for (const auto& c : clusters) {
    in.medoids.push_back(medoid(c, d));
    in.spreads.push_back(spread(c, in.medoids.back(), d));
  }
  return in;
}

inline Scalar db_original(const MetricInput& in, const Mat& d) {
  const std::size_t nc = in.clusters.size();
  Scalar total = 0;
  for (std::size_t i = 0; i < nc; ++i) {
    Scalar worst = -std::numeric_limits<Scalar>::infinity();
    for (std::size_t j = 0; j < nc; ++j) {
      if (i == j) continue;
      worst = std::max(worst, (in.spreads[i] + in.spreads[j]) /
                                  d(in.medoids[i], in.medoids[j]));
    }
    total += worst;
  }
  return total / static_cast<Scalar>(nc);
}

inline Scalar db_modified(const MetricInput& in, const Mat& d) {
  const std::size_t nc = in.clusters.size();
  Scalar total = 0;
  for (std::size_t i = 0; i < nc; ++i) {
    for (std::size_t j = 0; j < nc; ++j) {
      if (i == j) continue;
      total += (in.spreads[i] + in.spreads[j]) / d(in.medoids[i], in.medoids[j]);
    }
  }
  return total / (static_cast<Scalar>(nc) * static_cast<Scalar>(nc - 1));
}

inline Scalar silhouette(const std::vector<std::vector<Index>>& clusters,
                         const Mat& d) {
  Scalar total = 0;
  Index count = 0;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (const Index i : clusters[c]) {
      ++count;
      if (clusters[c].size() < 2) continue;
      Scalar a = 0;
      for (const Index j : clusters[c]) {
        if (j != i) a += d(i, j);
      }
      a /= static_cast<Scalar>(clusters[c].size() - 1);
      Scalar b = std::numeric_limits<Scalar>::infinity();
      for (std::size_t f = 0; f < clusters.size(); ++f) {
        if (f == c) continue;
        Scalar mean = 0;
        for (const Index j : clusters[f]) mean += d(i, j);
        b = std::min(b, mean / static_cast<Scalar>(clusters[f].size()));
      }
      if (std::max(a, b) > 0) total += (b - a) / std::max(a, b);
    }
  }
  return count ? total / static_cast<Scalar>(count) : 0;
}

inline Scalar spread_on_cluster(const std::vector<std::vector<Index>>& clusters,
                                const Mat& d) {
  Scalar total = 0;
  for (const auto& c : clusters) {
    Scalar widest = 0;
    for (const Index i : c) {
      for (const Index j : c) widest = std::max(widest, d(i, j));
    }
    total += widest / static_cast<Scalar>(c.size());
  }
  return total / static_cast<Scalar>(clusters.size());
}

/// Random symmetric matrix with zero diagonal, entries in (0.1, 10).
inline Mat random_matrix(Index n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<Scalar> unif(0.1, 10.0);
  Mat d = Mat::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = unif(rng);
    }
  }
  return d;
}

/// Random grouping of n elements into exactly k non-empty clusters.
inline std::vector<std::vector<Index>> random_clusters(Index n, int k,
                                                       std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::vector<std::vector<Index>> clusters(static_cast<std::size_t>(k));
  for (Index i = 0; i < n; ++i) {
    if (i < static_cast<Index>(k)) {
      clusters[static_cast<std::size_t>(i)].push_back(i);  // keep all non-empty
    } else {
      clusters[rng() % static_cast<std::uint32_t>(k)].push_back(i);
    }
  }
  return clusters;
}

/// Random short planar trace for DTW oracle checks.
inline Points random_trace(Index len, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<Scalar> unif(0.0, 1.0);
  Points p(len, 2);
  for (Index i = 0; i < len; ++i) {
    p(i, 0) = unif(rng);
    p(i, 1) = unif(rng);
  }
  return p;
}

}  // namespace oracle
