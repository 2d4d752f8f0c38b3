#include "trajclust/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

namespace trajclust {

namespace {

inline Scalar point_dist(const Points& a, Index i, const Points& b, Index j) {
  const Scalar dx = a(i, 0) - b(j, 0);
  const Scalar dy = a(i, 1) - b(j, 1);
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

Scalar dtw(const Points& a, const Points& b) {
  const Index n = a.rows();
  const Index m = b.rows();
  if (n == 0 || m == 0) throw DataError("dtw: empty trajectory");

  // Keep the shorter series along the rolling dimension. The cost table is
  // transpose-symmetric, so swapping the arguments changes nothing.
  if (m > n) return dtw(b, a);

  std::vector<Scalar> prev(static_cast<std::size_t>(m));
  std::vector<Scalar> curr(static_cast<std::size_t>(m));

  prev[0] = point_dist(a, 0, b, 0);
  for (Index j = 1; j < m; ++j) {
    prev[j] = point_dist(a, 0, b, j) + prev[j - 1];
  }
  for (Index i = 1; i < n; ++i) {
    curr[0] = point_dist(a, i, b, 0) + prev[0];
    for (Index j = 1; j < m; ++j) {
      const Scalar best = std::min({prev[j], curr[j - 1], prev[j - 1]});
      curr[j] = point_dist(a, i, b, j) + best;
    }
    std::swap(prev, curr);
  }
  return prev[m - 1];
}

Scalar dtw_full_table(const Points& a, const Points& b) {
  const Index n = a.rows();
  const Index m = b.rows();
  if (n == 0 || m == 0) throw DataError("dtw: empty trajectory");

  Mat g(n, m);
  g(0, 0) = point_dist(a, 0, b, 0);
  for (Index i = 1; i < n; ++i) g(i, 0) = point_dist(a, i, b, 0) + g(i - 1, 0);
  for (Index j = 1; j < m; ++j) g(0, j) = point_dist(a, 0, b, j) + g(0, j - 1);
  for (Index i = 1; i < n; ++i) {
    for (Index j = 1; j < m; ++j) {
      g(i, j) = point_dist(a, i, b, j) +
                std::min({g(i - 1, j), g(i, j - 1), g(i - 1, j - 1)});
    }
  }
  return g(n - 1, m - 1);
}

DissimilarityMatrix build_matrix(const Dataset& dataset, int workers) {
  const Index n = static_cast<Index>(dataset.size());
  if (n < 2) throw DataError("build_matrix: need at least 2 trajectories");
  for (const Trajectory& t : dataset) {
    if (t.size() == 0) throw DataError("build_matrix: empty trajectory '" + t.id + "'");
  }

  DissimilarityMatrix out;
  out.values = Mat::Zero(n, n);

  const std::int64_t pairs = static_cast<std::int64_t>(n) * (n - 1) / 2;
  const int nw = std::max(1, std::min<int>(workers, static_cast<int>(pairs)));

  std::string failure;
  std::mutex failure_mu;

  auto run = [&](int w) {
    try {
      // Linear pair index p -> (i, j), j > i, row-major over the strict
      // upper triangle. Striding by worker id keeps the split deterministic
      // and the writes disjoint.
      Index i = 0;
      std::int64_t row_start = 0;           // p of pair (i, i+1)
      std::int64_t row_len = n - 1;         // pairs in row i
      for (std::int64_t p = w; p < pairs; p += nw) {
        while (p >= row_start + row_len) {
          row_start += row_len;
          ++i;
          row_len = n - 1 - i;
        }
        const Index j = i + 1 + static_cast<Index>(p - row_start);
        try {
          const Scalar d = dtw(dataset[i].xy, dataset[j].xy);
          out.values(i, j) = d;
          out.values(j, i) = d;
        } catch (const std::exception& e) {
          throw DataError("pair ('" + dataset[i].id + "', '" + dataset[j].id +
                          "'): " + e.what());
        }
      }
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(failure_mu);
      if (failure.empty()) failure = e.what();
    }
  };

  if (nw == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nw));
    for (int w = 0; w < nw; ++w) pool.emplace_back(run, w);
    for (std::thread& th : pool) th.join();
  }
  if (!failure.empty()) throw DataError("build_matrix: " + failure);
  return out;
}

Index medoid(std::span<const Index> members, const DissimilarityMatrix& m) {
  if (members.empty()) throw ComputeError("medoid: empty member set");
  Index best = -1;
  Scalar best_sum = std::numeric_limits<Scalar>::infinity();
  for (const Index i : members) {
    Scalar sum = 0;
    for (const Index j : members) sum += m(i, j);
    if (sum < best_sum || (sum == best_sum && i < best)) {
      best_sum = sum;
      best = i;
    }
  }
  return best;
}

Scalar cluster_spread(std::span<const Index> members, Index medoid_index,
                      const DissimilarityMatrix& m) {
  if (members.empty()) throw ComputeError("cluster_spread: empty member set");
  Scalar sum = 0;
  for (const Index i : members) sum += m(medoid_index, i);
  return sum / static_cast<Scalar>(members.size());
}

}  // namespace trajclust
