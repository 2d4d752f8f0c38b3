#include "trajclust/clusterers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <tuple>
#include <vector>

namespace trajclust {

namespace {

void check_k(int k, Index n, int k_lo, const char* who) {
  if (k < k_lo || static_cast<Index>(k) > n) {
    throw DataError(std::string(who) + ": k=" + std::to_string(k) +
                    " out of range [" + std::to_string(k_lo) + ", " +
                    std::to_string(n) + "]");
  }
}

// Type-7 (linear interpolation) quantile of an ascending-sorted vector.
Scalar quantile_sorted(const std::vector<Scalar>& sorted, Scalar p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const Scalar h = p * static_cast<Scalar>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted[n - 1];
  const Scalar frac = h - static_cast<Scalar>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

struct Kmeans1dResult {
  std::vector<int> assign;
  std::vector<Scalar> centers;
};

// Deterministic 1-D k-means: centers seeded at the (j + 0.5)/k quantiles,
// ties in assignment resolved to the lowest center index, empty groups
// keep their previous center.
Kmeans1dResult kmeans_1d(const std::vector<Scalar>& values, int k,
                         int max_iter = 50) {
  std::vector<Scalar> sorted = values;
  std::sort(sorted.begin(), sorted.end());

  Kmeans1dResult r;
  r.centers.resize(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    r.centers[static_cast<std::size_t>(j)] =
        quantile_sorted(sorted, (static_cast<Scalar>(j) + 0.5) / k);
  }
  r.assign.assign(values.size(), 0);

  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = iter == 0;
    for (std::size_t t = 0; t < values.size(); ++t) {
      int best = 0;
      Scalar best_d = std::abs(values[t] - r.centers[0]);
      for (int j = 1; j < k; ++j) {
        const Scalar d = std::abs(values[t] - r.centers[static_cast<std::size_t>(j)]);
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      if (r.assign[t] != best) {
        r.assign[t] = best;
        changed = true;
      }
    }
    if (!changed) break;
    std::vector<Scalar> sum(static_cast<std::size_t>(k), 0);
    std::vector<int> cnt(static_cast<std::size_t>(k), 0);
    for (std::size_t t = 0; t < values.size(); ++t) {
      sum[static_cast<std::size_t>(r.assign[t])] += values[t];
      ++cnt[static_cast<std::size_t>(r.assign[t])];
    }
    for (int j = 0; j < k; ++j) {
      if (cnt[static_cast<std::size_t>(j)] > 0) {
        r.centers[static_cast<std::size_t>(j)] =
            sum[static_cast<std::size_t>(j)] / cnt[static_cast<std::size_t>(j)];
      }
    }
  }
  return r;
}

}  // namespace

Scalar average_linkage(std::span<const Index> a, std::span<const Index> b,
                       const DissimilarityMatrix& m) {
  if (a.empty() || b.empty()) {
    throw ComputeError("average_linkage: empty cluster");
  }
  Scalar sum = 0;
  for (const Index i : a) {
    for (const Index j : b) sum += m(i, j);
  }
  return sum / (static_cast<Scalar>(a.size()) * static_cast<Scalar>(b.size()));
}

Partition agglomerative(const DissimilarityMatrix& m, int k) {
  const Index n = m.n();
  check_k(k, n, 1, "agglomerative");

  // One slot per original element; a live slot's id equals its smallest
  // member because merges always land in the lower slot.
  std::vector<std::vector<Index>> members(static_cast<std::size_t>(n));
  std::vector<bool> alive(static_cast<std::size_t>(n), true);
  std::vector<std::uint32_t> version(static_cast<std::size_t>(n), 0);
  Mat cross_sum = m.values;  // cross_sum(a, b): total distance between slots

  struct Entry {
    Scalar linkage;
    Index a, b;
    std::uint32_t va, vb;
  };
  auto cmp = [](const Entry& x, const Entry& y) {
    return std::tie(x.linkage, x.a, x.b) > std::tie(y.linkage, y.a, y.b);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);

  for (Index i = 0; i < n; ++i) {
    members[static_cast<std::size_t>(i)] = {i};
    for (Index j = i + 1; j < n; ++j) {
      heap.push({m(i, j), i, j, 0, 0});
    }
  }

  Index live = n;
  while (live > static_cast<Index>(k)) {
    Entry e = heap.top();
    heap.pop();
    const auto a = static_cast<std::size_t>(e.a);
    const auto b = static_cast<std::size_t>(e.b);
    if (!alive[a] || !alive[b] || version[a] != e.va || version[b] != e.vb) {
      continue;
    }
    // Merge slot b into slot a (a < b by construction).
    members[a].insert(members[a].end(), members[b].begin(), members[b].end());
    members[b].clear();
    alive[b] = false;
    ++version[a];
    ++version[b];
    --live;
    const Scalar sa = static_cast<Scalar>(members[a].size());
    for (Index c = 0; c < n; ++c) {
      const auto cs = static_cast<std::size_t>(c);
      if (!alive[cs] || c == e.a) continue;
      const Scalar s = cross_sum(e.a, c) + cross_sum(e.b, c);
      cross_sum(e.a, c) = s;
      cross_sum(c, e.a) = s;
      const Index lo = std::min(e.a, c);
      const Index hi = std::max(e.a, c);
      heap.push({s / (sa * static_cast<Scalar>(members[cs].size())), lo, hi,
                 version[static_cast<std::size_t>(lo)],
                 version[static_cast<std::size_t>(hi)]});
    }
  }

  std::vector<std::vector<Index>> groups;
  for (std::size_t s = 0; s < members.size(); ++s) {
    if (alive[s]) groups.push_back(std::move(members[s]));
  }
  return make_partition(std::move(groups), k, m, n);
}

Partition pam(const DissimilarityMatrix& m, int k, int max_iter) {
  const Index n = m.n();
  check_k(k, n, 2, "pam");

  // BUILD: seed with the most central element, then greedily add the
  // candidate with the largest total distance reduction.
  std::vector<Index> medoids;
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);
  {
    Index first = 0;
    Scalar best_sum = std::numeric_limits<Scalar>::infinity();
    for (Index i = 0; i < n; ++i) {
      const Scalar s = m.values.row(i).sum();
      if (s < best_sum) {
        best_sum = s;
        first = i;
      }
    }
    medoids.push_back(first);
    chosen[static_cast<std::size_t>(first)] = true;
  }
  Vec nearest = m.values.col(medoids[0]);
  while (static_cast<int>(medoids.size()) < k) {
    Index best = -1;
    Scalar best_gain = -1;
    for (Index c = 0; c < n; ++c) {
      if (chosen[static_cast<std::size_t>(c)]) continue;
      Scalar gain = 0;
      for (Index j = 0; j < n; ++j) {
        const Scalar diff = nearest(j) - m(j, c);
        if (diff > 0) gain += diff;
      }
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    medoids.push_back(best);
    chosen[static_cast<std::size_t>(best)] = true;
    nearest = nearest.cwiseMin(m.values.col(best));
  }
  std::sort(medoids.begin(), medoids.end());

  // Points follow their nearest medoid (ties to the lowest index, medoids
  // kept sorted), then each cluster recomputes its medoid, until stable.
  auto assign_nearest = [&](std::vector<int>& assign) {
    bool changed = false;
    for (Index j = 0; j < n; ++j) {
      int best = 0;
      Scalar best_d = m(j, medoids[0]);
      for (std::size_t c = 1; c < medoids.size(); ++c) {
        const Scalar d = m(j, medoids[c]);
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(c);
        }
      }
      if (assign[static_cast<std::size_t>(j)] != best) {
        assign[static_cast<std::size_t>(j)] = best;
        changed = true;
      }
    }
    return changed;
  };

  std::vector<int> assign(static_cast<std::size_t>(n), -1);
  assign_nearest(assign);
  bool converged = false;
  for (int iter = 0; iter < max_iter; ++iter) {
    std::vector<std::vector<Index>> groups(medoids.size());
    for (Index j = 0; j < n; ++j) {
      groups[static_cast<std::size_t>(assign[static_cast<std::size_t>(j)])].push_back(j);
    }
    for (std::size_t c = 0; c < medoids.size(); ++c) {
      if (!groups[c].empty()) medoids[c] = medoid(groups[c], m);
    }
    std::sort(medoids.begin(), medoids.end());
    medoids.erase(std::unique(medoids.begin(), medoids.end()), medoids.end());

    std::vector<int> next(static_cast<std::size_t>(n), -1);
    assign_nearest(next);
    if (next == assign) {
      converged = true;
      break;
    }
    assign = std::move(next);
  }

  std::vector<std::vector<Index>> groups(medoids.size());
  for (Index j = 0; j < n; ++j) {
    groups[static_cast<std::size_t>(assign[static_cast<std::size_t>(j)])].push_back(j);
  }
  return make_partition(std::move(groups), k, m, n, converged);
}

Partition dissim_row_clustering(const DissimilarityMatrix& m, int k) {
  const Index n = m.n();
  check_k(k, n, 2, "dissim_row_clustering");

  std::vector<Index> remaining(static_cast<std::size_t>(n));
  std::iota(remaining.begin(), remaining.end(), Index{0});
  std::vector<std::vector<Index>> clusters;

  while (static_cast<int>(clusters.size()) < k && !remaining.empty()) {
    if (remaining.size() == 1) {
      clusters.push_back({remaining[0]});
      remaining.clear();
      break;
    }
    const int kk = std::min<int>(k, static_cast<int>(remaining.size()));
    Scalar best_center = std::numeric_limits<Scalar>::infinity();
    std::vector<Index> best_set;
    for (const Index row : remaining) {
      std::vector<Scalar> values;
      values.reserve(remaining.size());
      for (const Index c : remaining) values.push_back(m(row, c));
      const Kmeans1dResult km = kmeans_1d(values, kk);
      int g = 0;
      for (int j = 1; j < kk; ++j) {
        if (km.centers[static_cast<std::size_t>(j)] <
            km.centers[static_cast<std::size_t>(g)]) {
          g = j;
        }
      }
      if (km.centers[static_cast<std::size_t>(g)] < best_center) {
        best_center = km.centers[static_cast<std::size_t>(g)];
        best_set.clear();
        for (std::size_t t = 0; t < remaining.size(); ++t) {
          if (km.assign[t] == g) best_set.push_back(remaining[t]);
        }
      }
    }
    clusters.push_back(best_set);
    std::vector<Index> next;
    next.reserve(remaining.size() - best_set.size());
    std::set_difference(remaining.begin(), remaining.end(), best_set.begin(),
                        best_set.end(), std::back_inserter(next));
    remaining = std::move(next);
  }

  if (!remaining.empty()) {
    // Leftovers go to the cluster whose medoid is nearest.
    std::vector<Index> meds(clusters.size());
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      meds[c] = medoid(clusters[c], m);
    }
    for (const Index r : remaining) {
      std::size_t best = 0;
      Scalar best_d = m(r, meds[0]);
      for (std::size_t c = 1; c < meds.size(); ++c) {
        if (m(r, meds[c]) < best_d) {
          best_d = m(r, meds[c]);
          best = c;
        }
      }
      clusters[best].push_back(r);
    }
  }
  return make_partition(std::move(clusters), k, m, n);
}

MeanShiftResult mean_shift(const Mat& points, std::optional<Scalar> bandwidth) {
  const Index n = points.rows();
  if (n == 0) throw DataError("mean_shift: no points");
  if (bandwidth && *bandwidth <= 0) {
    throw DataError("mean_shift: bandwidth must be positive");
  }

  MeanShiftResult out;
  if (!bandwidth) {
    std::vector<Scalar> dists;
    dists.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        dists.push_back((points.row(i) - points.row(j)).norm());
      }
    }
    std::sort(dists.begin(), dists.end());
    Scalar bw = dists.empty() ? 0 : quantile_sorted(dists, 0.3);
    if (bw <= 0) {
      const auto nz = std::find_if(dists.begin(), dists.end(),
                                   [](Scalar d) { return d > 0; });
      if (nz == dists.end()) {
        // Every point coincides: one mode, nothing to iterate.
        out.mode_assignments.assign(static_cast<std::size_t>(n), 0);
        out.modes = points.topRows(1);
        out.bandwidth = 1.0;
        return out;
      }
      bw = *nz;
    }
    out.bandwidth = bw;
  } else {
    out.bandwidth = *bandwidth;
  }

  constexpr Scalar kShiftTol = 1e-6;
  constexpr int kMaxIter = 300;
  const Scalar bw = out.bandwidth;

  Mat converged(n, points.cols());
  Eigen::RowVectorXd x(points.cols()), mean(points.cols());
  for (Index i = 0; i < n; ++i) {
    x = points.row(i);
    for (int iter = 0; iter < kMaxIter; ++iter) {
      mean.setZero();
      Index count = 0;
      for (Index j = 0; j < n; ++j) {
        if ((points.row(j) - x).norm() <= bw) {
          mean += points.row(j);
          ++count;
        }
      }
      mean /= static_cast<Scalar>(count);
      const Scalar shift = (mean - x).norm();
      x = mean;
      if (shift < kShiftTol) break;
    }
    converged.row(i) = x;
  }

  // Greedy mode registry: a converged position joins the first mode within
  // bandwidth/2, otherwise founds a new one.
  std::vector<Index> founders;
  out.mode_assignments.assign(static_cast<std::size_t>(n), -1);
  for (Index i = 0; i < n; ++i) {
    int hit = -1;
    for (std::size_t f = 0; f < founders.size(); ++f) {
      if ((converged.row(i) - converged.row(founders[f])).norm() <= bw / 2) {
        hit = static_cast<int>(f);
        break;
      }
    }
    if (hit < 0) {
      founders.push_back(i);
      hit = static_cast<int>(founders.size()) - 1;
    }
    out.mode_assignments[static_cast<std::size_t>(i)] = hit;
  }
  out.modes.resize(static_cast<Index>(founders.size()), points.cols());
  for (std::size_t f = 0; f < founders.size(); ++f) {
    out.modes.row(static_cast<Index>(f)) = converged.row(founders[f]);
  }
  return out;
}

}  // namespace trajclust
