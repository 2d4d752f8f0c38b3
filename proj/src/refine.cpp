#include "trajclust/refine.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <vector>

namespace trajclust {

namespace {

std::vector<Scalar> cumulative_arc(const Points& p) {
  std::vector<Scalar> cum(static_cast<std::size_t>(p.rows()), 0);
  for (Index i = 1; i < p.rows(); ++i) {
    cum[static_cast<std::size_t>(i)] =
        cum[static_cast<std::size_t>(i - 1)] + (p.row(i) - p.row(i - 1)).norm();
  }
  return cum;
}

// Point-to-segment parameter; nullopt for a degenerate segment.
std::optional<Scalar> segment_lambda(const Points& poly, Index seg,
                                     const Point2& p) {
  const Point2 a = poly.row(seg);
  const Point2 dir = poly.row(seg + 1) - poly.row(seg);
  const Scalar len2 = dir.squaredNorm();
  if (len2 == 0) return std::nullopt;
  return (p - a).dot(dir) / len2;
}

Point2 interpolate(const Points& poly, Index seg, Scalar lambda) {
  if (lambda == 0) return poly.row(seg);
  if (lambda == 1) return poly.row(seg + 1);
  return poly.row(seg) + lambda * (poly.row(seg + 1) - poly.row(seg));
}

}  // namespace

ProjectionResult project(const Points& onto, const Points& reference) {
  if (onto.rows() < 2 || reference.rows() < 2) {
    throw DataError("project: both trajectories need at least 2 points");
  }
  const Index segs = onto.rows() - 1;
  const std::vector<Scalar> cum = cumulative_arc(onto);
  const Scalar total = cum.back();

  ProjectionResult r;
  const Point2 ref_start = reference.row(0);
  for (Index j = 0; j < segs; ++j) {
    const auto lambda = segment_lambda(onto, j, ref_start);
    if (lambda && *lambda >= 0 && *lambda <= 1) {
      r.start_cut = {j, *lambda};
      break;
    }
  }
  const Point2 ref_end = reference.row(reference.rows() - 1);
  for (Index j = segs - 1; j >= 0; --j) {
    const auto lambda = segment_lambda(onto, j, ref_end);
    if (lambda && *lambda >= 0 && *lambda <= 1) {
      r.end_cut = {j, *lambda};
      break;
    }
  }

  auto arc_at = [&](const ProjectionCut& cut, Scalar fallback) {
    if (cut.segment < 0) return fallback;
    const std::size_t s = static_cast<std::size_t>(cut.segment);
    if (cut.lambda == 0) return cum[s];
    if (cut.lambda == 1) return cum[s + 1];
    return cum[s] + cut.lambda * (cum[s + 1] - cum[s]);
  };
  const Scalar s_begin = arc_at(r.start_cut, 0);
  const Scalar s_end = arc_at(r.end_cut, total);

  if (s_begin > s_end) {
    r.trimmed.resize(0, 2);
    r.trace_fraction = 0;
    return r;
  }

  std::vector<Point2> pts;
  if (r.start_cut.segment >= 0) {
    pts.push_back(interpolate(onto, r.start_cut.segment, r.start_cut.lambda));
  } else {
    pts.push_back(onto.row(0));
  }
  const Index from = r.start_cut.segment >= 0 ? r.start_cut.segment + 1 : 1;
  const Index to = r.end_cut.segment >= 0 ? r.end_cut.segment : segs - 1;
  for (Index v = from; v <= to; ++v) {
    const std::size_t s = static_cast<std::size_t>(v);
    if (cum[s] >= s_begin && cum[s] <= s_end) {
      const Point2 vertex = onto.row(v);
      if ((vertex - pts.back()).norm() > 0) pts.push_back(vertex);
    }
  }
  const Point2 last = r.end_cut.segment >= 0
                          ? interpolate(onto, r.end_cut.segment, r.end_cut.lambda)
                          : Point2(onto.row(onto.rows() - 1));
  if ((last - pts.back()).norm() > 0) pts.push_back(last);

  r.trimmed.resize(static_cast<Index>(pts.size()), 2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    r.trimmed.row(static_cast<Index>(i)) = pts[i];
  }
  r.trace_fraction = total > 0 ? (s_end - s_begin) / total : 0;
  return r;
}

Partition split_clusters(const Partition& partition, const Dataset& dataset,
                         RefineMode mode, std::optional<Scalar> bandwidth,
                         const DissimilarityMatrix& m) {
  if (mode == RefineMode::none) {
    throw DataError("split_clusters: mode must be a1ms or a2ms");
  }

  std::vector<std::vector<Index>> groups;
  for (const Cluster& parent : partition.clusters) {
    const Index sz = static_cast<Index>(parent.members.size());
    std::map<std::pair<int, int>, std::vector<Index>> sub;
    if (mode == RefineMode::a2ms) {
      Mat starts(sz, 2), ends(sz, 2);
      for (Index t = 0; t < sz; ++t) {
        const EndpointPair ep =
            endpoints(dataset[static_cast<std::size_t>(parent.members[static_cast<std::size_t>(t)])]);
        starts.row(t) = ep.start;
        ends.row(t) = ep.end;
      }
      const MeanShiftResult ms_start = mean_shift(starts, bandwidth);
      const MeanShiftResult ms_end = mean_shift(ends, bandwidth);
      for (Index t = 0; t < sz; ++t) {
        sub[{ms_start.mode_assignments[static_cast<std::size_t>(t)],
             ms_end.mode_assignments[static_cast<std::size_t>(t)]}]
            .push_back(parent.members[static_cast<std::size_t>(t)]);
      }
    } else {
      Mat joint(sz, 4);
      for (Index t = 0; t < sz; ++t) {
        const EndpointPair ep =
            endpoints(dataset[static_cast<std::size_t>(parent.members[static_cast<std::size_t>(t)])]);
        joint(t, 0) = ep.start(0);
        joint(t, 1) = ep.start(1);
        joint(t, 2) = ep.end(0);
        joint(t, 3) = ep.end(1);
      }
      const MeanShiftResult ms = mean_shift(joint, bandwidth);
      for (Index t = 0; t < sz; ++t) {
        sub[{ms.mode_assignments[static_cast<std::size_t>(t)], 0}].push_back(
            parent.members[static_cast<std::size_t>(t)]);
      }
    }
    for (auto& [label, members] : sub) groups.push_back(std::move(members));
  }
  return make_partition(std::move(groups), partition.k_nominal, m,
                        static_cast<Index>(partition.labels.size()),
                        partition.converged);
}

Partition merge_clusters(const Partition& partition,
                         const DissimilarityMatrix& m, const Dataset& dataset,
                         Scalar min_trace) {
  if (min_trace <= 0 || min_trace > 1) {
    throw DataError("merge_clusters: min_trace must be in (0, 1]");
  }
  // trace and d_proj depend only on the two medoid trajectories, so the
  // restart scans can reuse evaluations keyed by the medoid index pair.
  std::map<std::pair<Index, Index>, std::pair<Scalar, Scalar>> evaluated;
  auto evaluate = [&](Index med_i, Index med_j) {
    const auto key = std::make_pair(med_i, med_j);
    const auto hit = evaluated.find(key);
    if (hit != evaluated.end()) return hit->second;
    const ProjectionResult proj =
        project(dataset[static_cast<std::size_t>(med_i)],
                dataset[static_cast<std::size_t>(med_j)]);
    std::pair<Scalar, Scalar> result{proj.trace_fraction,
                                     std::numeric_limits<Scalar>::infinity()};
    if (proj.trimmed.rows() > 0) {
      result.second = dtw(dataset[static_cast<std::size_t>(med_j)].xy, proj.trimmed);
    }
    evaluated.emplace(key, result);
    return result;
  };

  Partition p = partition;
  bool merged = true;
  while (merged && p.clusters.size() > 1) {
    merged = false;
    const std::size_t nc = p.clusters.size();
    for (std::size_t i = 0; i < nc && !merged; ++i) {
      for (std::size_t j = 0; j < nc && !merged; ++j) {
        if (i == j) continue;
        const auto [trace, d_proj] =
            evaluate(p.clusters[i].medoid, p.clusters[j].medoid);
        if (trace < min_trace) continue;
        if (d_proj <= p.clusters[i].spread + p.clusters[j].spread) {
          std::vector<std::vector<Index>> groups;
          groups.reserve(nc - 1);
          std::vector<Index> fused = p.clusters[i].members;
          fused.insert(fused.end(), p.clusters[j].members.begin(),
                       p.clusters[j].members.end());
          groups.push_back(std::move(fused));
          for (std::size_t c = 0; c < nc; ++c) {
            if (c != i && c != j) groups.push_back(p.clusters[c].members);
          }
          p = make_partition(std::move(groups), p.k_nominal, m,
                             static_cast<Index>(p.labels.size()), p.converged);
          merged = true;
        }
      }
    }
  }
  return p;
}

Partition refine(const Partition& partition, const Dataset& dataset,
                 const DissimilarityMatrix& m, const RefineConfig& config) {
  if (config.mode == RefineMode::none) return partition;
  const Partition split =
      split_clusters(partition, dataset, config.mode, config.bandwidth, m);
  return merge_clusters(split, m, dataset, config.min_trace);
}

std::pair<Partition, std::vector<Index>> discard_singletons(
    const Partition& partition) {
  Partition p;
  p.k_nominal = partition.k_nominal;
  p.converged = partition.converged;
  p.labels.assign(partition.labels.size(), kRejected);
  std::vector<Index> rejected;
  for (const Cluster& c : partition.clusters) {
    if (c.members.size() == 1) {
      rejected.push_back(c.members.front());
      continue;
    }
    const int label = static_cast<int>(p.clusters.size());
    for (const Index i : c.members) {
      p.labels[static_cast<std::size_t>(i)] = label;
    }
    p.clusters.push_back(c);
  }
  p.k_effective = static_cast<int>(p.clusters.size());
  return {std::move(p), std::move(rejected)};
}

}  // namespace trajclust
