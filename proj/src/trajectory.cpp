#include "trajclust/types.hpp"

#include <cmath>
#include <limits>

namespace trajclust {

std::string to_string(UserClass c) {
  switch (c) {
    case UserClass::car: return "car";
    case UserClass::pedestrian: return "pedestrian";
    case UserClass::bicycle: return "bicycle";
    case UserClass::other: return "other";
  }
  return "other";
}

Trajectory make_trajectory(std::string id, UserClass user_class, Points xy,
                           std::vector<std::int64_t> frames) {
  if (xy.rows() < 2) {
    throw DataError("trajectory '" + id + "': needs at least 2 points, got " +
                    std::to_string(xy.rows()));
  }
  if (static_cast<Index>(frames.size()) != xy.rows()) {
    throw DataError("trajectory '" + id + "': frame count " +
                    std::to_string(frames.size()) + " does not match " +
                    std::to_string(xy.rows()) + " samples");
  }
  if (!xy.allFinite()) {
    throw DataError("trajectory '" + id + "': non-finite coordinate");
  }
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i] < 0) {
      throw DataError("trajectory '" + id + "': negative frame index");
    }
    if (i > 0 && frames[i] <= frames[i - 1]) {
      throw DataError("trajectory '" + id +
                      "': frames not strictly increasing at sample " +
                      std::to_string(i));
    }
  }
  Trajectory t;
  t.id = std::move(id);
  t.user_class = user_class;
  t.xy = std::move(xy);
  t.frames = std::move(frames);
  return t;
}

Trajectory make_trajectory(std::string id, UserClass user_class,
                           const std::vector<TrajPoint>& points) {
  Points xy(static_cast<Index>(points.size()), 2);
  std::vector<std::int64_t> frames(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    xy(static_cast<Index>(i), 0) = points[i].x;
    xy(static_cast<Index>(i), 1) = points[i].y;
    frames[i] = points[i].frame;
  }
  return make_trajectory(std::move(id), user_class, std::move(xy),
                         std::move(frames));
}

std::pair<Dataset, NormalizationParams> normalize(const Dataset& dataset) {
  if (dataset.empty()) throw DataError("normalize: empty dataset");

  NormalizationParams p;
  p.x_min = std::numeric_limits<Scalar>::infinity();
  p.x_max = -std::numeric_limits<Scalar>::infinity();
  p.y_min = std::numeric_limits<Scalar>::infinity();
  p.y_max = -std::numeric_limits<Scalar>::infinity();
  for (const Trajectory& t : dataset) {
    p.x_min = std::min(p.x_min, t.xy.col(0).minCoeff());
    p.x_max = std::max(p.x_max, t.xy.col(0).maxCoeff());
    p.y_min = std::min(p.y_min, t.xy.col(1).minCoeff());
    p.y_max = std::max(p.y_max, t.xy.col(1).maxCoeff());
  }
  if (!(p.x_max > p.x_min)) {
    throw DataError("normalize: degenerate x dimension (min == max == " +
                    std::to_string(p.x_min) + ")");
  }
  if (!(p.y_max > p.y_min)) {
    throw DataError("normalize: degenerate y dimension (min == max == " +
                    std::to_string(p.y_min) + ")");
  }
  return {normalize_with(dataset, p), p};
}

Dataset normalize_with(const Dataset& dataset, const NormalizationParams& p) {
  const Scalar dx = p.x_max - p.x_min;
  const Scalar dy = p.y_max - p.y_min;
  if (!(dx > 0) || !(dy > 0)) {
    throw DataError("normalize: degenerate normalization params");
  }
  Dataset out = dataset;
  for (Trajectory& t : out) {
    t.xy.col(0) = (t.xy.col(0).array() - p.x_min) / dx;
    t.xy.col(1) = (t.xy.col(1).array() - p.y_min) / dy;
  }
  return out;
}

Dataset denormalize(const Dataset& dataset, const NormalizationParams& p) {
  Dataset out = dataset;
  for (Trajectory& t : out) {
    t.xy.col(0) = t.xy.col(0).array() * (p.x_max - p.x_min) + p.x_min;
    t.xy.col(1) = t.xy.col(1).array() * (p.y_max - p.y_min) + p.y_min;
  }
  return out;
}

Point2 denormalize_point(const Point2& p, const NormalizationParams& params) {
  Point2 out;
  out(0) = p(0) * (params.x_max - params.x_min) + params.x_min;
  out(1) = p(1) * (params.y_max - params.y_min) + params.y_min;
  return out;
}

EndpointPair endpoints(const Trajectory& t) {
  return {t.xy.row(0), t.xy.row(t.size() - 1)};
}

}  // namespace trajclust
