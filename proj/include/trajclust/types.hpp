#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace trajclust {

using Scalar = double;
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using Points = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;  // one sample per row
using Point2 = Eigen::Matrix<Scalar, 1, 2>;
using Index = Eigen::Index;

/// Malformed or inconsistent input (files, trajectories, parameters).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A computation that cannot produce a valid result (degenerate geometry,
/// unscoreable partitions, ...).
struct ComputeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class UserClass { car, pedestrian, bicycle, other };

std::string to_string(UserClass c);

struct TrajPoint {
  Scalar x = 0;
  Scalar y = 0;
  std::int64_t frame = 0;
};

/// An ordered positional trace of a single road user. Samples are stored
/// as an n x 2 matrix plus a parallel frame-counter vector; frames are
/// strictly increasing and coordinates finite.
struct Trajectory {
  std::string id;
  UserClass user_class = UserClass::other;
  Points xy;
  std::vector<std::int64_t> frames;

  Index size() const { return xy.rows(); }
  TrajPoint point(Index i) const { return {xy(i, 0), xy(i, 1), frames[i]}; }
};

using Dataset = std::vector<Trajectory>;

/// Validates invariants (length >= 2, finite coordinates, strictly
/// increasing non-negative frames) and builds the trajectory.
/// Throws DataError with the offending id on violation.
Trajectory make_trajectory(std::string id, UserClass user_class, Points xy,
                           std::vector<std::int64_t> frames);

Trajectory make_trajectory(std::string id, UserClass user_class,
                           const std::vector<TrajPoint>& points);

/// Per-dimension scenario extents used to map coordinates to [0, 1].
struct NormalizationParams {
  Scalar x_min = 0;
  Scalar x_max = 1;
  Scalar y_min = 0;
  Scalar y_max = 1;
};

struct EndpointPair {
  Point2 start;
  Point2 end;
};

/// Rescales every coordinate to (v - min) / (max - min) with the min/max
/// taken over the whole dataset, per dimension. The returned params invert
/// the mapping for reporting. Throws DataError on an empty dataset or a
/// degenerate dimension (max == min).
std::pair<Dataset, NormalizationParams> normalize(const Dataset& dataset);

/// Applies existing params instead of recomputing them.
Dataset normalize_with(const Dataset& dataset, const NormalizationParams& p);

/// Inverse of normalize: back to the scenario's metric frame.
Dataset denormalize(const Dataset& dataset, const NormalizationParams& p);
Point2 denormalize_point(const Point2& p, const NormalizationParams& params);

/// First and last sample of a trajectory.
EndpointPair endpoints(const Trajectory& t);

}  // namespace trajclust
