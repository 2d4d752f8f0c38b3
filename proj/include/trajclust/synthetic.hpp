#pragma once

#include "trajclust/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace trajclust {

/// Ground-truth label assigned to random-walk outliers.
inline constexpr int kOutlierLabel = -1;

enum class ManeuverShape { straight, left_turn, right_turn, crossing };

std::optional<ManeuverShape> shape_from_string(const std::string& s);
std::string to_string(ManeuverShape s);

struct TemplateSpec {
  ManeuverShape shape = ManeuverShape::straight;
  int count = 0;
  // Start-truncation fraction range; each instance drops a uniform draw
  // from [lo, hi] of its leading samples.
  Scalar truncate_lo = 0;
  Scalar truncate_hi = 0;
};

struct SyntheticSpec {
  std::vector<TemplateSpec> templates;
  Scalar noise_sigma = 0;   // per-point, per-dimension Gaussian
  int outlier_count = 0;    // random-walk eccentric trajectories
  int points = 40;          // samples per trajectory before truncation
  Scalar scale = 1.0;       // scene extent
  std::uint64_t seed = 0;
};

/// The noise-free polyline of one maneuver shape, sampled at uniform arc
/// length. Turns are quarter-circle arcs; straight and crossing are
/// perpendicular lines through the scene.
Points template_polyline(ManeuverShape shape, int points, Scalar scale);

/// Deterministic scenario generator: every trajectory is seeded from
/// (seed, position), so the output is identical regardless of call
/// interleaving. Returns the trajectories and their ground-truth template
/// labels (outliers get kOutlierLabel).
std::pair<Dataset, std::vector<int>> generate_synthetic(const SyntheticSpec& spec);

}  // namespace trajclust
