#include "trajclust/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace trajclust {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::mt19937_64 rng_for(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(index + 1)));
}

}  // namespace

std::optional<ManeuverShape> shape_from_string(const std::string& s) {
  if (s == "straight") return ManeuverShape::straight;
  if (s == "left" || s == "left_turn") return ManeuverShape::left_turn;
  if (s == "right" || s == "right_turn") return ManeuverShape::right_turn;
  if (s == "crossing") return ManeuverShape::crossing;
  return std::nullopt;
}

std::string to_string(ManeuverShape s) {
  switch (s) {
    case ManeuverShape::straight: return "straight";
    case ManeuverShape::left_turn: return "left_turn";
    case ManeuverShape::right_turn: return "right_turn";
    case ManeuverShape::crossing: return "crossing";
  }
  return "?";
}

Points template_polyline(ManeuverShape shape, int points, Scalar scale) {
  if (points < 2) throw DataError("template_polyline: need at least 2 points");
  Points p(points, 2);
  const Scalar s = scale;
  for (int i = 0; i < points; ++i) {
    const Scalar t = static_cast<Scalar>(i) / (points - 1);
    switch (shape) {
      case ManeuverShape::straight:  // west to east through the middle
        p(i, 0) = t * s;
        p(i, 1) = 0.5 * s;
        break;
      case ManeuverShape::crossing:  // south to north through the middle
        p(i, 0) = 0.5 * s;
        p(i, 1) = t * s;
        break;
      case ManeuverShape::left_turn: {  // enters south heading north, exits west
        const Scalar theta = t * std::numbers::pi_v<Scalar> / 2;
        p(i, 0) = 0.5 * s * std::cos(theta);
        p(i, 1) = 0.5 * s * std::sin(theta);
        break;
      }
      case ManeuverShape::right_turn: {  // enters south heading north, exits east
        const Scalar theta = std::numbers::pi_v<Scalar> * (1 - t / 2);
        p(i, 0) = s + 0.5 * s * std::cos(theta);
        p(i, 1) = 0.5 * s * std::sin(theta);
        break;
      }
    }
  }
  return p;
}

std::pair<Dataset, std::vector<int>> generate_synthetic(
    const SyntheticSpec& spec) {
  if (spec.points < 2) throw DataError("generate_synthetic: points < 2");
  if (spec.noise_sigma < 0) throw DataError("generate_synthetic: negative sigma");

  Dataset dataset;
  std::vector<int> labels;
  std::uint64_t position = 0;

  auto emit = [&](Points xy, int label) {
    std::vector<std::int64_t> frames(static_cast<std::size_t>(xy.rows()));
    for (std::size_t f = 0; f < frames.size(); ++f) {
      frames[f] = static_cast<std::int64_t>(f);
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "synth-%04llu",
                  static_cast<unsigned long long>(position));
    dataset.push_back(make_trajectory(buf, UserClass::other, std::move(xy),
                                      std::move(frames)));
    labels.push_back(label);
    ++position;
  };

  for (std::size_t t = 0; t < spec.templates.size(); ++t) {
    const TemplateSpec& tpl = spec.templates[t];
    if (tpl.count < 0 || tpl.truncate_lo < 0 || tpl.truncate_hi > 0.9 ||
        tpl.truncate_lo > tpl.truncate_hi) {
      throw DataError("generate_synthetic: bad template spec");
    }
    const Points base = template_polyline(tpl.shape, spec.points, spec.scale);
    for (int c = 0; c < tpl.count; ++c) {
      std::mt19937_64 rng = rng_for(spec.seed, position);
      std::uniform_real_distribution<Scalar> unif(tpl.truncate_lo,
                                                  tpl.truncate_hi);
      const Scalar frac = tpl.truncate_lo == tpl.truncate_hi ? tpl.truncate_lo
                                                             : unif(rng);
      const Index drop = static_cast<Index>(
          std::llround(frac * static_cast<Scalar>(spec.points)));
      const Index kept = std::max<Index>(2, spec.points - drop);
      Points xy = base.bottomRows(kept);
      if (spec.noise_sigma > 0) {
        std::normal_distribution<Scalar> noise(0, spec.noise_sigma);
        for (Index i = 0; i < xy.rows(); ++i) {
          xy(i, 0) += noise(rng);
          xy(i, 1) += noise(rng);
        }
      }
      emit(std::move(xy), static_cast<int>(t));
    }
  }

  // Random-walk outliers: wandering heading, template-comparable step size.
  for (int o = 0; o < spec.outlier_count; ++o) {
    std::mt19937_64 rng = rng_for(spec.seed, position);
    std::uniform_real_distribution<Scalar> unif01(0, 1);
    std::normal_distribution<Scalar> turn(0, 0.6);
    Points xy(spec.points, 2);
    Scalar x = spec.scale * (0.2 + 0.6 * unif01(rng));
    Scalar y = spec.scale * (0.2 + 0.6 * unif01(rng));
    Scalar heading = unif01(rng) * 2 * std::numbers::pi_v<Scalar>;
    const Scalar step = spec.scale / static_cast<Scalar>(spec.points);
    for (Index i = 0; i < spec.points; ++i) {
      xy(i, 0) = x;
      xy(i, 1) = y;
      heading += turn(rng);
      x += step * std::cos(heading);
      y += step * std::sin(heading);
    }
    emit(std::move(xy), kOutlierLabel);
  }

  return {std::move(dataset), std::move(labels)};
}

}  // namespace trajclust
