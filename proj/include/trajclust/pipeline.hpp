#pragma once

#include "trajclust/matrix_cache.hpp"
#include "trajclust/refine.hpp"
#include "trajclust/validity.hpp"

#include <optional>
#include <string>

namespace trajclust {

enum class Method { agglo, a1ms, a2ms, pam, dissim };
enum class Selection { spread_on_cluster, db_modified, silhouette };

std::string to_string(Method m);
std::string to_string(Selection s);
std::optional<Method> method_from_string(const std::string& s);
std::optional<Selection> selection_from_string(const std::string& s);

struct SweepConfig {
  Method method = Method::a2ms;
  int k_min = 2;
  int k_max = 2;
  Scalar min_trace = 0.6;
  std::optional<Scalar> bandwidth;  // nullopt = automatic
  Selection selection = Selection::spread_on_cluster;
  int workers = 1;
};

struct RunRecord {
  int k_nominal = 0;
  int k_effective = 0;
  Partition partition;
  std::optional<ValidityReport> report;  // nullopt = unscoreable (< 2 clusters)
  double wall_time_s = 0;
};

struct SweepResult {
  std::vector<RunRecord> per_k;  // ordered by k_nominal
  int best_index = -1;

  const RunRecord& best() const { return per_k[static_cast<std::size_t>(best_index)]; }
  int best_k() const { return best().k_nominal; }
};

/// One clustering evaluation: the base method at the requested k, the
/// endpoint split + merge for a1ms/a2ms, singleton discarding, and the
/// validity report (absent when fewer than 2 clusters survive).
RunRecord run_once(const Dataset& dataset, const DissimilarityMatrix& m,
                   Method method, int k, Scalar min_trace,
                   std::optional<Scalar> bandwidth);

/// Runs run_once for every k in [k_min, k_max] (in parallel across k when
/// config.workers > 1) against one shared matrix and selects the best
/// scoreable record under the configured criterion; ties go to smaller k.
/// Throws ComputeError when every k is unscoreable.
SweepResult sweep(const Dataset& dataset, const DissimilarityMatrix& m,
                  const SweepConfig& config);

/// Convenience overload that builds or loads the cached matrix first.
SweepResult sweep(const Dataset& dataset, const SweepConfig& config,
                  const std::optional<std::filesystem::path>& cache_dir);

}  // namespace trajclust
