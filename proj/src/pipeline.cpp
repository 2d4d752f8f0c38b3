#include "trajclust/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

namespace trajclust {

std::string to_string(Method m) {
  switch (m) {
    case Method::agglo: return "agglo";
    case Method::a1ms: return "a1ms";
    case Method::a2ms: return "a2ms";
    case Method::pam: return "pam";
    case Method::dissim: return "dissim";
  }
  return "?";
}

std::string to_string(Selection s) {
  switch (s) {
    case Selection::spread_on_cluster: return "spread";
    case Selection::db_modified: return "db";
    case Selection::silhouette: return "silhouette";
  }
  return "?";
}

std::optional<Method> method_from_string(const std::string& s) {
  if (s == "agglo") return Method::agglo;
  if (s == "a1ms") return Method::a1ms;
  if (s == "a2ms") return Method::a2ms;
  if (s == "pam") return Method::pam;
  if (s == "dissim") return Method::dissim;
  return std::nullopt;
}

std::optional<Selection> selection_from_string(const std::string& s) {
  if (s == "spread") return Selection::spread_on_cluster;
  if (s == "db") return Selection::db_modified;
  if (s == "silhouette") return Selection::silhouette;
  return std::nullopt;
}

RunRecord run_once(const Dataset& dataset, const DissimilarityMatrix& m,
                   Method method, int k, Scalar min_trace,
                   std::optional<Scalar> bandwidth) {
  const auto t0 = std::chrono::steady_clock::now();

  Partition p;
  switch (method) {
    case Method::agglo:
      p = agglomerative(m, k);
      break;
    case Method::a1ms:
    case Method::a2ms: {
      p = agglomerative(m, k);
      RefineConfig rc;
      rc.mode = method == Method::a1ms ? RefineMode::a1ms : RefineMode::a2ms;
      rc.min_trace = min_trace;
      rc.bandwidth = bandwidth;
      p = refine(p, dataset, m, rc);
      break;
    }
    case Method::pam:
      p = pam(m, k);
      break;
    case Method::dissim:
      p = dissim_row_clustering(m, k);
      break;
  }

  RunRecord rec;
  auto [kept, rejected] = discard_singletons(p);
  rec.partition = std::move(kept);
  rec.k_nominal = k;
  rec.k_effective = rec.partition.k_effective;
  if (rec.partition.clusters.size() >= 2) {
    rec.report = make_report(rec.partition, m);
  }
  rec.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rec;
}

SweepResult sweep(const Dataset& dataset, const DissimilarityMatrix& m,
                  const SweepConfig& config) {
  const Index n = m.n();
  if (config.k_min < 2 || config.k_min > config.k_max ||
      static_cast<Index>(config.k_max) > n) {
    throw DataError("sweep: need 2 <= k_min <= k_max <= " + std::to_string(n));
  }

  const int count = config.k_max - config.k_min + 1;
  SweepResult result;
  result.per_k.resize(static_cast<std::size_t>(count));

  const int workers = std::max(1, std::min(config.workers, count));
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto body = [&] {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= count) return;
      try {
        result.per_k[static_cast<std::size_t>(idx)] =
            run_once(dataset, m, config.method, config.k_min + idx,
                     config.min_trace, config.bandwidth);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (std::thread& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  for (std::size_t i = 0; i < result.per_k.size(); ++i) {
    const RunRecord& rec = result.per_k[i];
    if (!rec.report) continue;
    if (result.best_index < 0) {
      result.best_index = static_cast<int>(i);
      continue;
    }
    const ValidityReport& best =
        *result.per_k[static_cast<std::size_t>(result.best_index)].report;
    bool better = false;
    switch (config.selection) {
      case Selection::spread_on_cluster:
        better = rec.report->spread_on_cluster < best.spread_on_cluster;
        break;
      case Selection::db_modified:
        better = rec.report->db_modified < best.db_modified;
        break;
      case Selection::silhouette:
        better = rec.report->silhouette > best.silhouette;
        break;
    }
    if (better) result.best_index = static_cast<int>(i);
  }
  if (result.best_index < 0) {
    throw ComputeError("sweep: no k in [" + std::to_string(config.k_min) +
                       ", " + std::to_string(config.k_max) +
                       "] produced a scoreable partition");
  }
  return result;
}

SweepResult sweep(const Dataset& dataset, const SweepConfig& config,
                  const std::optional<std::filesystem::path>& cache_dir) {
  const DissimilarityMatrix m =
      load_or_build(dataset, config.workers, cache_dir);
  return sweep(dataset, m, config);
}

}  // namespace trajclust
