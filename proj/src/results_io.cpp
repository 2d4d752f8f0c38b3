#include "trajclust/results_io.hpp"

#include "trajclust/data_io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>

namespace trajclust {

namespace {

using nlohmann::json;

std::string fmt(Scalar v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string metric_row(Method method, double time_s,
                       const std::optional<ValidityReport>& report,
                       int k_nominal, int k_effective, Index kept, Index total) {
  std::string row = to_string(method) + "," + fmt(time_s) + ",";
  if (report) {
    row += fmt(report->db_modified) + "," + fmt(report->db_original) + "," +
           fmt(report->silhouette) + "," + fmt(report->spread_on_cluster) + ",";
  } else {
    row += "UNSCOREABLE,UNSCOREABLE,UNSCOREABLE,UNSCOREABLE,";
  }
  char tail[96];
  std::snprintf(tail, sizeof(tail), "%d (%d),%.2f%% (%lld)", k_nominal,
                k_effective,
                100.0 * static_cast<double>(kept) / static_cast<double>(total),
                static_cast<long long>(total - kept));
  return row + tail;
}

json config_to_json(const SweepConfig& c, const Hash256& hash,
                    const NormalizationParams& norm) {
  json j;
  j["method"] = to_string(c.method);
  j["k_min"] = c.k_min;
  j["k_max"] = c.k_max;
  j["min_trace"] = c.min_trace;
  if (c.bandwidth) {
    j["bandwidth"] = *c.bandwidth;
  } else {
    j["bandwidth"] = "auto";
  }
  j["selection"] = to_string(c.selection);
  j["workers"] = c.workers;
  j["dataset_hash"] = to_hex(hash);
  j["normalization"] = {{"x_min", norm.x_min},
                        {"x_max", norm.x_max},
                        {"y_min", norm.y_min},
                        {"y_max", norm.y_max}};
  return j;
}

json partition_to_json(const Partition& p) {
  json j;
  j["k_nominal"] = p.k_nominal;
  j["k_effective"] = p.k_effective;
  j["converged"] = p.converged;
  j["labels"] = p.labels;
  json clusters = json::array();
  for (const Cluster& c : p.clusters) {
    clusters.push_back(
        {{"members", c.members}, {"medoid", c.medoid}, {"spread", c.spread}});
  }
  j["clusters"] = std::move(clusters);
  return j;
}

}  // namespace

void save_partition_json(const Partition& p, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << partition_to_json(p).dump(2) << '\n';
  if (!out) throw DataError("write failed: " + path.string());
}

Partition load_partition_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  json j;
  try {
    in >> j;
    Partition p;
    p.k_nominal = j.at("k_nominal").get<int>();
    p.k_effective = j.at("k_effective").get<int>();
    p.converged = j.at("converged").get<bool>();
    p.labels = j.at("labels").get<std::vector<int>>();
    for (const auto& c : j.at("clusters")) {
      Cluster cl;
      cl.members = c.at("members").get<std::vector<Index>>();
      cl.medoid = c.at("medoid").get<Index>();
      cl.spread = c.at("spread").get<Scalar>();
      p.clusters.push_back(std::move(cl));
    }
    return p;
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

NormalizationParams load_norm_params(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw DataError("cannot open " + manifest_path.string());
  try {
    json j;
    in >> j;
    const json& n = j.at("config").at("normalization");
    return {n.at("x_min").get<Scalar>(), n.at("x_max").get<Scalar>(),
            n.at("y_min").get<Scalar>(), n.at("y_max").get<Scalar>()};
  } catch (const json::exception& e) {
    throw DataError(manifest_path.string() + ": " + e.what());
  }
}

void save_method_summary(const std::vector<std::pair<Method, SweepResult>>& runs,
                         Index dataset_size,
                         const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << "Method,Time,DB,DB orig.,Slh.,Spr.,Best n_k,Nb trajs.\n";
  for (const auto& [method, result] : runs) {
    const RunRecord& best = result.best();
    double mean_time = 0;
    for (const RunRecord& rec : result.per_k) mean_time += rec.wall_time_s;
    mean_time /= static_cast<double>(result.per_k.size());
    Index kept = 0;
    for (const int l : best.partition.labels) {
      if (l != kRejected) ++kept;
    }
    out << metric_row(method, mean_time, best.report, best.k_nominal,
                      best.k_effective, kept, dataset_size)
        << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

void write_manifest(const std::filesystem::path& manifest_path,
                    const std::vector<std::filesystem::path>& files,
                    const std::string& config_json) {
  json j;
  j["tool"] = "trajclust";
  j["config"] = json::parse(config_json);
  json listing = json::array();
  for (const std::filesystem::path& f : files) {
    listing.push_back({{"path", f.filename().string()},
                       {"bytes", std::filesystem::file_size(f)},
                       {"sha256", to_hex(file_hash(f))}});
  }
  j["files"] = std::move(listing);
  std::ofstream out(manifest_path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + manifest_path.string());
  out << j.dump(2) << '\n';
  if (!out) throw DataError("write failed: " + manifest_path.string());
}

std::filesystem::path save_result(const SweepResult& result,
                                  const Dataset& dataset,
                                  const RunContext& ctx,
                                  const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec && !std::filesystem::is_directory(out_dir)) {
    throw DataError("cannot create output directory " + out_dir.string());
  }

  const RunRecord& best = result.best();

  const std::filesystem::path labels_path = out_dir / "labels.csv";
  {
    std::ofstream out(labels_path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + labels_path.string());
    out << "trajectory_id,cluster_id\n";
    for (std::size_t i = 0; i < best.partition.labels.size(); ++i) {
      out << csv_field(dataset[i].id) << ',';
      if (best.partition.labels[i] == kRejected) {
        out << "REJECTED\n";
      } else {
        out << best.partition.labels[i] << '\n';
      }
    }
    if (!out) throw DataError("write failed: " + labels_path.string());
  }

  const std::filesystem::path metrics_path = out_dir / "metrics.csv";
  {
    std::ofstream out(metrics_path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + metrics_path.string());
    out << "Method,Time,DB,DB orig.,Slh.,Spr.,Best n_k,Nb trajs.,best\n";
    const Index total = static_cast<Index>(dataset.size());
    for (std::size_t i = 0; i < result.per_k.size(); ++i) {
      const RunRecord& rec = result.per_k[i];
      Index kept = 0;
      for (const int l : rec.partition.labels) {
        if (l != kRejected) ++kept;
      }
      out << metric_row(ctx.config.method, rec.wall_time_s, rec.report,
                        rec.k_nominal, rec.k_effective, kept, total)
          << ',' << (static_cast<int>(i) == result.best_index ? 1 : 0) << '\n';
    }
    if (!out) throw DataError("write failed: " + metrics_path.string());
  }

  const std::filesystem::path partition_path = out_dir / "partition.json";
  save_partition_json(best.partition, partition_path);

  const std::filesystem::path manifest_path = out_dir / "manifest.json";
  write_manifest(manifest_path, {labels_path, metrics_path, partition_path},
                 config_to_json(ctx.config, ctx.data_hash, ctx.norm).dump());
  return manifest_path;
}

}  // namespace trajclust
