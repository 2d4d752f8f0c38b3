#include "trajclust/data_io.hpp"
#include "trajclust/pipeline.hpp"
#include "trajclust/report.hpp"
#include "trajclust/results_io.hpp"
#include "trajclust/synthetic.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

namespace {

using namespace trajclust;
using nlohmann::json;

std::optional<Scalar> parse_bandwidth(const std::string& s) {
  if (s == "auto") return std::nullopt;
  try {
    std::size_t used = 0;
    const Scalar v = std::stod(s, &used);
    if (used != s.size() || v <= 0) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw CLI::ValidationError("--bandwidth", "expected 'auto' or a positive number");
  }
}

UserClass parse_class(const std::string& s) {
  if (s == "car") return UserClass::car;
  if (s == "pedestrian") return UserClass::pedestrian;
  if (s == "bicycle") return UserClass::bicycle;
  if (s == "other") return UserClass::other;
  throw CLI::ValidationError("--class", "expected car|pedestrian|bicycle|other");
}

std::pair<int, int> parse_range(const std::string& s) {
  const auto colon = s.find(':');
  try {
    if (colon == std::string::npos) {
      const int v = std::stoi(s);
      return {v, v};
    }
    return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--range", "expected LO:HI");
  }
}

TemplateSpec parse_template(const std::string& s) {
  // shape:count[:trunc_lo[:trunc_hi]]
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto next = s.find(':', pos);
    parts.push_back(s.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (parts.size() < 2 || parts.size() > 4) {
    throw CLI::ValidationError("--template", "expected shape:count[:trunc_lo[:trunc_hi]]");
  }
  const auto shape = shape_from_string(parts[0]);
  if (!shape) {
    throw CLI::ValidationError(
        "--template", "unknown shape '" + parts[0] +
                          "' (straight|left|right|crossing)");
  }
  TemplateSpec t;
  t.shape = *shape;
  try {
    t.count = std::stoi(parts[1]);
    if (parts.size() > 2) t.truncate_lo = t.truncate_hi = std::stod(parts[2]);
    if (parts.size() > 3) t.truncate_hi = std::stod(parts[3]);
  } catch (const std::exception&) {
    throw CLI::ValidationError("--template", "bad number in '" + s + "'");
  }
  return t;
}

struct CommonOptions {
  std::string data;
  std::string method = "a2ms";
  int k = 3;
  int k_min = 2;
  int k_max = 10;
  double min_trace = 0.6;
  std::string bandwidth = "auto";
  std::string selection = "spread";
  int workers = 1;
  std::string out;
  std::string cache_dir;
  std::string matrix_file;
};

SweepConfig build_config(const CommonOptions& o, int k_min, int k_max) {
  const auto method = method_from_string(o.method);
  if (!method) {
    throw CLI::ValidationError("--method", "expected agglo|a1ms|a2ms|pam|dissim");
  }
  const auto selection = selection_from_string(o.selection);
  if (!selection) {
    throw CLI::ValidationError("--selection", "expected spread|db|silhouette");
  }
  SweepConfig c;
  c.method = *method;
  c.k_min = k_min;
  c.k_max = k_max;
  c.min_trace = o.min_trace;
  c.bandwidth = parse_bandwidth(o.bandwidth);
  c.selection = *selection;
  c.workers = o.workers;
  return c;
}

DissimilarityMatrix obtain_matrix(const Dataset& normalized,
                                  const CommonOptions& o) {
  const Hash256 hash = dataset_hash(normalized);
  if (!o.matrix_file.empty()) {
    auto m = load_matrix_cache(o.matrix_file, hash);
    if (!m) {
      throw DataError("matrix cache " + o.matrix_file +
                      " was built from a different dataset");
    }
    return std::move(*m);
  }
  std::optional<std::filesystem::path> cache;
  if (!o.cache_dir.empty()) cache = o.cache_dir;
  return load_or_build(normalized, o.workers, cache);
}

int run_ingest(const CommonOptions& o, const std::string& dir,
               const std::string& range, const std::string& scenario,
               const std::string& cls, int every_m) {
  Dataset dataset;
  LoadStats stats;
  if (!dir.empty()) {
    const auto [lo, hi] = parse_range(range);
    dataset = load_recordings(scenario_bundles(dir, lo, hi, scenario),
                              parse_class(cls), &stats);
    for (const std::string& d : stats.diagnostics) {
      std::cerr << "trajclust: warning: " << d << '\n';
    }
    std::cerr << "trajclust: " << scenario << ": " << stats.tracks_total
              << " tracks in meta, " << stats.tracks_matched << " of class "
              << cls << ", " << stats.tracks_loaded << " loaded, "
              << stats.tracks_skipped << " skipped\n";
  } else {
    std::vector<std::string> warnings;
    dataset = load_generic(o.data, &warnings);
    for (const std::string& w : warnings) {
      std::cerr << "trajclust: warning: " << w << '\n';
    }
  }
  if (every_m > 1) {
    std::vector<std::string> diags;
    dataset = downsample(dataset, every_m, &diags);
    for (const std::string& d : diags) {
      std::cerr << "trajclust: warning: " << d << '\n';
    }
  }
  save_generic_jsonl(dataset, o.out);
  json cfg;
  cfg["command"] = "ingest";
  cfg["class"] = cls;
  cfg["downsample"] = every_m;
  write_manifest(o.out + ".manifest.json", {o.out}, cfg.dump());
  std::cout << o.out << ": " << dataset.size() << " trajectories\n";
  return 0;
}

int run_matrix(const CommonOptions& o) {
  const Dataset raw = load_generic(o.data);
  const auto [normalized, norm] = normalize(raw);
  const Hash256 hash = dataset_hash(normalized);
  const DissimilarityMatrix m = build_matrix(normalized, o.workers);
  save_matrix_cache(o.out, m, hash);
  json cfg;
  cfg["command"] = "matrix";
  cfg["dataset_hash"] = to_hex(hash);
  cfg["n"] = m.n();
  write_manifest(o.out + ".manifest.json", {o.out}, cfg.dump());
  std::cout << o.out << ": " << m.n() << "x" << m.n() << " matrix\n";
  return 0;
}

SweepResult sweep_one(const Dataset& normalized, const DissimilarityMatrix& m,
                      const SweepConfig& config) {
  if (config.k_min == config.k_max) {
    RunRecord rec = run_once(normalized, m, config.method, config.k_min,
                             config.min_trace, config.bandwidth);
    if (!rec.report) {
      throw ComputeError("k=" + std::to_string(config.k_min) +
                         " produced fewer than 2 clusters (unscoreable)");
    }
    SweepResult result;
    result.per_k.push_back(std::move(rec));
    result.best_index = 0;
    return result;
  }
  return sweep(normalized, m, config);
}

void print_best(const std::string& prefix, const SweepResult& result) {
  const RunRecord& best = result.best();
  std::cout << prefix << "best k: " << best.k_nominal << " ("
            << best.k_effective << " clusters)";
  if (best.report) {
    std::cout << "  spread " << best.report->spread_on_cluster << "  db "
              << best.report->db_modified << "  silhouette "
              << best.report->silhouette;
  }
  std::cout << '\n';
}

int run_cluster_or_sweep(const CommonOptions& o,
                         const std::vector<std::string>& methods, int k_min,
                         int k_max) {
  const Dataset raw = load_generic(o.data);
  const auto [normalized, norm] = normalize(raw);
  const DissimilarityMatrix m = obtain_matrix(normalized, o);
  const Hash256 hash = dataset_hash(normalized);

  if (methods.size() == 1) {
    CommonOptions one = o;
    one.method = methods[0];
    const SweepConfig config = build_config(one, k_min, k_max);
    const SweepResult result = sweep_one(normalized, m, config);
    RunContext ctx{config, hash, norm};
    const auto manifest = save_result(result, normalized, ctx, o.out);
    print_best("", result);
    std::cout << "wrote " << manifest.string() << '\n';
    return 0;
  }

  // Several methods against the one shared matrix: per-method artifact
  // directories plus a side-by-side summary at each method's best k.
  std::vector<std::pair<Method, SweepResult>> runs;
  std::vector<std::filesystem::path> files;
  for (const std::string& name : methods) {
    CommonOptions one = o;
    one.method = name;
    const SweepConfig config = build_config(one, k_min, k_max);
    SweepResult result = sweep_one(normalized, m, config);
    RunContext ctx{config, hash, norm};
    files.push_back(save_result(result, normalized, ctx,
                                std::filesystem::path(o.out) / name));
    print_best(name + ": ", result);
    runs.emplace_back(config.method, std::move(result));
  }
  const std::filesystem::path summary =
      std::filesystem::path(o.out) / "summary.csv";
  save_method_summary(runs, static_cast<Index>(normalized.size()), summary);
  files.push_back(summary);
  json cfg;
  cfg["command"] = "sweep";
  cfg["methods"] = methods;
  cfg["k_min"] = k_min;
  cfg["k_max"] = k_max;
  cfg["dataset_hash"] = to_hex(hash);
  write_manifest(std::filesystem::path(o.out) / "manifest.json", files,
                 cfg.dump());
  std::cout << "wrote " << summary.string() << '\n';
  return 0;
}

int run_synth(const std::vector<std::string>& template_args, double noise,
              int outliers, int points, double scale, std::uint64_t seed,
              const std::string& out) {
  SyntheticSpec spec;
  for (const std::string& t : template_args) {
    spec.templates.push_back(parse_template(t));
  }
  spec.noise_sigma = noise;
  spec.outlier_count = outliers;
  spec.points = points;
  spec.scale = scale;
  spec.seed = seed;
  const auto [dataset, labels] = generate_synthetic(spec);
  save_generic_jsonl(dataset, out);

  const std::string labels_path =
      (std::filesystem::path(out).parent_path() /
       (std::filesystem::path(out).stem().string() + "_labels.csv"))
          .string();
  std::ofstream lf(labels_path, std::ios::trunc);
  if (!lf) throw DataError("cannot write " + labels_path);
  lf << "trajectory_id,template\n";
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    lf << dataset[i].id << ',';
    if (labels[i] == kOutlierLabel) {
      lf << "OUTLIER\n";
    } else {
      lf << labels[i] << '\n';
    }
  }
  json cfg;
  cfg["command"] = "synth";
  cfg["noise"] = noise;
  cfg["outliers"] = outliers;
  cfg["points"] = points;
  cfg["scale"] = scale;
  cfg["seed"] = seed;
  write_manifest(out + ".manifest.json", {out, labels_path}, cfg.dump());
  std::cout << out << ": " << dataset.size() << " trajectories\n";
  return 0;
}

int run_report(const CommonOptions& o, const std::string& run_dir,
               bool raw_frame, bool no_overview, bool no_per_cluster) {
  const Dataset dataset = load_generic(o.data);
  const auto [normalized, norm] = normalize(dataset);
  const Partition partition =
      load_partition_json(std::filesystem::path(run_dir) / "partition.json");
  if (partition.labels.size() != normalized.size()) {
    throw DataError("partition covers " +
                    std::to_string(partition.labels.size()) +
                    " trajectories but the dataset has " +
                    std::to_string(normalized.size()));
  }
  ReportSpec spec;
  spec.out_dir = o.out.empty()
                     ? std::filesystem::path(run_dir) / "report"
                     : std::filesystem::path(o.out);
  spec.denormalize = !raw_frame;
  spec.overview = !no_overview;
  spec.per_cluster_svg = !no_per_cluster;
  const auto files = render_report(partition, normalized, norm, spec);
  json cfg;
  cfg["command"] = "report";
  cfg["run"] = run_dir;
  write_manifest(spec.out_dir / "manifest.json", files, cfg.dump());
  std::cout << spec.out_dir.string() << ": " << files.size() << " files\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DTW trajectory clustering with endpoint refinement"};
  app.require_subcommand(1);

  CommonOptions o;
  std::string dir, range = "0:0", scenario = "scenario", cls = "car";
  int every_m = 1;
  std::vector<std::string> template_args;
  double noise = 0.0, scale = 1.0;
  int outliers = 0, points = 40;
  std::uint64_t seed = 0;
  std::string run_dir;
  bool raw_frame = false, no_overview = false, no_per_cluster = false;

  auto* ingest = app.add_subcommand(
      "ingest", "Convert a recordings directory or generic file to JSONL");
  ingest->add_option("--dir", dir, "recordings directory (inD/rounD layout)");
  ingest->add_option("--range", range, "recording id range LO:HI");
  ingest->add_option("--scenario", scenario, "scenario id for output names");
  ingest->add_option("--class", cls, "car|pedestrian|bicycle|other");
  ingest->add_option("--data", o.data, "generic CSV/JSONL input instead of --dir");
  ingest->add_option("--downsample", every_m, "keep every m-th frame")
      ->check(CLI::PositiveNumber);
  ingest->add_option("--out", o.out, "output JSONL path")->required();

  auto* matrix = app.add_subcommand("matrix", "Build and store the DTW matrix");
  matrix->add_option("--data", o.data, "generic CSV/JSONL input")->required();
  matrix->add_option("--workers", o.workers, "worker threads")
      ->check(CLI::PositiveNumber);
  matrix->add_option("--out", o.out, "matrix cache file")->required();

  auto* cluster = app.add_subcommand("cluster", "Single method at a fixed k");
  cluster->add_option("--data", o.data, "generic CSV/JSONL input")->required();
  cluster->add_option("--method", o.method, "agglo|a1ms|a2ms|pam|dissim");
  cluster->add_option("--k", o.k, "cluster count")->check(CLI::PositiveNumber);
  cluster->add_option("--min-trace", o.min_trace, "merge trace threshold");
  cluster->add_option("--bandwidth", o.bandwidth, "mean-shift bandwidth or 'auto'");
  cluster->add_option("--workers", o.workers, "worker threads")
      ->check(CLI::PositiveNumber);
  cluster->add_option("--cache-dir", o.cache_dir, "matrix cache directory");
  cluster->add_option("--matrix", o.matrix_file, "explicit matrix cache file");
  cluster->add_option("--out", o.out, "output directory")->required();

  std::vector<std::string> sweep_methods;
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate a cluster-count range");
  sweep_cmd->add_option("--data", o.data, "generic CSV/JSONL input")->required();
  sweep_cmd->add_option("--method", sweep_methods,
                        "agglo|a1ms|a2ms|pam|dissim (repeatable)");
  sweep_cmd->add_option("--k-min", o.k_min, "smallest cluster count")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--k-max", o.k_max, "largest cluster count")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--min-trace", o.min_trace, "merge trace threshold");
  sweep_cmd->add_option("--bandwidth", o.bandwidth, "mean-shift bandwidth or 'auto'");
  sweep_cmd->add_option("--selection", o.selection, "spread|db|silhouette");
  sweep_cmd->add_option("--workers", o.workers, "worker threads")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--cache-dir", o.cache_dir, "matrix cache directory");
  sweep_cmd->add_option("--matrix", o.matrix_file, "explicit matrix cache file");
  sweep_cmd->add_option("--out", o.out, "output directory")->required();

  auto* synth = app.add_subcommand("synth", "Generate a synthetic scenario");
  synth
      ->add_option("--template", template_args,
                   "shape:count[:trunc_lo[:trunc_hi]] (repeatable)")
      ->required();
  synth->add_option("--noise", noise, "positional noise sigma");
  synth->add_option("--outliers", outliers, "random-walk outlier count");
  synth->add_option("--points", points, "samples per trajectory");
  synth->add_option("--scale", scale, "scene extent");
  synth->add_option("--seed", seed, "generator seed");
  synth->add_option("--out", o.out, "output JSONL path")->required();

  auto* report = app.add_subcommand("report", "Render SVG/HTML cluster plots");
  report->add_option("--data", o.data, "the dataset the run was made from")
      ->required();
  report->add_option("--run", run_dir, "directory written by cluster/sweep")
      ->required();
  report->add_option("--out", o.out, "report directory (default <run>/report)");
  report->add_flag("--raw", raw_frame, "plot normalized coordinates");
  report->add_flag("--no-overview", no_overview, "skip the overview plot");
  report->add_flag("--no-per-cluster", no_per_cluster, "skip per-cluster SVGs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (ingest->parsed()) {
      if (dir.empty() == o.data.empty()) {
        std::cerr << "trajclust: error: usage: ingest needs exactly one of "
                     "--dir or --data\n";
        return 1;
      }
      return run_ingest(o, dir, range, scenario, cls, every_m);
    }
    if (matrix->parsed()) return run_matrix(o);
    if (cluster->parsed()) return run_cluster_or_sweep(o, {o.method}, o.k, o.k);
    if (sweep_cmd->parsed()) {
      if (sweep_methods.empty()) sweep_methods.push_back(o.method);
      return run_cluster_or_sweep(o, sweep_methods, o.k_min, o.k_max);
    }
    if (synth->parsed()) {
      return run_synth(template_args, noise, outliers, points, scale, seed,
                       o.out);
    }
    if (report->parsed()) {
      return run_report(o, run_dir, raw_frame, no_overview, no_per_cluster);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "trajclust: error: usage: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "trajclust: error: data: " << e.what() << '\n';
    return 2;
  } catch (const ComputeError& e) {
    std::cerr << "trajclust: error: compute: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "trajclust: error: internal: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
