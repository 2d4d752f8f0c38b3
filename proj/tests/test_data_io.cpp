#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/testutil.hpp"
#include "trajclust/data_io.hpp"
#include "trajclust/matrix_cache.hpp"
#include "trajclust/pipeline.hpp"
#include "trajclust/results_io.hpp"
#include "trajclust/synthetic.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace trajclust;

namespace {

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name)
      : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

void write_file(const std::filesystem::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::trunc);
  out << body;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// A two-recording fixture in the published column layout.
void write_recording_fixture(const std::filesystem::path& dir) {
  write_file(dir / "00_tracksMeta.csv",
             "recordingId,trackId,initialFrame,finalFrame,numFrames,width,length,class\n"
             "0,1,0,99,100,0.5,0.5,pedestrian\n"
             "0,2,0,1,2,2.0,4.5,car\n"
             "0,3,10,10,1,0.5,0.5,pedestrian\n"  // single frame: skipped
             "0,4,0,3,4,1.0,2.0,hovercraft\n");  // unknown class: skipped
  std::string tracks =
      "recordingId,trackId,frame,trackLifetime,xCenter,yCenter,heading,"
      "xVelocity,yVelocity\n";
  for (int f = 0; f < 100; ++f) {
    tracks += "0,1," + std::to_string(f) + ",0," + std::to_string(0.1 * f) +
              ",2.5,0,1,0\n";
  }
  tracks += "0,2,0,0,10.0,20.0,0,1,0\n";
  tracks += "0,2,1,0,10.5,20.0,0,1,0\n";
  tracks += "0,3,10,0,1.0,1.0,0,1,0\n";
  tracks += "0,4,0,0,3.0,3.0,0,1,0\n0,4,1,0,3.5,3.0,0,1,0\n";
  write_file(dir / "00_tracks.csv", tracks);
  write_file(dir / "00_recordingMeta.csv", "recordingId,frameRate\n0,25\n");
}

}  // namespace

TEST_CASE("load_recordings maps the published schema") {
  TempDir tmp("trajclust-rec-fixture");
  write_recording_fixture(tmp.path);
  const auto bundles = scenario_bundles(tmp.path, 0, 0, "sc0");

  LoadStats stats;
  const Dataset peds = load_recordings(bundles, UserClass::pedestrian, &stats);
  REQUIRE(peds.size() == 1);
  CHECK(peds[0].size() == 100);
  CHECK(peds[0].user_class == UserClass::pedestrian);
  CHECK(peds[0].xy(99, 0) == doctest::Approx(9.9));
  CHECK(peds[0].frames[99] == 99);
  // Track 3 (single frame) is skipped with a diagnostic; track 4 has an
  // unknown class label.
  CHECK(stats.tracks_skipped == 2);
  REQUIRE(stats.diagnostics.size() == 2);
  CHECK(stats.diagnostics[0].find("hovercraft") != std::string::npos);
  CHECK(stats.diagnostics[1].find("at least 2 points") != std::string::npos);

  const Dataset cars = load_recordings(bundles, UserClass::car);
  REQUIRE(cars.size() == 1);
  CHECK(cars[0].size() == 2);
}

TEST_CASE("load_recordings handles CRLF endings and interleaved rows") {
  TempDir tmp("trajclust-rec-crlf");
  write_file(tmp.path / "00_tracksMeta.csv",
             "recordingId,trackId,class\r\n0,1,car\r\n0,2,car\r\n");
  // Rows interleave the two tracks and arrive frame-unsorted.
  write_file(tmp.path / "00_tracks.csv",
             "recordingId,trackId,frame,xCenter,yCenter\r\n"
             "0,2,1,20.5,9\r\n"
             "0,1,0,0.0,2\r\n"
             "0,2,0,20.0,9\r\n"
             "0,1,1,0.5,2\r\n");
  write_file(tmp.path / "00_recordingMeta.csv", "recordingId,frameRate\r\n0,25\r\n");
  const Dataset cars =
      load_recordings(scenario_bundles(tmp.path, 0, 0, "s"), UserClass::car);
  REQUIRE(cars.size() == 2);
  CHECK(cars[0].xy(0, 0) == 0.0);
  CHECK(cars[0].xy(1, 0) == 0.5);
  CHECK(cars[1].xy(0, 0) == 20.0);
  CHECK(cars[1].frames == std::vector<std::int64_t>{0, 1});
}

TEST_CASE("csv_field quotes only when needed") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("with,comma") == "\"with,comma\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("load_recordings is deterministic") {
  TempDir tmp("trajclust-rec-determ");
  write_recording_fixture(tmp.path);
  const auto bundles = scenario_bundles(tmp.path, 0, 0, "sc0");
  const Dataset a = load_recordings(bundles, UserClass::pedestrian);
  const Dataset b = load_recordings(bundles, UserClass::pedestrian);
  REQUIRE(a.size() == b.size());
  CHECK(dataset_hash(a) == dataset_hash(b));
  CHECK(a[0].id == b[0].id);
}

TEST_CASE("load_recordings reports missing columns") {
  TempDir tmp("trajclust-rec-badcol");
  write_file(tmp.path / "00_tracksMeta.csv", "recordingId,trackId\n0,1\n");
  write_file(tmp.path / "00_tracks.csv", "trackId,frame\n1,0\n");
  write_file(tmp.path / "00_recordingMeta.csv", "recordingId\n0\n");
  const auto bundles = scenario_bundles(tmp.path, 0, 0, "sc0");
  CHECK_THROWS_WITH_AS(load_recordings(bundles, UserClass::car),
                       doctest::Contains("class"), DataError);
}

TEST_CASE("load_generic reads the CSV layout") {
  TempDir tmp("trajclust-generic");
  const auto file = tmp.path / "two.csv";
  write_file(file, "id,frame,x,y\nt1,0,1.5,2.5\nt1,1,2.0,3.0\n");
  const Dataset ds = load_generic(file);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].id == "t1");
  CHECK(ds[0].size() == 2);
  CHECK(ds[0].xy(1, 1) == 3.0);
}

TEST_CASE("load_generic on an empty file warns and returns nothing") {
  TempDir tmp("trajclust-generic-empty");
  const auto file = tmp.path / "empty.csv";
  write_file(file, "");
  std::vector<std::string> warnings;
  const Dataset ds = load_generic(file, &warnings);
  CHECK(ds.empty());
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("empty") != std::string::npos);
}

TEST_CASE("load_generic reports malformed rows with their line number") {
  TempDir tmp("trajclust-generic-bad");
  const auto file = tmp.path / "bad.csv";
  write_file(file, "id,frame,x,y\nt1,0,1.0,2.0\nt1,one,oops,3.0\n");
  CHECK_THROWS_WITH_AS(load_generic(file), doctest::Contains(":3"), DataError);
}

TEST_CASE("generic formats round-trip exactly") {
  SyntheticSpec spec;
  spec.templates = {{ManeuverShape::left_turn, 4, 0, 0.2}};
  spec.noise_sigma = 0.05;
  spec.points = 9;
  spec.seed = 77;
  const auto [ds, labels] = generate_synthetic(spec);

  TempDir tmp("trajclust-roundtrip");
  for (const char* name : {"r.csv", "r.jsonl"}) {
    const auto file = tmp.path / name;
    if (file.extension() == ".csv") {
      save_generic_csv(ds, file);
    } else {
      save_generic_jsonl(ds, file);
    }
    const Dataset back = load_generic(file);
    REQUIRE(back.size() == ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
      CHECK(back[i].id == ds[i].id);
      CHECK(back[i].frames == ds[i].frames);
      CHECK((back[i].xy - ds[i].xy).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("downsample keeps every m-th frame and drops shrunken tracks") {
  const Dataset ds = {testutil::traj("a", {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}}),
                      testutil::traj("b", {{0, 0}, {1, 1}})};
  std::vector<std::string> diags;
  const Dataset out = downsample(ds, 4, &diags);
  REQUIRE(out.size() == 1);
  CHECK(out[0].size() == 2);
  CHECK(out[0].xy(1, 0) == 4.0);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].find("'b'") != std::string::npos);
}

TEST_CASE("generate_synthetic without noise repeats the template") {
  SyntheticSpec spec;
  spec.templates = {{ManeuverShape::straight, 3, 0, 0}};
  spec.points = 11;
  const auto [ds, labels] = generate_synthetic(spec);
  REQUIRE(ds.size() == 3);
  CHECK(labels == std::vector<int>{0, 0, 0});
  CHECK((ds[1].xy - ds[0].xy).cwiseAbs().maxCoeff() == 0.0);
  CHECK((ds[2].xy - ds[0].xy).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("generate_synthetic is deterministic under a fixed seed") {
  SyntheticSpec spec;
  spec.templates = {{ManeuverShape::right_turn, 6, 0.1, 0.4}};
  spec.noise_sigma = 0.03;
  spec.outlier_count = 3;
  spec.points = 15;
  spec.seed = 31337;
  const auto [a, la] = generate_synthetic(spec);
  const auto [b, lb] = generate_synthetic(spec);
  CHECK(la == lb);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == b[i].id);
    CHECK((a[i].xy - b[i].xy).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK(dataset_hash(a) == dataset_hash(b));
}

TEST_CASE("generate_synthetic counts templates and outliers") {
  SyntheticSpec spec;
  spec.templates = {{ManeuverShape::straight, 30, 0, 0},
                    {ManeuverShape::left_turn, 30, 0, 0},
                    {ManeuverShape::right_turn, 30, 0, 0},
                    {ManeuverShape::crossing, 30, 0, 0}};
  spec.outlier_count = 5;
  spec.noise_sigma = 0.02;
  spec.seed = 9;
  const auto [ds, labels] = generate_synthetic(spec);
  REQUIRE(ds.size() == 125);
  std::map<int, int> histogram;
  for (const int l : labels) ++histogram[l];
  CHECK(histogram[0] == 30);
  CHECK(histogram[1] == 30);
  CHECK(histogram[2] == 30);
  CHECK(histogram[3] == 30);
  CHECK(histogram[kOutlierLabel] == 5);
}

TEST_CASE("generate_synthetic noise magnitude matches sigma") {
  // |N(0, sigma)| has mean sigma*sqrt(2/pi); check the sample mean over
  // 10^4 displacements within three standard errors.
  const Scalar sigma = 0.05;
  SyntheticSpec spec;
  spec.templates = {{ManeuverShape::straight, 125, 0, 0}};
  spec.noise_sigma = sigma;
  spec.points = 40;
  spec.seed = 2024;
  const auto [ds, labels] = generate_synthetic(spec);
  const Points base = template_polyline(ManeuverShape::straight, 40, 1.0);

  std::vector<Scalar> deviations;
  for (const Trajectory& t : ds) {
    for (Index i = 0; i < t.size(); ++i) {
      deviations.push_back(std::abs(t.xy(i, 0) - base(i, 0)));
      deviations.push_back(std::abs(t.xy(i, 1) - base(i, 1)));
    }
  }
  REQUIRE(deviations.size() == 10000);
  Scalar mean = 0;
  for (const Scalar d : deviations) mean += d;
  mean /= static_cast<Scalar>(deviations.size());

  const Scalar expected = sigma * std::sqrt(2.0 / M_PI);
  const Scalar sd = sigma * std::sqrt(1.0 - 2.0 / M_PI);
  const Scalar tolerance = 3.0 * sd / std::sqrt(10000.0);
  CHECK(std::abs(mean - expected) <= tolerance);
}

TEST_CASE("generate_synthetic truncation drops the exact leading fraction") {
  SyntheticSpec spec;
  spec.templates = {{ManeuverShape::straight, 2, 0.3, 0.3}};
  spec.points = 40;
  const auto [ds, labels] = generate_synthetic(spec);
  const Points base = template_polyline(ManeuverShape::straight, 40, 1.0);
  REQUIRE(ds[0].size() == 28);
  CHECK((ds[0].xy - base.bottomRows(28)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("save_result writes the full artifact set") {
  SyntheticSpec spec;
  spec.templates = {{ManeuverShape::straight, 6, 0, 0},
                    {ManeuverShape::crossing, 6, 0, 0}};
  spec.noise_sigma = 0.01;
  spec.points = 10;
  spec.seed = 3;
  const auto [raw, labels] = generate_synthetic(spec);
  const auto [ds, norm] = normalize(raw);
  const DissimilarityMatrix m = build_matrix(ds);

  SweepConfig cfg;
  cfg.method = Method::agglo;
  cfg.k_min = cfg.k_max = 2;
  const SweepResult result = sweep(ds, m, cfg);

  TempDir tmp("trajclust-save-result");
  RunContext ctx{cfg, dataset_hash(ds), norm};
  const auto manifest_path = save_result(result, ds, ctx, tmp.path);
  CHECK(std::filesystem::exists(manifest_path));

  // One k swept: exactly one data row after the header.
  const std::string metrics = read_file(tmp.path / "metrics.csv");
  CHECK(std::count(metrics.begin(), metrics.end(), '\n') == 2);

  const std::string labels_csv = read_file(tmp.path / "labels.csv");
  CHECK(labels_csv.find("synth-0000,") != std::string::npos);

  // The manifest describes every emitted file with size and checksum.
  const std::string manifest = read_file(manifest_path);
  for (const char* name : {"labels.csv", "metrics.csv", "partition.json"}) {
    CHECK(manifest.find(name) != std::string::npos);
    const auto h = file_hash(tmp.path / name);
    CHECK(manifest.find(to_hex(h)) != std::string::npos);
  }
  CHECK(manifest.find("\"bytes\"") != std::string::npos);

  // Normalization params survive for the report stage.
  const NormalizationParams back = load_norm_params(manifest_path);
  CHECK(back.x_min == norm.x_min);
  CHECK(back.y_max == norm.y_max);
}

TEST_CASE("partition JSON round-trips exactly") {
  // Irrational spreads exercise the bitwise double round-trip.
  Mat d = Mat::Zero(6, 6);
  for (Index i = 0; i < 6; ++i) {
    for (Index j = i + 1; j < 6; ++j) {
      d(i, j) = d(j, i) = std::sqrt(2.0 + static_cast<Scalar>(i) / 3.0 +
                                    static_cast<Scalar>(j) / 7.0);
    }
  }
  const DissimilarityMatrix m = testutil::wrap_matrix(d);
  const Partition p = make_partition({{0, 2, 4}, {1, 3}}, 3, m, 6);

  TempDir tmp("trajclust-partition-json");
  const auto file = tmp.path / "p.json";
  save_partition_json(p, file);
  const Partition q = load_partition_json(file);
  CHECK(q.k_nominal == p.k_nominal);
  CHECK(q.k_effective == p.k_effective);
  CHECK(q.converged == p.converged);
  CHECK(q.labels == p.labels);
  REQUIRE(q.clusters.size() == p.clusters.size());
  for (std::size_t c = 0; c < p.clusters.size(); ++c) {
    CHECK(q.clusters[c].members == p.clusters[c].members);
    CHECK(q.clusters[c].medoid == p.clusters[c].medoid);
    CHECK(q.clusters[c].spread == p.clusters[c].spread);  // bitwise
  }
}
