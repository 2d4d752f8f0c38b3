#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

// Path injected by the build; the tests drive the real binary.
#ifndef TRAJCLUST_CLI
#error "TRAJCLUST_CLI must point at the built binary"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(TRAJCLUST_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe)) {
    r.output.append(buf, got);
  }
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t data_rows(const std::string& csv) {
  std::size_t lines = 0;
  for (const char c : csv) {
    if (c == '\n') ++lines;
  }
  return lines > 0 ? lines - 1 : 0;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& s) const { return (path / s).string(); }
};

}  // namespace

TEST_CASE("unknown flags exit with the usage code") {
  const RunResult r = run("sweep --no-such-flag");
  CHECK(r.exit_code == 1);
  const RunResult r2 = run("frobnicate");
  CHECK(r2.exit_code == 1);
}

TEST_CASE("--help succeeds") {
  const RunResult r = run("--help");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("sweep") != std::string::npos);
}

TEST_CASE("missing data file is a data error (exit 2)") {
  TempDir tmp("trajclust-cli-missing");
  const RunResult r =
      run("sweep --data /nonexistent.jsonl --out " + (tmp / "run"));
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("trajclust: error: data:") != std::string::npos);
}

TEST_CASE("sweep over eleven k values writes eleven metric rows") {
  TempDir tmp("trajclust-cli-sweep");
  RunResult r = run("synth --template straight:12 --template left:12 "
                    "--template right:12 --noise 0.02 --seed 5 --out " +
                    (tmp / "s.jsonl"));
  REQUIRE(r.exit_code == 0);

  r = run("sweep --data " + (tmp / "s.jsonl") +
          " --method a2ms --k-min 5 --k-max 15 --min-trace 0.6 --out " +
          (tmp / "run"));
  REQUIRE(r.exit_code == 0);
  const std::string metrics = read_file(tmp.path / "run" / "metrics.csv");
  CHECK(data_rows(metrics) == 11);
  CHECK(metrics.rfind("Method,Time,DB,", 0) == 0);

  // Every writing run leaves a manifest.
  CHECK(fs::exists(tmp.path / "run" / "manifest.json"));
  CHECK(fs::exists(tmp.path / "s.jsonl.manifest.json"));
}

TEST_CASE("sweep compares several methods against one matrix") {
  TempDir tmp("trajclust-cli-multi");
  RunResult r = run("synth --template straight:10 --template crossing:10 "
                    "--noise 0.02 --seed 3 --out " +
                    (tmp / "s.jsonl"));
  REQUIRE(r.exit_code == 0);
  r = run("sweep --data " + (tmp / "s.jsonl") +
          " --method a2ms --method agglo --k-min 2 --k-max 4 --out " +
          (tmp / "multi"));
  REQUIRE(r.exit_code == 0);
  const std::string summary = read_file(tmp.path / "multi" / "summary.csv");
  CHECK(data_rows(summary) == 2);
  CHECK(summary.find("a2ms,") != std::string::npos);
  CHECK(summary.find("agglo,") != std::string::npos);
  CHECK(fs::exists(tmp.path / "multi" / "a2ms" / "metrics.csv"));
  CHECK(fs::exists(tmp.path / "multi" / "agglo" / "partition.json"));
  CHECK(fs::exists(tmp.path / "multi" / "manifest.json"));
}

TEST_CASE("cluster then report yields the cluster SVG set") {
  TempDir tmp("trajclust-cli-report");
  RunResult r = run("synth --template straight:8 --template crossing:8 "
                    "--template right:8 --noise 0.01 --seed 11 --out " +
                    (tmp / "s.jsonl"));
  REQUIRE(r.exit_code == 0);

  r = run("cluster --data " + (tmp / "s.jsonl") +
          " --method agglo --k 3 --out " + (tmp / "run"));
  REQUIRE(r.exit_code == 0);

  r = run("report --data " + (tmp / "s.jsonl") + " --run " + (tmp / "run"));
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(tmp.path / "run" / "report" / "cluster_000.svg"));
  CHECK(fs::exists(tmp.path / "run" / "report" / "cluster_001.svg"));
  CHECK(fs::exists(tmp.path / "run" / "report" / "cluster_002.svg"));
  CHECK_FALSE(fs::exists(tmp.path / "run" / "report" / "cluster_003.svg"));
  CHECK(fs::exists(tmp.path / "run" / "report" / "overview.svg"));
  CHECK(fs::exists(tmp.path / "run" / "report" / "index.html"));
  CHECK(fs::exists(tmp.path / "run" / "report" / "manifest.json"));
}

TEST_CASE("unscoreable clustering exits with the compute code") {
  TempDir tmp("trajclust-cli-compute");
  RunResult r = run("synth --template straight:5 --noise 0.05 --seed 2 --out " +
                    (tmp / "s.jsonl"));
  REQUIRE(r.exit_code == 0);
  // k == n: every cluster is a singleton and gets discarded.
  r = run("cluster --data " + (tmp / "s.jsonl") + " --method agglo --k 5 --out " +
          (tmp / "run"));
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("trajclust: error: compute:") != std::string::npos);
}

TEST_CASE("re-running the same config reproduces the artifacts") {
  TempDir tmp("trajclust-cli-repro");
  RunResult r = run("synth --template straight:10 --template left:10 "
                    "--noise 0.02 --outliers 2 --seed 21 --out " +
                    (tmp / "s.jsonl"));
  REQUIRE(r.exit_code == 0);

  for (const char* out : {"run1", "run2"}) {
    r = run("sweep --data " + (tmp / "s.jsonl") +
            " --method a2ms --k-min 2 --k-max 6 --workers 2 --out " +
            (tmp / out));
    REQUIRE(r.exit_code == 0);
  }
  CHECK(read_file(tmp.path / "run1" / "labels.csv") ==
        read_file(tmp.path / "run2" / "labels.csv"));
  CHECK(read_file(tmp.path / "run1" / "partition.json") ==
        read_file(tmp.path / "run2" / "partition.json"));

  // metrics.csv carries wall-clock times; compare it with the Time column
  // blanked out.
  auto strip_time = [](std::string csv) {
    std::string out;
    std::size_t line_start = 0;
    while (line_start < csv.size()) {
      std::size_t line_end = csv.find('\n', line_start);
      if (line_end == std::string::npos) line_end = csv.size();
      std::string line = csv.substr(line_start, line_end - line_start);
      const auto c1 = line.find(',');
      const auto c2 = line.find(',', c1 + 1);
      if (c1 != std::string::npos && c2 != std::string::npos) {
        line = line.substr(0, c1 + 1) + line.substr(c2);
      }
      out += line + "\n";
      line_start = line_end + 1;
    }
    return out;
  };
  CHECK(strip_time(read_file(tmp.path / "run1" / "metrics.csv")) ==
        strip_time(read_file(tmp.path / "run2" / "metrics.csv")));
}

TEST_CASE("matrix subcommand produces a reusable cache") {
  TempDir tmp("trajclust-cli-matrix");
  RunResult r = run("synth --template straight:6 --template crossing:6 "
                    "--noise 0.02 --seed 8 --out " +
                    (tmp / "s.jsonl"));
  REQUIRE(r.exit_code == 0);
  r = run("matrix --data " + (tmp / "s.jsonl") + " --workers 2 --out " +
          (tmp / "m.dtwm"));
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(tmp.path / "m.dtwm"));

  r = run("cluster --data " + (tmp / "s.jsonl") + " --method pam --k 2 " +
          "--matrix " + (tmp / "m.dtwm") + " --out " + (tmp / "run"));
  CHECK(r.exit_code == 0);

  // A cache built from different data is rejected.
  r = run("synth --template straight:6 --template crossing:6 --noise 0.02 "
          "--seed 99 --out " +
          (tmp / "other.jsonl"));
  REQUIRE(r.exit_code == 0);
  r = run("cluster --data " + (tmp / "other.jsonl") + " --method pam --k 2 " +
          "--matrix " + (tmp / "m.dtwm") + " --out " + (tmp / "run2"));
  CHECK(r.exit_code == 2);
}

TEST_CASE("ingest converts generic CSV to JSONL") {
  TempDir tmp("trajclust-cli-ingest");
  {
    std::ofstream csv(tmp.path / "in.csv");
    csv << "id,frame,x,y\n";
    for (int i = 0; i < 5; ++i) {
      csv << "t1," << i << ',' << 0.5 * i << ",1\n";
      csv << "t2," << i << ',' << 0.5 * i << ",3\n";
    }
  }
  const RunResult r = run("ingest --data " + (tmp / "in.csv") + " --out " +
                          (tmp / "out.jsonl"));
  REQUIRE(r.exit_code == 0);
  const std::string jsonl = read_file(tmp.path / "out.jsonl");
  CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') == 2);  // one per trajectory
  CHECK(jsonl.find("\"t1\"") != std::string::npos);

  // Keeping every 2nd frame leaves 3-point tracks.
  const RunResult r2 = run("ingest --data " + (tmp / "in.csv") +
                           " --downsample 2 --out " + (tmp / "ds.jsonl"));
  REQUIRE(r2.exit_code == 0);
  const std::string ds = read_file(tmp.path / "ds.jsonl");
  CHECK(ds.find("[[0,") != std::string::npos);
  CHECK(ds.find("[4,") != std::string::npos);   // frames 0, 2, 4 survive
  CHECK(ds.find("[1,") == std::string::npos);
}

TEST_CASE("ingest reads a recordings directory") {
  TempDir tmp("trajclust-cli-ingest-rec");
  {
    std::ofstream meta(tmp.path / "00_tracksMeta.csv");
    meta << "recordingId,trackId,class\n0,1,pedestrian\n0,2,car\n";
    std::ofstream tracks(tmp.path / "00_tracks.csv");
    tracks << "recordingId,trackId,frame,xCenter,yCenter\n";
    for (int f = 0; f < 4; ++f) {
      tracks << "0,1," << f << ',' << 0.5 * f << ",2\n";
      tracks << "0,2," << f << ',' << 1.0 * f << ",9\n";
    }
    std::ofstream rec(tmp.path / "00_recordingMeta.csv");
    rec << "recordingId,frameRate\n0,25\n";
  }
  const RunResult r = run("ingest --dir " + tmp.path.string() +
                          " --range 0:0 --class car --scenario sce0 --out " +
                          (tmp / "cars.jsonl"));
  REQUIRE(r.exit_code == 0);
  const std::string jsonl = read_file(tmp.path / "cars.jsonl");
  CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') == 1);
  CHECK(jsonl.find("sce0-00-2") != std::string::npos);
}
