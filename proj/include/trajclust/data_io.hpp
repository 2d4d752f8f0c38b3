#pragma once

#include "trajclust/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace trajclust {

/// One drone recording's file triple in the published inD/rounD layout
/// (NN_tracks.csv, NN_tracksMeta.csv, NN_recordingMeta.csv).
struct RecordingBundle {
  std::filesystem::path tracks_path;
  std::filesystem::path tracks_meta_path;
  std::filesystem::path recording_meta_path;
  std::string scenario_id;
  int recording_id = 0;
};

/// Bundles for an inclusive recording-id range under one directory
/// (e.g. files 07..17 forming one scenario).
std::vector<RecordingBundle> scenario_bundles(const std::filesystem::path& root,
                                              int first, int last,
                                              const std::string& scenario_id);

struct LoadStats {
  std::size_t tracks_total = 0;    // tracks seen in the meta files
  std::size_t tracks_matched = 0;  // tracks of the requested class
  std::size_t tracks_loaded = 0;
  std::size_t tracks_skipped = 0;  // matched but invalid (diagnostics below)
  std::vector<std::string> diagnostics;
};

/// Loads every track of the requested class from the bundles, ordered by
/// (recording id, track id). Malformed tracks (single frame, non-monotone
/// frames) are skipped with a per-track diagnostic; unknown class labels
/// are skipped likewise. Throws DataError for missing files or columns.
Dataset load_recordings(const std::vector<RecordingBundle>& bundles,
                        UserClass user_class, LoadStats* stats = nullptr);

/// Generic trajectory input: CSV with header id,frame,x,y or JSON lines
/// ({"id", "class", "points": [[frame, x, y], ...]}), chosen by file
/// extension (.jsonl/.ndjson vs anything else). Trajectories come back
/// ordered by id. Malformed rows raise DataError with the line number;
/// an empty file yields an empty dataset plus a warning.
Dataset load_generic(const std::filesystem::path& path,
                     std::vector<std::string>* warnings = nullptr);

void save_generic_csv(const Dataset& dataset, const std::filesystem::path& path);
void save_generic_jsonl(const Dataset& dataset, const std::filesystem::path& path);

/// Keeps every m-th sample (always including the first). Tracks left with
/// fewer than 2 samples are dropped with a diagnostic.
Dataset downsample(const Dataset& dataset, int every_m,
                   std::vector<std::string>* diagnostics = nullptr);

/// RFC 4180 field quoting (applied only when the field needs it).
std::string csv_field(const std::string& s);

}  // namespace trajclust
