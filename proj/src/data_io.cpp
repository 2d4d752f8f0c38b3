#include "trajclust/data_io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace trajclust {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line) {
  // RFC 4180 field splitting; the published datasets never quote fields,
  // but the generic reader accepts quoted ones.
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  out.push_back(std::move(field));
  return out;
}

std::map<std::string, std::size_t> header_index(const std::string& line) {
  std::map<std::string, std::size_t> idx;
  const std::vector<std::string> cols = split_csv_line(line);
  for (std::size_t i = 0; i < cols.size(); ++i) idx[cols[i]] = i;
  return idx;
}

std::size_t need_column(const std::map<std::string, std::size_t>& idx,
                        const std::string& name,
                        const std::filesystem::path& file) {
  const auto it = idx.find(name);
  if (it == idx.end()) {
    throw DataError("missing column '" + name + "' in " + file.string());
  }
  return it->second;
}

Scalar parse_double(const std::string& s, const std::filesystem::path& file,
                    std::size_t line_no) {
  try {
    std::size_t used = 0;
    const Scalar v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(file.string() + ":" + std::to_string(line_no) +
                    ": not a number: '" + s + "'");
  }
}

std::int64_t parse_int(const std::string& s, const std::filesystem::path& file,
                       std::size_t line_no) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(file.string() + ":" + std::to_string(line_no) +
                    ": not an integer: '" + s + "'");
  }
}

// Class labels in the published datasets. Vehicle subtypes map to
// UserClass::other so they can be filtered without being "unknown".
std::optional<UserClass> dataset_class(const std::string& label) {
  if (label == "car") return UserClass::car;
  if (label == "pedestrian") return UserClass::pedestrian;
  if (label == "bicycle") return UserClass::bicycle;
  if (label == "truck_bus" || label == "truck" || label == "bus" ||
      label == "van" || label == "trailer" || label == "motorcycle") {
    return UserClass::other;
  }
  return std::nullopt;
}

struct RawTrack {
  std::vector<TrajPoint> points;
};

}  // namespace

std::vector<RecordingBundle> scenario_bundles(const std::filesystem::path& root,
                                              int first, int last,
                                              const std::string& scenario_id) {
  if (first > last) throw DataError("scenario_bundles: empty recording range");
  std::vector<RecordingBundle> out;
  for (int id = first; id <= last; ++id) {
    char prefix[8];
    std::snprintf(prefix, sizeof(prefix), "%02d_", id);
    RecordingBundle b;
    b.tracks_path = root / (std::string(prefix) + "tracks.csv");
    b.tracks_meta_path = root / (std::string(prefix) + "tracksMeta.csv");
    b.recording_meta_path = root / (std::string(prefix) + "recordingMeta.csv");
    b.scenario_id = scenario_id;
    b.recording_id = id;
    out.push_back(std::move(b));
  }
  return out;
}

Dataset load_recordings(const std::vector<RecordingBundle>& bundles,
                        UserClass user_class, LoadStats* stats) {
  LoadStats local;
  LoadStats& st = stats ? *stats : local;
  Dataset dataset;

  for (const RecordingBundle& bundle : bundles) {
    std::ifstream meta(bundle.tracks_meta_path);
    if (!meta) {
      throw DataError("cannot open " + bundle.tracks_meta_path.string());
    }
    std::string line;
    if (!std::getline(meta, line)) {
      throw DataError("empty meta file " + bundle.tracks_meta_path.string());
    }
    const auto meta_idx = header_index(line);
    const std::size_t col_track =
        need_column(meta_idx, "trackId", bundle.tracks_meta_path);
    const std::size_t col_class =
        need_column(meta_idx, "class", bundle.tracks_meta_path);

    std::map<std::int64_t, bool> wanted;  // trackId -> requested class?
    std::size_t line_no = 1;
    while (std::getline(meta, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto fields = split_csv_line(line);
      if (fields.size() <= std::max(col_track, col_class)) {
        throw DataError(bundle.tracks_meta_path.string() + ":" +
                        std::to_string(line_no) + ": short row");
      }
      ++st.tracks_total;
      const std::int64_t track_id =
          parse_int(fields[col_track], bundle.tracks_meta_path, line_no);
      const auto cls = dataset_class(fields[col_class]);
      if (!cls) {
        st.diagnostics.push_back(bundle.tracks_meta_path.string() +
                                 ": track " + std::to_string(track_id) +
                                 ": unknown class '" + fields[col_class] + "'");
        ++st.tracks_skipped;
        continue;
      }
      if (*cls == user_class) {
        wanted[track_id] = true;
        ++st.tracks_matched;
      }
    }

    std::ifstream tracks(bundle.tracks_path);
    if (!tracks) throw DataError("cannot open " + bundle.tracks_path.string());
    if (!std::getline(tracks, line)) {
      throw DataError("empty tracks file " + bundle.tracks_path.string());
    }
    const auto idx = header_index(line);
    const std::size_t col_tid = need_column(idx, "trackId", bundle.tracks_path);
    const std::size_t col_frame = need_column(idx, "frame", bundle.tracks_path);
    const std::size_t col_x = need_column(idx, "xCenter", bundle.tracks_path);
    const std::size_t col_y = need_column(idx, "yCenter", bundle.tracks_path);

    std::map<std::int64_t, RawTrack> raw;
    line_no = 1;
    while (std::getline(tracks, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto fields = split_csv_line(line);
      if (fields.size() <= std::max({col_tid, col_frame, col_x, col_y})) {
        throw DataError(bundle.tracks_path.string() + ":" +
                        std::to_string(line_no) + ": short row");
      }
      const std::int64_t tid =
          parse_int(fields[col_tid], bundle.tracks_path, line_no);
      if (!wanted.count(tid)) continue;
      raw[tid].points.push_back(
          {parse_double(fields[col_x], bundle.tracks_path, line_no),
           parse_double(fields[col_y], bundle.tracks_path, line_no),
           parse_int(fields[col_frame], bundle.tracks_path, line_no)});
    }

    for (auto& [tid, track] : raw) {
      std::stable_sort(track.points.begin(), track.points.end(),
                       [](const TrajPoint& a, const TrajPoint& b) {
                         return a.frame < b.frame;
                       });
      char id[64];
      std::snprintf(id, sizeof(id), "%s-%02d-%lld",
                    bundle.scenario_id.c_str(), bundle.recording_id,
                    static_cast<long long>(tid));
      try {
        dataset.push_back(
            make_trajectory(id, user_class, track.points));
        ++st.tracks_loaded;
      } catch (const DataError& e) {
        st.diagnostics.push_back(e.what());
        ++st.tracks_skipped;
      }
    }
  }
  return dataset;
}

Dataset load_generic(const std::filesystem::path& path,
                     std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());

  const std::string ext = path.extension().string();
  Dataset dataset;

  if (ext == ".jsonl" || ext == ".ndjson") {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      json obj;
      try {
        obj = json::parse(line);
        std::vector<TrajPoint> pts;
        for (const auto& p : obj.at("points")) {
          pts.push_back({p.at(1).get<Scalar>(), p.at(2).get<Scalar>(),
                         p.at(0).get<std::int64_t>()});
        }
        UserClass cls = UserClass::other;
        if (obj.contains("class")) {
          const std::string label = obj["class"].get<std::string>();
          if (label == "car") cls = UserClass::car;
          else if (label == "pedestrian") cls = UserClass::pedestrian;
          else if (label == "bicycle") cls = UserClass::bicycle;
        }
        std::stable_sort(pts.begin(), pts.end(),
                         [](const TrajPoint& a, const TrajPoint& b) {
                           return a.frame < b.frame;
                         });
        dataset.push_back(
            make_trajectory(obj.at("id").get<std::string>(), cls, pts));
      } catch (const json::exception& e) {
        throw DataError(path.string() + ":" + std::to_string(line_no) + ": " +
                        e.what());
      }
    }
  } else {
    std::string line;
    if (!std::getline(in, line)) {
      if (warnings) warnings->push_back(path.string() + ": empty file");
      return dataset;
    }
    const auto idx = header_index(line);
    const std::size_t col_id = need_column(idx, "id", path);
    const std::size_t col_frame = need_column(idx, "frame", path);
    const std::size_t col_x = need_column(idx, "x", path);
    const std::size_t col_y = need_column(idx, "y", path);
    std::map<std::string, std::vector<TrajPoint>> groups;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto fields = split_csv_line(line);
      if (fields.size() <= std::max({col_id, col_frame, col_x, col_y})) {
        throw DataError(path.string() + ":" + std::to_string(line_no) +
                        ": short row");
      }
      groups[fields[col_id]].push_back({parse_double(fields[col_x], path, line_no),
                                        parse_double(fields[col_y], path, line_no),
                                        parse_int(fields[col_frame], path, line_no)});
    }
    for (auto& [id, pts] : groups) {
      std::stable_sort(pts.begin(), pts.end(),
                       [](const TrajPoint& a, const TrajPoint& b) {
                         return a.frame < b.frame;
                       });
      dataset.push_back(make_trajectory(id, UserClass::other, pts));
    }
    if (dataset.empty() && warnings) {
      warnings->push_back(path.string() + ": no data rows");
    }
    return dataset;  // std::map iteration is already id-ordered
  }

  std::sort(dataset.begin(), dataset.end(),
            [](const Trajectory& a, const Trajectory& b) { return a.id < b.id; });
  if (dataset.empty() && warnings) {
    warnings->push_back(path.string() + ": empty file");
  }
  return dataset;
}

void save_generic_csv(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << "id,frame,x,y\n";
  char buf[96];
  for (const Trajectory& t : dataset) {
    const std::string id = csv_field(t.id);
    for (Index i = 0; i < t.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g",
                    static_cast<long long>(t.frames[static_cast<std::size_t>(i)]),
                    t.xy(i, 0), t.xy(i, 1));
      out << id << ',' << buf << '\n';
    }
  }
  if (!out) throw DataError("write failed: " + path.string());
}

void save_generic_jsonl(const Dataset& dataset,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  for (const Trajectory& t : dataset) {
    json obj;
    obj["id"] = t.id;
    obj["class"] = to_string(t.user_class);
    json points = json::array();
    for (Index i = 0; i < t.size(); ++i) {
      points.push_back({t.frames[static_cast<std::size_t>(i)], t.xy(i, 0), t.xy(i, 1)});
    }
    obj["points"] = std::move(points);
    out << obj.dump() << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

Dataset downsample(const Dataset& dataset, int every_m,
                   std::vector<std::string>* diagnostics) {
  if (every_m < 1) throw DataError("downsample: stride must be >= 1");
  if (every_m == 1) return dataset;
  Dataset out;
  for (const Trajectory& t : dataset) {
    std::vector<TrajPoint> pts;
    for (Index i = 0; i < t.size(); i += every_m) pts.push_back(t.point(i));
    if (pts.size() < 2) {
      if (diagnostics) {
        diagnostics->push_back("downsample: track '" + t.id +
                               "' left with fewer than 2 samples, dropped");
      }
      continue;
    }
    out.push_back(make_trajectory(t.id, t.user_class, pts));
  }
  return out;
}

}  // namespace trajclust
