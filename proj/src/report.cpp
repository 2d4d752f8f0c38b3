#include "trajclust/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace trajclust {

namespace {

constexpr const char* kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

struct Frame {
  Scalar x_min, x_max, y_min, y_max;
  Scalar width, height;

  // SVG y grows downward; flip so north stays up.
  Scalar px(Scalar x) const { return (x - x_min) / (x_max - x_min) * width; }
  Scalar py(Scalar y) const {
    return height - (y - y_min) / (y_max - y_min) * height;
  }
};

std::string num(Scalar v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

Frame fit_frame(const Dataset& dataset, const std::vector<Index>& members,
                Scalar width) {
  Frame f{std::numeric_limits<Scalar>::infinity(),
          -std::numeric_limits<Scalar>::infinity(),
          std::numeric_limits<Scalar>::infinity(),
          -std::numeric_limits<Scalar>::infinity(),
          width,
          0};
  for (const Index i : members) {
    const Points& xy = dataset[static_cast<std::size_t>(i)].xy;
    f.x_min = std::min(f.x_min, xy.col(0).minCoeff());
    f.x_max = std::max(f.x_max, xy.col(0).maxCoeff());
    f.y_min = std::min(f.y_min, xy.col(1).minCoeff());
    f.y_max = std::max(f.y_max, xy.col(1).maxCoeff());
  }
  const Scalar dx = f.x_max - f.x_min;
  const Scalar dy = f.y_max - f.y_min;
  const Scalar pad = 0.05 * std::max({dx, dy, Scalar(1e-9)});
  f.x_min -= pad;
  f.x_max += pad;
  f.y_min -= pad;
  f.y_max += pad;
  f.height = width * (f.y_max - f.y_min) / (f.x_max - f.x_min);
  return f;
}

void polyline(std::ostream& out, const Frame& f, const Points& xy,
              const char* color, Scalar stroke_width) {
  out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
      << num(stroke_width) << "\" points=\"";
  for (Index i = 0; i < xy.rows(); ++i) {
    if (i) out << ' ';
    out << num(f.px(xy(i, 0))) << ',' << num(f.py(xy(i, 1)));
  }
  out << "\"/>\n";
}

void cross_marker(std::ostream& out, const Frame& f, Scalar x, Scalar y,
                  const char* color, Scalar size) {
  const Scalar cx = f.px(x);
  const Scalar cy = f.py(y);
  out << "<path stroke=\"" << color
      << "\" stroke-width=\"1.6\" fill=\"none\" d=\"M" << num(cx - size) << ' '
      << num(cy) << " H" << num(cx + size) << " M" << num(cx) << ' '
      << num(cy - size) << " V" << num(cy + size) << "\"/>\n";
}

void draw_trajectory(std::ostream& out, const Frame& f, const Trajectory& t,
                     const char* color, Scalar stroke_width) {
  polyline(out, f, t.xy, color, stroke_width);
  cross_marker(out, f, t.xy(0, 0), t.xy(0, 1), "#ffffff", 4.0);
  cross_marker(out, f, t.xy(t.size() - 1, 0), t.xy(t.size() - 1, 1), "#000000",
               4.0);
}

std::string svg_open(const Frame& f) {
  std::ostringstream head;
  head << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(f.width)
       << "\" height=\"" << num(f.height) << "\" viewBox=\"0 0 "
       << num(f.width) << ' ' << num(f.height) << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"#dddddd\"/>\n";
  return head.str();
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << body;
  if (!out) throw DataError("write failed: " + path.string());
}

std::string html_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::vector<std::filesystem::path> render_report(
    const Partition& partition, const Dataset& dataset,
    const std::optional<NormalizationParams>& norm, const ReportSpec& spec) {
  std::error_code ec;
  std::filesystem::create_directories(spec.out_dir, ec);
  if (ec && !std::filesystem::is_directory(spec.out_dir)) {
    throw DataError("cannot create report directory " + spec.out_dir.string());
  }

  const Dataset plotted = (spec.denormalize && norm)
                              ? denormalize(dataset, *norm)
                              : dataset;
  std::vector<std::filesystem::path> files;

  std::vector<Index> all_members;
  for (const Cluster& c : partition.clusters) {
    all_members.insert(all_members.end(), c.members.begin(), c.members.end());
  }

  std::vector<std::string> cluster_svgs;
  if (spec.per_cluster_svg) {
    for (std::size_t c = 0; c < partition.clusters.size(); ++c) {
      const Cluster& cluster = partition.clusters[c];
      const Frame f = fit_frame(plotted, cluster.members, 480);
      std::ostringstream svg;
      svg << svg_open(f);
      const char* color = kPalette[c % kPaletteSize];
      for (const Index i : cluster.members) {
        if (i == cluster.medoid) continue;
        draw_trajectory(svg, f, plotted[static_cast<std::size_t>(i)], color, 0.8);
      }
      draw_trajectory(svg, f, plotted[static_cast<std::size_t>(cluster.medoid)],
                      color, 2.5);
      svg << "</svg>\n";
      cluster_svgs.push_back(svg.str());
      char name[32];
      std::snprintf(name, sizeof(name), "cluster_%03zu.svg", c);
      const std::filesystem::path path = spec.out_dir / name;
      write_file(path, cluster_svgs.back());
      files.push_back(path);
    }
  }

  std::string overview_svg;
  if (spec.overview && !all_members.empty()) {
    const Frame f = fit_frame(plotted, all_members, 720);
    std::ostringstream svg;
    svg << svg_open(f);
    for (std::size_t c = 0; c < partition.clusters.size(); ++c) {
      const char* color = kPalette[c % kPaletteSize];
      for (const Index i : partition.clusters[c].members) {
        polyline(svg, f, plotted[static_cast<std::size_t>(i)].xy, color, 0.8);
      }
    }
    svg << "</svg>\n";
    overview_svg = svg.str();
    const std::filesystem::path path = spec.out_dir / "overview.svg";
    write_file(path, overview_svg);
    files.push_back(path);
  }

  std::ostringstream html;
  html << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\">"
       << "<title>Cluster report</title>\n"
       << "<style>body{font-family:sans-serif;background:#fafafa}"
       << ".card{display:inline-block;margin:8px;padding:8px;"
       << "background:#fff;border:1px solid #ccc}</style></head><body>\n";
  Index rejected = 0;
  for (const int l : partition.labels) {
    if (l == kRejected) ++rejected;
  }
  html << "<h1>" << partition.clusters.size() << " clusters, " << rejected
       << " rejected trajectories</h1>\n";
  if (partition.clusters.empty()) {
    html << "<p>zero clusters</p>\n";
  }
  if (!overview_svg.empty()) {
    html << "<div class=\"card\"><h2>overview</h2>" << overview_svg
         << "</div>\n";
  }
  for (std::size_t c = 0; c < partition.clusters.size(); ++c) {
    const Cluster& cluster = partition.clusters[c];
    html << "<div class=\"card\"><h2>cluster " << c << "</h2><p>size "
         << cluster.members.size() << ", spread " << num(cluster.spread)
         << ", medoid " << cluster.medoid;
    if (cluster.medoid >= 0 &&
        cluster.medoid < static_cast<Index>(dataset.size())) {
      html << " ("
           << html_escape(dataset[static_cast<std::size_t>(cluster.medoid)].id)
           << ")";
    }
    html << "</p>";
    if (c < cluster_svgs.size()) html << cluster_svgs[c];
    html << "</div>\n";
  }
  html << "</body></html>\n";
  const std::filesystem::path index = spec.out_dir / "index.html";
  write_file(index, html.str());
  files.push_back(index);
  return files;
}

}  // namespace trajclust
