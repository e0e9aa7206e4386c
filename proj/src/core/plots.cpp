#include "core/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "core/csvio.hpp"
#include "core/errors.hpp"
#include "core/experiment.hpp"

namespace robggm {

namespace {

const char* kPalette[] = {"#1f6fb4", "#d1495b", "#2e8b57", "#b8860b",
                          "#6a51a3", "#444444"};
constexpr int kPaletteSize = 6;

std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double width, height;          // canvas
  double left, right, top, bottom;  // margins

  double x0() const { return left; }
  double x1() const { return width - right; }
  double y0() const { return height - bottom; }  // SVG y grows downward
  double y1() const { return top; }
};

void open_svg(std::ostringstream& out, const Frame& f, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width
      << "\" height=\"" << f.height << "\" viewBox=\"0 0 " << f.width << ' '
      << f.height << "\">\n";
  out << "<rect width=\"" << f.width << "\" height=\"" << f.height
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << svg_num(f.width / 2) << "\" y=\"18\" font-family=\"sans-serif\""
      << " font-size=\"14\" text-anchor=\"middle\">" << escape_xml(title) << "</text>\n";
}

void draw_axes(std::ostringstream& out, const Frame& f) {
  out << "<line x1=\"" << svg_num(f.x0()) << "\" y1=\"" << svg_num(f.y0())
      << "\" x2=\"" << svg_num(f.x1()) << "\" y2=\"" << svg_num(f.y0())
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << svg_num(f.x0()) << "\" y1=\"" << svg_num(f.y0())
      << "\" x2=\"" << svg_num(f.x0()) << "\" y2=\"" << svg_num(f.y1())
      << "\" stroke=\"black\"/>\n";
}

void y_ticks(std::ostringstream& out, const Frame& f, double lo, double hi, int count) {
  for (int t = 0; t <= count; ++t) {
    const double v = lo + (hi - lo) * t / count;
    const double y = f.y0() - (v - lo) / (hi - lo) * (f.y0() - f.y1());
    out << "<line x1=\"" << svg_num(f.x0() - 4) << "\" y1=\"" << svg_num(y)
        << "\" x2=\"" << svg_num(f.x0()) << "\" y2=\"" << svg_num(y)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << svg_num(f.x0() - 8) << "\" y=\"" << svg_num(y + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
        << tick_label(v) << "</text>\n";
  }
}

void write_box_svg(const std::vector<BoxStats>& stats, const std::string& path) {
  Frame f{720, 480, 70, 20, 40, 70, };
  double lo = stats.front().min, hi = stats.front().max;
  for (const auto& s : stats) {
    lo = std::min(lo, s.min);
    hi = std::max(hi, s.max);
  }
  if (hi <= lo) hi = lo + 1.0;
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;

  auto ypix = [&](double v) {
    return f.y0() - (v - lo) / (hi - lo) * (f.y0() - f.y1());
  };

  std::ostringstream out;
  open_svg(out, f, "sup-norm error by estimator");
  draw_axes(out, f);
  y_ticks(out, f, lo, hi, 5);

  const double slot = (f.x1() - f.x0()) / static_cast<double>(stats.size());
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const BoxStats& s = stats[i];
    const double cx = f.x0() + slot * (static_cast<double>(i) + 0.5);
    const double half = 0.3 * slot;
    const char* color = kPalette[i % kPaletteSize];

    // whiskers
    out << "<line x1=\"" << svg_num(cx) << "\" y1=\"" << svg_num(ypix(s.min))
        << "\" x2=\"" << svg_num(cx) << "\" y2=\"" << svg_num(ypix(s.q1))
        << "\" stroke=\"" << color << "\"/>\n";
    out << "<line x1=\"" << svg_num(cx) << "\" y1=\"" << svg_num(ypix(s.q3))
        << "\" x2=\"" << svg_num(cx) << "\" y2=\"" << svg_num(ypix(s.max))
        << "\" stroke=\"" << color << "\"/>\n";
    for (double v : {s.min, s.max}) {
      out << "<line x1=\"" << svg_num(cx - half / 2) << "\" y1=\"" << svg_num(ypix(v))
          << "\" x2=\"" << svg_num(cx + half / 2) << "\" y2=\"" << svg_num(ypix(v))
          << "\" stroke=\"" << color << "\"/>\n";
    }
    // interquartile box and median
    out << "<rect x=\"" << svg_num(cx - half) << "\" y=\"" << svg_num(ypix(s.q3))
        << "\" width=\"" << svg_num(2 * half) << "\" height=\""
        << svg_num(ypix(s.q1) - ypix(s.q3)) << "\" fill=\"" << color
        << "\" fill-opacity=\"0.25\" stroke=\"" << color << "\"/>\n";
    out << "<line x1=\"" << svg_num(cx - half) << "\" y1=\"" << svg_num(ypix(s.median))
        << "\" x2=\"" << svg_num(cx + half) << "\" y2=\"" << svg_num(ypix(s.median))
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << svg_num(cx) << "\" y=\"" << svg_num(f.y0() + 18)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
        << escape_xml(s.estimator) << "</text>\n";
  }
  out << "</svg>\n";
  write_text_file(path, out.str());
}

void write_roc_svg(const std::map<std::string, RocCurve>& curves, const std::string& path) {
  Frame f{560, 560, 60, 20, 40, 60};
  auto xpix = [&](double v) { return f.x0() + v * (f.x1() - f.x0()); };
  auto ypix = [&](double v) { return f.y0() - v * (f.y0() - f.y1()); };

  std::ostringstream out;
  open_svg(out, f, "ROC (vertically averaged)");
  draw_axes(out, f);
  for (int t = 0; t <= 4; ++t) {
    const double v = t / 4.0;
    out << "<line x1=\"" << svg_num(xpix(v)) << "\" y1=\"" << svg_num(f.y0())
        << "\" x2=\"" << svg_num(xpix(v)) << "\" y2=\"" << svg_num(f.y0() + 4)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << svg_num(xpix(v)) << "\" y=\"" << svg_num(f.y0() + 18)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
        << tick_label(v) << "</text>\n";
  }
  y_ticks(out, f, 0.0, 1.0, 4);
  out << "<text x=\"" << svg_num((f.x0() + f.x1()) / 2) << "\" y=\""
      << svg_num(f.height - 12)
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
      << "false positive rate</text>\n";

  std::size_t idx = 0;
  double legend_y = f.y0() - 14.0 - 16.0 * static_cast<double>(curves.size());
  for (const auto& [tag, curve] : curves) {
    const char* color = kPalette[idx % kPaletteSize];
    // polyline anchored at the origin, then the averaged grid points
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"" << svg_num(xpix(0)) << ','
        << svg_num(ypix(0));
    for (const auto& pt : curve.points)
      out << ' ' << svg_num(xpix(pt.fpr)) << ',' << svg_num(ypix(pt.tpr));
    out << "\"/>\n";

    // legend entry, bottom-right corner (ROC curves hug the top-left)
    const double ly = legend_y + 16.0 * static_cast<double>(idx);
    const double lx = f.x1() - 170.0;
    out << "<line x1=\"" << svg_num(lx) << "\" y1=\"" << svg_num(ly - 4)
        << "\" x2=\"" << svg_num(lx + 24) << "\" y2=\"" << svg_num(ly - 4)
        << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    char auc[32];
    std::snprintf(auc, sizeof(auc), "%.3f", curve.auc);
    out << "<text x=\"" << svg_num(lx + 30) << "\" y=\"" << svg_num(ly)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(tag)
        << " (AUC " << auc << ")</text>\n";
    ++idx;
  }
  out << "</svg>\n";
  write_text_file(path, out.str());
}

}  // namespace

double quantile(std::vector<double> values, double q) {
  if (values.empty()) fail(ErrorCode::invalid_argument, "quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<BoxStats> compute_box_stats(const std::vector<MetricsRecord>& records) {
  // One sup-norm value per (estimator, replicate): the value repeats across
  // the lambda grid, so keep the first row of each pair.
  std::map<std::string, std::vector<double>> groups;
  std::set<std::pair<std::string, int>> seen;
  for (const auto& r : records)
    if (seen.insert({r.estimator, r.replicate}).second)
      groups[r.estimator].push_back(r.supnorm);

  std::vector<BoxStats> stats;
  for (const auto& [tag, vals] : groups) {
    BoxStats s;
    s.estimator = tag;
    s.n = static_cast<int>(vals.size());
    s.min = quantile(vals, 0.0);
    s.q1 = quantile(vals, 0.25);
    s.median = quantile(vals, 0.5);
    s.q3 = quantile(vals, 0.75);
    s.max = quantile(vals, 1.0);
    stats.push_back(std::move(s));
  }
  return stats;
}

void emit_plots(const std::string& results_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(results_dir);
  const std::string metrics_path = (dir / "metrics.csv").string();
  if (!fs::exists(metrics_path))
    fail(ErrorCode::io, "emit_plots: missing " + metrics_path);

  const std::vector<MetricsRecord> records = read_metrics_csv(metrics_path);
  if (records.empty())
    fail(ErrorCode::parse, "emit_plots: " + metrics_path + " has no data rows");

  const std::vector<BoxStats> stats = compute_box_stats(records);
  std::ostringstream box;
  box << "estimator,n,min,q1,median,q3,max\n";
  for (const auto& s : stats) {
    box << s.estimator << ',' << s.n << ',' << format_double(s.min) << ','
        << format_double(s.q1) << ',' << format_double(s.median) << ','
        << format_double(s.q3) << ',' << format_double(s.max) << '\n';
  }
  write_text_file((dir / "box_stats.csv").string(), box.str());
  write_box_svg(stats, (dir / "supnorm_box.svg").string());

  const std::string roc_path = (dir / "roc.csv").string();
  if (fs::exists(roc_path))
    write_roc_svg(read_roc_csv(roc_path), (dir / "roc.svg").string());
}

}  // namespace robggm
