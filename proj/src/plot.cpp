#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "kitchen/harness.hpp"

namespace kitchen {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 130.0;
constexpr double kTop = 50.0;
constexpr double kPlotHeight = 300.0;

const char* const kPalette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1"};

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string esc(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

bool to_double(const std::string& s, double& v) {
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

bool value_less(const std::string& a, const std::string& b) {
  double x = 0;
  double y = 0;
  if (to_double(a, x) && to_double(b, y)) return x < y;
  return a < b;
}

}  // namespace

std::string render_bar_svg(std::span<const BarGroup> groups, std::string_view title, std::string_view x_label,
                           std::string_view y_label) {
  if (groups.empty()) throw std::invalid_argument("bar chart needs at least one group");
  std::vector<std::string> series;
  double top = 0.0;
  for (const auto& g : groups) {
    for (const auto& b : g.bars) {
      if (!(b.mean >= 0.0)) throw std::invalid_argument("bar chart values must be non-negative");
      if (b.stderr_of_mean && !(*b.stderr_of_mean >= 0.0))
        throw std::invalid_argument("standard errors must be non-negative");
      top = std::max(top, b.mean + b.stderr_of_mean.value_or(0.0));
      if (std::find(series.begin(), series.end(), b.series) == series.end()) series.push_back(b.series);
    }
  }
  const double scale = top > 0.0 ? kPlotHeight / top : 0.0;
  const double baseline = kTop + kPlotHeight;
  const double plot_width = kWidth - kLeft - kRight;
  const double group_width = plot_width / static_cast<double>(groups.size());
  const double bar_width = group_width * 0.8 / static_cast<double>(std::max<std::size_t>(series.size(), 1));

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "  <text x=\"" << kWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">" << esc(title)
      << "</text>\n";
  out << "  <line x1=\"" << kLeft << "\" y1=\"" << baseline << "\" x2=\"" << kLeft + plot_width << "\" y2=\""
      << baseline << "\" stroke=\"black\"/>\n";
  out << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << baseline
      << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = top * t / 4.0;
    const double y = baseline - v * scale;
    out << "  <text x=\"" << kLeft - 6 << "\" y=\"" << px(y + 4) << "\" text-anchor=\"end\" font-size=\"11\">"
        << format_number(v) << "</text>\n";
  }

  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& g = groups[gi];
    const double gx = kLeft + group_width * static_cast<double>(gi) + group_width * 0.1;
    for (const auto& b : g.bars) {
      const auto si = static_cast<std::size_t>(std::find(series.begin(), series.end(), b.series) - series.begin());
      const double x = gx + bar_width * static_cast<double>(si);
      const double h = b.mean * scale;
      out << "  <rect class=\"bar\" x=\"" << px(x) << "\" y=\"" << px(baseline - h) << "\" width=\"" << px(bar_width)
          << "\" height=\"" << px(h) << "\" fill=\"" << kPalette[si % std::size(kPalette)] << "\"/>\n";
      if (b.stderr_of_mean) {
        const double cx = x + bar_width / 2;
        const double lo = baseline - std::max(0.0, b.mean - *b.stderr_of_mean) * scale;
        const double hi = baseline - (b.mean + *b.stderr_of_mean) * scale;
        out << "  <line class=\"whisker\" x1=\"" << px(cx) << "\" y1=\"" << px(lo) << "\" x2=\"" << px(cx)
            << "\" y2=\"" << px(hi) << "\" stroke=\"black\"/>\n";
      }
    }
    out << "  <text x=\"" << px(gx + group_width * 0.4) << "\" y=\"" << baseline + 18
        << "\" text-anchor=\"middle\" font-size=\"12\">" << esc(g.label) << "</text>\n";
  }
  out << "  <text x=\"" << kLeft + plot_width / 2 << "\" y=\"" << baseline + 44
      << "\" text-anchor=\"middle\" font-size=\"13\">" << esc(x_label) << "</text>\n";
  out << "  <text x=\"18\" y=\"" << kTop + kPlotHeight / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << kTop + kPlotHeight / 2 << ")\">" << esc(y_label) << "</text>\n";
  for (std::size_t si = 0; si < series.size() && series.size() > 1; ++si) {
    const double y = kTop + 18.0 * static_cast<double>(si);
    out << "  <rect x=\"" << kWidth - kRight + 16 << "\" y=\"" << y << "\" width=\"12\" height=\"12\" fill=\""
        << kPalette[si % std::size(kPalette)] << "\"/>\n";
    out << "  <text x=\"" << kWidth - kRight + 34 << "\" y=\"" << y + 10 << "\" font-size=\"11\">" << esc(series[si])
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::vector<BarGroup> aggregate_bars(const CsvTable& table, std::string_view x, std::string_view group,
                                     std::string_view y) {
  const int xc = table.column(x);
  const int gc = group.empty() ? -1 : table.column(group);
  const int yc = table.column(y);
  if (xc < 0) throw std::invalid_argument("no column '" + std::string(x) + "'");
  if (!group.empty() && gc < 0) throw std::invalid_argument("no column '" + std::string(group) + "'");
  if (yc < 0) throw std::invalid_argument("no column '" + std::string(y) + "'");

  std::map<std::pair<std::string, std::string>, std::vector<double>> cells;
  std::vector<std::string> xs;
  std::vector<std::string> gs;
  for (const auto& row : table.rows) {
    const auto& xv = row[static_cast<std::size_t>(xc)];
    const std::string gv = gc >= 0 ? row[static_cast<std::size_t>(gc)] : std::string(y);
    if (std::find(xs.begin(), xs.end(), xv) == xs.end()) xs.push_back(xv);
    if (std::find(gs.begin(), gs.end(), gv) == gs.end()) gs.push_back(gv);
    const auto& cell = row[static_cast<std::size_t>(yc)];
    if (cell.empty()) continue;
    double v = 0;
    if (!to_double(cell, v)) throw std::invalid_argument("non-numeric value '" + cell + "' in column " + std::string(y));
    cells[{xv, gv}].push_back(v);
  }
  std::sort(xs.begin(), xs.end(), value_less);
  std::sort(gs.begin(), gs.end(), value_less);

  std::vector<BarGroup> out;
  for (const auto& xv : xs) {
    BarGroup g{xv, {}};
    for (const auto& gv : gs) {
      auto it = cells.find({xv, gv});
      if (it == cells.end() || it->second.empty()) continue;
      const auto& v = it->second;
      const double n = static_cast<double>(v.size());
      double mean = 0;
      for (double d : v) mean += d;
      mean /= n;
      Bar b{gc >= 0 ? std::string(group) + "=" + gv : gv, mean, std::nullopt};
      if (v.size() > 1) {
        double ss = 0;
        for (double d : v) ss += (d - mean) * (d - mean);
        b.stderr_of_mean = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
      }
      g.bars.push_back(std::move(b));
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace kitchen
