#include "wnoise/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "wnoise/errors.hpp"
#include "wnoise/results_io.hpp"

namespace wnoise {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 130.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};

struct Point {
  double x, y, lo, hi;
};

struct Series {
  std::string label;
  std::vector<Point> points;
};

struct Axes {
  double x0, x1, y0, y1;
  bool log_x, log_y;

  double px(double x) const { return kLeft + (tx(x) - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (ty(y) - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
  double tx(double x) const { return log_x ? std::log10(x) : x; }
  double ty(double y) const { return log_y ? std::log10(y) : y; }
};

std::string fmt(const char* pattern, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

std::string num(double v) { return fmt("%.3f", v); }

std::string tick_label(double t) { return fmt("%g", t); }

void widen(double& lo, double& hi) {
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
}

std::string render(const std::vector<Series>& series, bool log_x, bool log_y, const std::string& title,
                   const std::string& x_label, const std::string& y_label, bool guide) {
  Axes ax{0, 1, 0, 1, log_x, log_y};
  bool any = false;
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      const double tx = ax.tx(p.x), tlo = ax.ty(p.lo), thi = ax.ty(p.hi);
      if (!any) {
        x0 = x1 = tx;
        y0 = tlo;
        y1 = thi;
        any = true;
      }
      x0 = std::min(x0, tx);
      x1 = std::max(x1, tx);
      y0 = std::min(y0, tlo);
      y1 = std::max(y1, thi);
    }
  }
  widen(x0, x1);
  widen(y0, y1);
  ax.x0 = x0;
  ax.x1 = x1;
  ax.y0 = y0;
  ax.y1 = y1;

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(kWidth) + "\" height=\"" +
         num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) + "\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">" + title + "</text>\n";

  const double left = kLeft, right = kWidth - kRight, top = kTop, bottom = kHeight - kBottom;
  out += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(right - left) + "\" height=\"" +
         num(bottom - top) + "\" fill=\"none\" stroke=\"black\"/>\n";

  // Ticks at five evenly spaced positions in transformed coordinates.
  for (int t = 0; t <= 4; ++t) {
    const double fx = x0 + (x1 - x0) * t / 4.0;
    const double sx = left + (right - left) * t / 4.0;
    out += "<line x1=\"" + num(sx) + "\" y1=\"" + num(bottom) + "\" x2=\"" + num(sx) + "\" y2=\"" +
           num(bottom + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(sx) + "\" y=\"" + num(bottom + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           tick_label(std::round(fx * 100) / 100) + "</text>\n";
    const double fy = y0 + (y1 - y0) * t / 4.0;
    const double sy = bottom - (bottom - top) * t / 4.0;
    out += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(sy) + "\" x2=\"" + num(left) + "\" y2=\"" + num(sy) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(left - 8) + "\" y=\"" + num(sy + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           tick_label(std::round(fy * 1000) / 1000) + "</text>\n";
  }
  out += "<text x=\"" + num((left + right) / 2) + "\" y=\"" + num(kHeight - 15) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         (log_x ? "log10 " + x_label : x_label) + "</text>\n";
  out += "<text x=\"18\" y=\"" + num((top + bottom) / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 " +
         num((top + bottom) / 2) + ")\">" + (log_y ? "log10 " + y_label : y_label) + "</text>\n";
  out += "<clipPath id=\"frame\"><rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(right - left) +
         "\" height=\"" + num(bottom - top) + "\"/></clipPath>\n";

  if (guide && any) {
    // Slope -1/3 in log-log coordinates through the first point of the first series.
    const Point& a = series.front().points.front();
    const double gx0 = x0, gx1 = x1;
    const double gy0 = ax.ty(a.y) - (gx0 - ax.tx(a.x)) / 3.0;
    const double gy1 = ax.ty(a.y) - (gx1 - ax.tx(a.x)) / 3.0;
    auto sx = [&](double t) { return left + (t - x0) / (x1 - x0) * (right - left); };
    auto sy = [&](double t) { return bottom - (t - y0) / (y1 - y0) * (bottom - top); };
    out += "<line class=\"guide\" x1=\"" + num(sx(gx0)) + "\" y1=\"" + num(sy(gy0)) + "\" x2=\"" + num(sx(gx1)) +
           "\" y2=\"" + num(sy(gy1)) + "\" stroke=\"gray\" stroke-dasharray=\"6,4\" clip-path=\"url(#frame)\"/>\n";
    out += "<text x=\"" + num(right + 8) + "\" y=\"" + num(top + 14 + 18.0 * static_cast<double>(series.size())) +
           "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"gray\">slope -1/3</text>\n";
  }

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    const auto& pts = series[s].points;
    if (pts.size() > 1) {
      out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t p = 0; p < pts.size(); ++p) {
        if (p) out += ' ';
        out += num(ax.px(pts[p].x)) + "," + num(ax.py(pts[p].y));
      }
      out += "\"/>\n";
    }
    for (const auto& p : pts) {
      if (p.hi > p.lo) {
        out += "<line x1=\"" + num(ax.px(p.x)) + "\" y1=\"" + num(ax.py(p.lo)) + "\" x2=\"" + num(ax.px(p.x)) +
               "\" y2=\"" + num(ax.py(p.hi)) + "\" stroke=\"" + color + "\"/>\n";
      }
      out += "<circle class=\"marker\" cx=\"" + num(ax.px(p.x)) + "\" cy=\"" + num(ax.py(p.y)) +
             "\" r=\"3.5\" fill=\"" + color + "\"/>\n";
    }
    const double ly = top + 14 + 18.0 * static_cast<double>(s);
    out += "<rect x=\"" + num(right + 8) + "\" y=\"" + num(ly - 9) + "\" width=\"10\" height=\"10\" fill=\"" + color +
           "\"/>\n";
    out += "<text x=\"" + num(right + 22) + "\" y=\"" + num(ly) + "\" font-family=\"sans-serif\" font-size=\"11\">" +
           series[s].label + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

std::vector<Series> group_by_n(const std::vector<ResultRow>& rows, const std::string& statistic, bool log_y,
                               double (*x_of)(const ResultRow&)) {
  std::map<std::size_t, Series> by_n;
  for (const auto& r : rows) {
    if (r.statistic != statistic || r.n == 0) continue;
    const double x = x_of(r);
    if (!(x > 0.0) || !std::isfinite(x)) continue;
    double lo = r.mean - r.std_error, hi = r.mean + r.std_error;
    if (log_y) {
      if (!(r.mean > 0.0)) continue;
      if (!(lo > 0.0)) lo = r.mean;
    }
    auto& s = by_n[r.n];
    s.label = "N=" + std::to_string(r.n);
    s.points.push_back({x, r.mean, lo, hi});
  }
  std::vector<Series> out;
  for (auto& [n, s] : by_n) {
    std::stable_sort(s.points.begin(), s.points.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

PlotKind parse_plot_kind(std::string_view tag) {
  if (tag == "overlap") return PlotKind::overlap;
  if (tag == "variance") return PlotKind::variance;
  if (tag == "collapse") return PlotKind::collapse;
  throw ConfigError("unknown plot kind '" + std::string(tag) + "' (expected overlap, variance or collapse)");
}

std::string render_plot(const std::vector<ResultRow>& rows, PlotKind kind) {
  switch (kind) {
    case PlotKind::overlap:
      return render(group_by_n(rows, "overlap", false, [](const ResultRow& r) { return static_cast<double>(r.k); }),
                    true, false, "Top eigenvector overlap after resampling k entries", "k", "E|<v, v[k]>|", false);
    case PlotKind::collapse:
      return render(group_by_n(rows, "overlap", false, [](const ResultRow& r) { return r.multiplier; }), true, false,
                    "Overlap against k / N^(5/3)", "k / N^(5/3)", "E|<v, v[k]>|", false);
    case PlotKind::variance: {
      auto series = group_by_n(rows, "lambda_var", true, [](const ResultRow& r) { return static_cast<double>(r.n); });
      // One series across N.
      Series all{"Var(lambda)", {}};
      for (const auto& s : series) all.points.insert(all.points.end(), s.points.begin(), s.points.end());
      std::stable_sort(all.points.begin(), all.points.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
      std::vector<Series> one;
      if (!all.points.empty()) one.push_back(std::move(all));
      return render(one, true, true, "Variance of the top eigenvalue", "N", "Var(lambda)", true);
    }
  }
  throw ConfigError("unknown plot kind");
}

void emit_plot(const std::vector<ResultRow>& rows, PlotKind kind, const std::filesystem::path& out_path) {
  write_file_atomic(out_path, render_plot(rows, kind));
}

}  // namespace wnoise
