#include "duelsim/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "duelsim/errors.hpp"
#include "duelsim/harness.hpp"

namespace duelsim {

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
constexpr int kPaletteSize = 8;

struct Frame {
  double left, right, top, bottom;
  double x_min, x_max;  // log10 rounds
  double y_min, y_max;  // value space (log10 when log_y)

  double x(double t) const {
    const double lx = std::log10(std::max(t, 1.0));
    return left + (lx - x_min) / (x_max - x_min) * (right - left);
  }
  double y(double v) const {
    return bottom - (v - y_min) / (y_max - y_min) * (bottom - top);
  }
};

std::string num(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

std::string tick_label(double v, bool log_scale) {
  std::ostringstream out;
  if (log_scale) {
    out << "1e" << static_cast<int>(std::lround(v));
  } else {
    out.precision(4);
    out << v;
  }
  return out.str();
}

}  // namespace

std::string render_plot(const std::vector<std::string>& csv_paths,
                        const PlotOptions& options) {
  if (csv_paths.empty()) throw ParseError("no input csv files");
  std::vector<Series> series;
  series.reserve(csv_paths.size());
  for (const auto& path : csv_paths) series.push_back(read_trace_csv(path));

  double t_max = 1.0;
  double v_min = std::numeric_limits<double>::infinity();
  double v_max = -std::numeric_limits<double>::infinity();
  double positive_floor = std::numeric_limits<double>::infinity();
  for (const Series& s : series) {
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      t_max = std::max(t_max, s.t[i]);
      v_min = std::min(v_min, s.mean[i] - s.stddev[i]);
      v_max = std::max(v_max, s.mean[i] + s.stddev[i]);
      if (s.mean[i] > 0.0) positive_floor = std::min(positive_floor, s.mean[i]);
    }
  }
  if (!std::isfinite(positive_floor)) positive_floor = 1.0;

  Frame frame;
  frame.left = 70;
  frame.right = options.width - 20.0;
  frame.top = 20;
  frame.bottom = options.height - 55.0;
  frame.x_min = 0.0;
  frame.x_max = std::max(std::log10(t_max), 0.3);

  auto value_of = [&](double v) {
    if (!options.log_y) return v;
    return std::log10(std::max(v, positive_floor / 10.0));
  };
  frame.y_min = value_of(options.log_y ? positive_floor / 10.0
                                       : std::min(0.0, v_min));
  frame.y_max = value_of(std::max(v_max, frame.y_min + 1e-9));
  if (frame.y_max <= frame.y_min) frame.y_max = frame.y_min + 1.0;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width
      << "\" height=\"" << options.height << "\" viewBox=\"0 0 "
      << options.width << " " << options.height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // axes
  svg << "<line x1=\"" << frame.left << "\" y1=\"" << frame.bottom
      << "\" x2=\"" << frame.right << "\" y2=\"" << frame.bottom
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << frame.left << "\" y1=\"" << frame.top << "\" x2=\""
      << frame.left << "\" y2=\"" << frame.bottom << "\" stroke=\"black\"/>\n";

  // x ticks at powers of ten
  for (int p = 0; p <= static_cast<int>(std::floor(frame.x_max)); ++p) {
    const double x = frame.x(std::pow(10.0, p));
    svg << "<line x1=\"" << x << "\" y1=\"" << frame.bottom << "\" x2=\"" << x
        << "\" y2=\"" << frame.bottom + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << x << "\" y=\"" << frame.bottom + 20
        << "\" font-size=\"12\" text-anchor=\"middle\">1e" << p << "</text>\n";
  }
  svg << "<text x=\"" << (frame.left + frame.right) / 2 << "\" y=\""
      << frame.bottom + 40 << "\" font-size=\"13\" text-anchor=\"middle\">"
      << "round</text>\n";

  // y ticks
  for (int i = 0; i <= 5; ++i) {
    const double v = frame.y_min + (frame.y_max - frame.y_min) * i / 5.0;
    const double y = frame.y(v);
    svg << "<line x1=\"" << frame.left - 5 << "\" y1=\"" << y << "\" x2=\""
        << frame.left << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << frame.left - 8 << "\" y=\"" << y + 4
        << "\" font-size=\"12\" text-anchor=\"end\">"
        << tick_label(v, options.log_y) << "</text>\n";
  }
  svg << "<text x=\"16\" y=\"" << (frame.top + frame.bottom) / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (frame.top + frame.bottom) / 2 << ")\">group regret</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const Series& s = series[si];
    const char* color = kPalette[si % kPaletteSize];

    // mean +/- std band
    std::ostringstream band;
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      band << (i ? " " : "") << num(frame.x(s.t[i])) << ","
           << num(frame.y(value_of(s.mean[i] + s.stddev[i])));
    }
    for (std::size_t i = s.t.size(); i-- > 0;) {
      band << " " << num(frame.x(s.t[i])) << ","
           << num(frame.y(value_of(s.mean[i] - s.stddev[i])));
    }
    svg << "<polygon points=\"" << band.str() << "\" fill=\"" << color
        << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";

    std::ostringstream line;
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      line << (i ? " " : "") << num(frame.x(s.t[i])) << ","
           << num(frame.y(value_of(s.mean[i])));
    }
    svg << "<polyline points=\"" << line.str() << "\" fill=\"none\" stroke=\""
        << color << "\" stroke-width=\"1.8\"/>\n";
  }

  // legend, input order
  for (std::size_t si = 0; si < series.size(); ++si) {
    const double y = frame.top + 16.0 * (si + 1);
    svg << "<line x1=\"" << frame.left + 10 << "\" y1=\"" << y << "\" x2=\""
        << frame.left + 34 << "\" y2=\"" << y << "\" stroke=\""
        << kPalette[si % kPaletteSize] << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << frame.left + 40 << "\" y=\"" << y + 4
        << "\" font-size=\"12\" class=\"legend\">" << series[si].label
        << "</text>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

void emit_plot(const std::vector<std::string>& csv_paths,
               const std::string& out_path, const PlotOptions& options) {
  const std::string svg = render_plot(csv_paths, options);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot write " + out_path);
  out << svg;
  if (!out) throw IoError("write failed: " + out_path);
}

}  // namespace duelsim
