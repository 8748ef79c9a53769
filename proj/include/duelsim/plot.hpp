#pragma once

#include <string>
#include <vector>

namespace duelsim {

struct PlotOptions {
  bool log_y = false;
  int width = 960;
  int height = 540;
};

/// Renders regret-trace CSVs as a self-contained SVG: log-scaled x axis, one
/// polyline per input with a translucent mean +/- std band, legend entries in
/// input order.
void emit_plot(const std::vector<std::string>& csv_paths,
               const std::string& out_path, const PlotOptions& options = {});

/// Same, returning the SVG text instead of writing it.
std::string render_plot(const std::vector<std::string>& csv_paths,
                        const PlotOptions& options = {});

}  // namespace duelsim
