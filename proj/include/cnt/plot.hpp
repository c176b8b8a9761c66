#pragma once

#include <string>
#include <vector>

namespace cnt {

/// Minimal SVG chart emitters for the experiment figures. Output is plain
/// text, so plots are deterministic and diffable.
namespace plot {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool line = true;
  bool markers = false;
};

void line_chart(const std::string& path, const std::string& title,
                const std::string& xlabel, const std::string& ylabel,
                const std::vector<Series>& series, bool log_x = false,
                bool log_y = false);

/// values[row][col]; rows labeled by `row_labels`, columns by `col_labels`.
void heatmap(const std::string& path, const std::string& title,
             const std::string& xlabel, const std::string& ylabel,
             const std::vector<int>& col_labels, const std::vector<int>& row_labels,
             const std::vector<std::vector<double>>& values);

/// Two heatmaps side by side with independent color scales.
void heatmap_pair(const std::string& path, const std::string& title_a,
                  const std::string& title_b, const std::string& xlabel,
                  const std::string& ylabel, const std::vector<int>& col_labels,
                  const std::vector<int>& row_labels,
                  const std::vector<std::vector<double>>& values_a,
                  const std::vector<std::vector<double>>& values_b);

}  // namespace plot
}  // namespace cnt
