#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "cnt/error.hpp"

namespace cnt {

/// Dense row-major 2D grid of doubles. Index order is (x, y) with x the
/// column and y the row, matching sensor pixel coordinates.
class Grid {
public:
  Grid() = default;
  Grid(int width, int height, double fill = 0.0)
      : width_(width), height_(height),
        v_(static_cast<size_t>(width) * height, fill) {
    if (width < 0 || height < 0) throw ConfigError("Grid: negative dimensions");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }

  double& at(int x, int y) { return v_[static_cast<size_t>(y) * width_ + x]; }
  double at(int x, int y) const { return v_[static_cast<size_t>(y) * width_ + x]; }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

  bool same_dims(const Grid& o) const {
    return width_ == o.width_ && height_ == o.height_;
  }

  double sum() const {
    double s = 0.0;
    for (double x : v_) s += x;
    return s;
  }

  double mean() const { return v_.empty() ? 0.0 : sum() / static_cast<double>(v_.size()); }

  double min() const {
    double m = v_.empty() ? 0.0 : v_[0];
    for (double x : v_) m = std::min(m, x);
    return m;
  }

  double max() const {
    double m = v_.empty() ? 0.0 : v_[0];
    for (double x : v_) m = std::max(m, x);
    return m;
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::fabs(x));
    return m;
  }

  /// Population standard deviation over the full grid.
  double stddev() const {
    if (v_.empty()) return 0.0;
    const double mu = mean();
    double acc = 0.0;
    for (double x : v_) acc += (x - mu) * (x - mu);
    return std::sqrt(acc / static_cast<double>(v_.size()));
  }

  /// Sum of squared values.
  double energy() const {
    double s = 0.0;
    for (double x : v_) s += x * x;
    return s;
  }

  Grid& operator+=(const Grid& o) {
    for (size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
  }

  Grid& operator*=(double c) {
    for (double& x : v_) x *= c;
    return *this;
  }

private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> v_;
};

/// Row-major complex-valued grid, used for speckle field layers and DFT work.
class ComplexGrid {
public:
  ComplexGrid() = default;
  ComplexGrid(int width, int height)
      : width_(width), height_(height),
        v_(static_cast<size_t>(width) * height) {}

  int width() const { return width_; }
  int height() const { return height_; }
  size_t size() const { return v_.size(); }

  std::complex<double>& at(int x, int y) {
    return v_[static_cast<size_t>(y) * width_ + x];
  }
  const std::complex<double>& at(int x, int y) const {
    return v_[static_cast<size_t>(y) * width_ + x];
  }

  std::complex<double>* data() { return v_.data(); }
  const std::complex<double>* data() const { return v_.data(); }

private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::complex<double>> v_;
};

}  // namespace cnt
