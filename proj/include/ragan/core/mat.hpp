#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace ragan::core {

// Dense row-major matrix of doubles. All numeric state in the project
// (rating matrices, network weights, activations) lives in these.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> d;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), d(static_cast<size_t>(r) * c, 0.0) {}
  Mat(int r, int c, double fill)
      : rows(r), cols(c), d(static_cast<size_t>(r) * c, fill) {}

  double& at(int r, int c) {
    assert(r >= 0 && r < rows && c >= 0 && c < cols);
    return d[static_cast<size_t>(r) * cols + c];
  }
  double at(int r, int c) const {
    assert(r >= 0 && r < rows && c >= 0 && c < cols);
    return d[static_cast<size_t>(r) * cols + c];
  }
  double& operator()(int r, int c) { return at(r, c); }
  double operator()(int r, int c) const { return at(r, c); }

  size_t size() const { return d.size(); }
  bool empty() const { return d.empty(); }
  bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }

  const double* row_ptr(int r) const { return d.data() + static_cast<size_t>(r) * cols; }
  double* row_ptr(int r) { return d.data() + static_cast<size_t>(r) * cols; }

  void fill(double v) { std::fill(d.begin(), d.end(), v); }
  void zero() { fill(0.0); }
};

}  // namespace ragan::core
