#pragma once

#include <cstddef>
#include <vector>

#include "wavemotion/errors.hpp"

namespace wavemotion {

/// Dense row-major 64-bit matrix. Deliberately minimal: the network code
/// works on flat parameter vectors and only needs shape-carrying sequence
/// buffers.
struct RealMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> data;

  RealMatrix() = default;
  RealMatrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  double* row(std::size_t r) { return data.data() + r * cols; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }

  void require_shape(std::size_t r, std::size_t c, const char* what) const {
    if (rows != r || cols != c)
      throw ConfigError(std::string("shape mismatch in ") + what);
  }
};

/// Mean squared error over all entries: (1/(T*d)) * sum (a - b)^2.
inline double mse(const RealMatrix& predicted, const RealMatrix& observed) {
  if (predicted.rows != observed.rows || predicted.cols != observed.cols)
    throw ConfigError("mse: shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < predicted.data.size(); ++i) {
    const double e = predicted.data[i] - observed.data[i];
    acc += e * e;
  }
  return acc / static_cast<double>(predicted.data.size());
}

/// Gradient of `mse` with respect to `predicted`.
inline RealMatrix mse_gradient(const RealMatrix& predicted, const RealMatrix& observed) {
  if (predicted.rows != observed.rows || predicted.cols != observed.cols)
    throw ConfigError("mse_gradient: shape mismatch");
  RealMatrix g(predicted.rows, predicted.cols);
  const double scale = 2.0 / static_cast<double>(predicted.data.size());
  for (std::size_t i = 0; i < predicted.data.size(); ++i)
    g.data[i] = scale * (predicted.data[i] - observed.data[i]);
  return g;
}

}  // namespace wavemotion
