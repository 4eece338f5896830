#pragma once

#include <cmath>
#include <vector>

#include "dgh/grid.hpp"

namespace dgh::testing {

template <typename F>
Field sample(const Grid& grid, F&& f) {
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(grid.node(j));
  return Field(grid, std::move(v));
}

inline double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

inline double dot(const Field& a, const Field& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s * a.grid().dx();
}

}  // namespace dgh::testing
