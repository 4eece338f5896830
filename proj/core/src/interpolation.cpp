#include "dgh/interpolation.hpp"

#include <cmath>

namespace dgh {

LocalInterpolator::Stencil LocalInterpolator::stencil(double x) const noexcept {
  constexpr int lo = -3;  // offsets -3..4 around floor(s)
  const double s = (grid_.wrap(x) + grid_.half_length()) / grid_.dx();
  const double base = std::floor(s);
  const double theta = s - base;
  const auto n = static_cast<long long>(grid_.size());
  const auto j0 = static_cast<long long>(base);

  Stencil st;
  for (std::size_t i = 0; i < kStencil; ++i) {
    const int oi = lo + static_cast<int>(i);
    double w = 1.0;
    for (std::size_t m = 0; m < kStencil; ++m) {
      if (m == i) continue;
      const int om = lo + static_cast<int>(m);
      w *= (theta - om) / static_cast<double>(oi - om);
    }
    long long idx = (j0 + oi) % n;
    if (idx < 0) idx += n;
    st.index[i] = static_cast<std::size_t>(idx);
    st.weight[i] = w;
  }
  return st;
}

}  // namespace dgh
