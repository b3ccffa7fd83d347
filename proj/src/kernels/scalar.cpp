#include <bit>
#include <stdexcept>

#include "gimg/kernels/kernels.hpp"

namespace gimg::kernels::scalar {

OverlapCounts and_or_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("and_or_popcount: size mismatch");
  OverlapCounts c;
  for (std::size_t i = 0; i < a.size(); ++i) {
    c.intersection += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
    c.unite += static_cast<std::uint64_t>(std::popcount(a[i] | b[i]));
  }
  return c;
}

void argmax4(const std::array<const float*, 4>& planes, std::span<std::uint8_t> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint8_t best = 0;
    float v = planes[0][i];
    for (std::uint8_t k = 1; k < 4; ++k) {
      if (planes[k][i] > v) {
        v = planes[k][i];
        best = k;
      }
    }
    out[i] = best;
  }
}

}  // namespace gimg::kernels::scalar
