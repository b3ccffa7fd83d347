#include <immintrin.h>

#include <stdexcept>

#include "gimg/kernels/kernels.hpp"

namespace gimg::kernels::avx2 {

namespace {

// Per-byte popcount via nibble lookup, summed into 64-bit lanes.
inline __m256i popcount_epi64(__m256i v) {
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                       0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low);
  const __m256i bytes = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
  return _mm256_sad_epu8(bytes, _mm256_setzero_si256());
}

inline std::uint64_t hsum_epi64(__m256i v) {
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

}  // namespace

OverlapCounts and_or_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("and_or_popcount: size mismatch");
  __m256i acc_and = _mm256_setzero_si256();
  __m256i acc_or = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= a.size(); i += 4) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
    acc_and = _mm256_add_epi64(acc_and, popcount_epi64(_mm256_and_si256(va, vb)));
    acc_or = _mm256_add_epi64(acc_or, popcount_epi64(_mm256_or_si256(va, vb)));
  }
  OverlapCounts c{hsum_epi64(acc_and), hsum_epi64(acc_or)};
  for (; i < a.size(); ++i) {
    c.intersection += static_cast<std::uint64_t>(_mm_popcnt_u64(a[i] & b[i]));
    c.unite += static_cast<std::uint64_t>(_mm_popcnt_u64(a[i] | b[i]));
  }
  return c;
}

void argmax4(const std::array<const float*, 4>& planes, std::span<std::uint8_t> out) {
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 best = _mm256_loadu_ps(planes[0] + i);
    __m256i idx = _mm256_setzero_si256();
    for (int k = 1; k < 4; ++k) {
      const __m256 v = _mm256_loadu_ps(planes[static_cast<std::size_t>(k)] + i);
      const __m256 gt = _mm256_cmp_ps(v, best, _CMP_GT_OQ);
      best = _mm256_blendv_ps(best, v, gt);
      idx = _mm256_blendv_epi8(idx, _mm256_set1_epi32(k), _mm256_castps_si256(gt));
    }
    alignas(32) std::int32_t lanes[8];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), idx);
    for (int k = 0; k < 8; ++k) out[i + static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(lanes[k]);
  }
  if (i < n) {
    const std::array<const float*, 4> rest{planes[0] + i, planes[1] + i, planes[2] + i, planes[3] + i};
    scalar::argmax4(rest, out.subspan(i));
  }
}

}  // namespace gimg::kernels::avx2
