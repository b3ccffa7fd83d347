#include <doctest.h>

#include <bit>
#include <random>
#include <vector>

#include "gimg/kernels/kernels.hpp"

using namespace gimg::kernels;

namespace {

OverlapCounts naive_counts(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  OverlapCounts c;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (int bit = 0; bit < 64; ++bit) {
      const bool x = (a[i] >> bit) & 1U, y = (b[i] >> bit) & 1U;
      c.intersection += x && y;
      c.unite += x || y;
    }
  return c;
}

}  // namespace

TEST_CASE("and_or_popcount: scalar, avx2 and bitwise reference agree") {
  std::mt19937_64 rng(1);
  const bool have_avx2 = detected_isa() == Isa::Avx2;
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 31u, 64u, 257u, 4096u}) {
    std::vector<std::uint64_t> a(n), b(n);
    for (auto& w : a) w = rng();
    for (auto& w : b) w = rng() & rng();
    const OverlapCounts ref = naive_counts(a, b);
    CHECK(scalar::and_or_popcount(a, b) == ref);
    if (have_avx2) CHECK(avx2::and_or_popcount(a, b) == ref);
    CHECK(and_or_popcount(a, b) == ref);
  }
}

TEST_CASE("argmax4: scalar, avx2 and reference agree, first maximum wins") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> small(0, 3);  // many ties
  const bool have_avx2 = detected_isa() == Isa::Avx2;
  for (std::size_t n : {1u, 7u, 8u, 9u, 256u, 1000u}) {
    std::vector<float> p[4];
    for (auto& v : p) {
      v.resize(n);
      for (float& x : v) x = static_cast<float>(small(rng)) * 0.25f;
    }
    std::vector<std::uint8_t> ref(n), s(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      for (int k = 1; k < 4; ++k)
        if (p[k][i] > p[best][i]) best = k;
      ref[i] = static_cast<std::uint8_t>(best);
    }
    const std::array<const float*, 4> planes = {p[0].data(), p[1].data(), p[2].data(), p[3].data()};
    scalar::argmax4(planes, s);
    CHECK(s == ref);
    if (have_avx2) {
      avx2::argmax4(planes, v);
      CHECK(v == ref);
    }
  }
}

TEST_CASE("dispatch override") {
  const Isa before = active_isa();
  CHECK(set_active_isa(Isa::Scalar) == Isa::Scalar);
  CHECK(active_isa() == Isa::Scalar);
  const Isa got = set_active_isa(Isa::Avx2);
  CHECK(got == detected_isa());
  set_active_isa(before);
  CHECK(to_string(Isa::Avx2) == "avx2");
}
