#include <atomic>

#include "gimg/kernels/kernels.hpp"

namespace gimg::kernels {

#ifndef GIMG_HAVE_AVX2_TU
// Without the AVX2 translation unit the avx2 entry points forward to scalar.
namespace avx2 {
OverlapCounts and_or_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  return scalar::and_or_popcount(a, b);
}
void argmax4(const std::array<const float*, 4>& planes, std::span<std::uint8_t> out) {
  scalar::argmax4(planes, out);
}
}  // namespace avx2
#endif

namespace {

Isa probe() {
#if defined(GIMG_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt")) return Isa::Avx2;
#endif
  return Isa::Scalar;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{detected_isa()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

Isa detected_isa() {
  static const Isa isa = probe();
  return isa;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

Isa set_active_isa(Isa isa) {
  if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2) isa = Isa::Scalar;
  active().store(isa, std::memory_order_relaxed);
  return isa;
}

OverlapCounts and_or_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  return active_isa() == Isa::Avx2 ? avx2::and_or_popcount(a, b) : scalar::and_or_popcount(a, b);
}

void argmax4(const std::array<const float*, 4>& planes, std::span<std::uint8_t> out) {
  if (active_isa() == Isa::Avx2)
    avx2::argmax4(planes, out);
  else
    scalar::argmax4(planes, out);
}

}  // namespace gimg::kernels
