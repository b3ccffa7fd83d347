#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference version and,
// on x86-64, an AVX2 version; the dispatched entry points pick one at runtime.

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace gimg::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

/// Best ISA supported by this CPU and build.
Isa detected_isa();
/// ISA used by the dispatched entry points.
Isa active_isa();
/// Overrides dispatch; requests for an unsupported ISA fall back to Scalar.
/// Returns the ISA actually selected.
Isa set_active_isa(Isa isa);

struct OverlapCounts {
  std::uint64_t intersection = 0;
  std::uint64_t unite = 0;
  friend bool operator==(const OverlapCounts&, const OverlapCounts&) = default;
};

/// Popcounts of (a & b) and (a | b) over two equally sized bitmaps.
OverlapCounts and_or_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

/// For each position i, the index in 0..3 of the largest of
/// planes[0][i]..planes[3][i]; the first maximum wins on ties.
void argmax4(const std::array<const float*, 4>& planes, std::span<std::uint8_t> out);

namespace scalar {
OverlapCounts and_or_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
void argmax4(const std::array<const float*, 4>& planes, std::span<std::uint8_t> out);
}  // namespace scalar

namespace avx2 {
OverlapCounts and_or_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
void argmax4(const std::array<const float*, 4>& planes, std::span<std::uint8_t> out);
}  // namespace avx2

}  // namespace gimg::kernels
