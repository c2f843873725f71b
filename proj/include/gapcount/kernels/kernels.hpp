#pragma once

// Data-parallel inner loops shared by the spectral modules.
//
// Two kernels are vectorized across independent evaluation points:
//   * Sturm counts of a symmetric tridiagonal matrix at many shifts at once
//     (one shift per SIMD lane, the LDL^T pivot recurrence runs in lockstep);
//   * the Floquet discriminant of a periodic Jacobi background at many
//     energies at once.
//
// Every variant performs the same IEEE operations in the same order as the
// scalar reference (no FMA contraction), so results are bit-identical across
// instruction sets. The equivalence tests rely on that.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace gapcount::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

/// True when the variant was compiled in and the running CPU supports it.
bool isa_supported(Isa isa);

std::vector<Isa> supported_isas();

/// Best supported variant, unless the GAPCOUNT_SIMD environment variable
/// names another one ("scalar", "avx2", "neon"). Resolved once per process.
Isa active_isa();

struct SturmInput {
  std::span<const double> diag;
  std::span<const double> off_sq;  // squared off-diagonals, size diag.size()-1
  double pivmin;                   // pivots with |d| < pivmin are clamped to -pivmin
};

// counts[k] = number of negative pivots of (T - shifts[k]) = LDL^T.
// breakdown[k] is set to 1 when a pivot had to be clamped.
namespace scalar {
void sturm_counts(const SturmInput& in, std::span<const double> shifts,
                  std::span<std::int32_t> counts, std::span<std::uint8_t> breakdown);
void discriminants(std::span<const double> a, std::span<const double> b,
                   std::span<const double> lambdas, std::span<double> out);
}  // namespace scalar

namespace avx2 {
void sturm_counts(const SturmInput& in, std::span<const double> shifts,
                  std::span<std::int32_t> counts, std::span<std::uint8_t> breakdown);
void discriminants(std::span<const double> a, std::span<const double> b,
                   std::span<const double> lambdas, std::span<double> out);
}  // namespace avx2

namespace neon {
void sturm_counts(const SturmInput& in, std::span<const double> shifts,
                  std::span<std::int32_t> counts, std::span<std::uint8_t> breakdown);
void discriminants(std::span<const double> a, std::span<const double> b,
                   std::span<const double> lambdas, std::span<double> out);
}  // namespace neon

void sturm_counts(Isa isa, const SturmInput& in, std::span<const double> shifts,
                  std::span<std::int32_t> counts, std::span<std::uint8_t> breakdown);

/// Trace of the one-period transfer matrix at each energy.
/// a and b hold one period of the background (a[k] > 0).
void discriminants(Isa isa, std::span<const double> a, std::span<const double> b,
                   std::span<const double> lambdas, std::span<double> out);

inline void sturm_counts(const SturmInput& in, std::span<const double> shifts,
                         std::span<std::int32_t> counts, std::span<std::uint8_t> breakdown) {
  sturm_counts(active_isa(), in, shifts, counts, breakdown);
}

inline void discriminants(std::span<const double> a, std::span<const double> b,
                          std::span<const double> lambdas, std::span<double> out) {
  discriminants(active_isa(), a, b, lambdas, out);
}

}  // namespace gapcount::kernels
