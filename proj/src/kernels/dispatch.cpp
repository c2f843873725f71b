#include <cstdlib>
#include <string>

#include "gapcount/kernels/kernels.hpp"

namespace gapcount::kernels {

namespace {

bool cpu_has(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(GAPCOUNT_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(GAPCOUNT_HAVE_NEON)
      return true;  // Advanced SIMD is mandatory on AArch64.
#else
      return false;
#endif
  }
  return false;
}

Isa resolve() {
  if (const char* env = std::getenv("GAPCOUNT_SIMD")) {
    const std::string want(env);
    for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
      if (want == isa_name(isa) && cpu_has(isa)) return isa;
    }
  }
  if (cpu_has(Isa::kAvx2)) return Isa::kAvx2;
  if (cpu_has(Isa::kNeon)) return Isa::kNeon;
  return Isa::kScalar;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

bool isa_supported(Isa isa) { return cpu_has(isa); }

std::vector<Isa> supported_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon})
    if (cpu_has(isa)) out.push_back(isa);
  return out;
}

Isa active_isa() {
  static const Isa isa = resolve();
  return isa;
}

void sturm_counts(Isa isa, const SturmInput& in, std::span<const double> shifts,
                  std::span<std::int32_t> counts, std::span<std::uint8_t> breakdown) {
  switch (isa) {
#if defined(GAPCOUNT_HAVE_AVX2)
    case Isa::kAvx2:
      if (cpu_has(isa)) return avx2::sturm_counts(in, shifts, counts, breakdown);
      break;
#endif
#if defined(GAPCOUNT_HAVE_NEON)
    case Isa::kNeon:
      return neon::sturm_counts(in, shifts, counts, breakdown);
#endif
    default:
      break;
  }
  scalar::sturm_counts(in, shifts, counts, breakdown);
}

void discriminants(Isa isa, std::span<const double> a, std::span<const double> b,
                   std::span<const double> lambdas, std::span<double> out) {
  switch (isa) {
#if defined(GAPCOUNT_HAVE_AVX2)
    case Isa::kAvx2:
      if (cpu_has(isa)) return avx2::discriminants(a, b, lambdas, out);
      break;
#endif
#if defined(GAPCOUNT_HAVE_NEON)
    case Isa::kNeon:
      return neon::discriminants(a, b, lambdas, out);
#endif
    default:
      break;
  }
  scalar::discriminants(a, b, lambdas, out);
}

}  // namespace gapcount::kernels
