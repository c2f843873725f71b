#include <immintrin.h>

#include <cstddef>

#include "gapcount/kernels/kernels.hpp"

namespace gapcount::kernels::avx2 {

void sturm_counts(const SturmInput& in, std::span<const double> shifts,
                  std::span<std::int32_t> counts, std::span<std::uint8_t> breakdown) {
  const std::size_t n = in.diag.size();
  const std::size_t m = shifts.size();
  if (n == 0) {
    scalar::sturm_counts(in, shifts, counts, breakdown);
    return;
  }
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d pivmin = _mm256_set1_pd(in.pivmin);
  const __m256d neg_pivmin = _mm256_set1_pd(-in.pivmin);

  std::size_t k = 0;
  for (; k + 4 <= m; k += 4) {
    const __m256d s = _mm256_loadu_pd(shifts.data() + k);
    __m256i cnt = _mm256_setzero_si256();
    __m256d bd = zero;

    __m256d d = _mm256_sub_pd(_mm256_set1_pd(in.diag[0]), s);
    __m256d small = _mm256_cmp_pd(_mm256_andnot_pd(sign_mask, d), pivmin, _CMP_LT_OQ);
    d = _mm256_blendv_pd(d, neg_pivmin, small);
    bd = _mm256_or_pd(bd, small);
    cnt = _mm256_sub_epi64(cnt, _mm256_castpd_si256(_mm256_cmp_pd(d, zero, _CMP_LT_OQ)));

    for (std::size_t i = 1; i < n; ++i) {
      const __m256d t = _mm256_sub_pd(_mm256_set1_pd(in.diag[i]), s);
      const __m256d q = _mm256_div_pd(_mm256_set1_pd(in.off_sq[i - 1]), d);
      d = _mm256_sub_pd(t, q);
      small = _mm256_cmp_pd(_mm256_andnot_pd(sign_mask, d), pivmin, _CMP_LT_OQ);
      d = _mm256_blendv_pd(d, neg_pivmin, small);
      bd = _mm256_or_pd(bd, small);
      cnt = _mm256_sub_epi64(cnt, _mm256_castpd_si256(_mm256_cmp_pd(d, zero, _CMP_LT_OQ)));
    }

    alignas(32) long long c[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(c), cnt);
    const int bmask = _mm256_movemask_pd(bd);
    for (int l = 0; l < 4; ++l) {
      counts[k + l] = static_cast<std::int32_t>(c[l]);
      breakdown[k + l] = static_cast<std::uint8_t>((bmask >> l) & 1);
    }
  }
  if (k < m) scalar::sturm_counts(in, shifts.subspan(k), counts.subspan(k), breakdown.subspan(k));
}

}  // namespace gapcount::kernels::avx2
