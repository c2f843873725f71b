#include <immintrin.h>

#include <cstddef>

#include "gapcount/kernels/kernels.hpp"

namespace gapcount::kernels::avx2 {

void discriminants(std::span<const double> a, std::span<const double> b,
                   std::span<const double> lambdas, std::span<double> out) {
  const std::size_t p = a.size();
  const std::size_t m = lambdas.size();
  std::size_t j = 0;
  for (; j + 4 <= m; j += 4) {
    const __m256d lam = _mm256_loadu_pd(lambdas.data() + j);
    __m256d u_cur = _mm256_set1_pd(1.0), u_prev = _mm256_setzero_pd();
    __m256d v_cur = _mm256_setzero_pd(), v_prev = _mm256_set1_pd(1.0);
    for (std::size_t k = 0; k < p; ++k) {
      const __m256d a_prev = _mm256_set1_pd(a[(k + p - 1) % p]);
      const __m256d a_k = _mm256_set1_pd(a[k]);
      const __m256d t = _mm256_sub_pd(lam, _mm256_set1_pd(b[k]));
      const __m256d u_next =
          _mm256_div_pd(_mm256_sub_pd(_mm256_mul_pd(t, u_cur), _mm256_mul_pd(a_prev, u_prev)), a_k);
      const __m256d v_next =
          _mm256_div_pd(_mm256_sub_pd(_mm256_mul_pd(t, v_cur), _mm256_mul_pd(a_prev, v_prev)), a_k);
      u_prev = u_cur;
      u_cur = u_next;
      v_prev = v_cur;
      v_cur = v_next;
    }
    _mm256_storeu_pd(out.data() + j, _mm256_add_pd(u_cur, v_prev));
  }
  if (j < m) scalar::discriminants(a, b, lambdas.subspan(j), out.subspan(j));
}

}  // namespace gapcount::kernels::avx2
