#include <arm_neon.h>

#include <cstddef>

#include "gapcount/kernels/kernels.hpp"

namespace gapcount::kernels::neon {

void discriminants(std::span<const double> a, std::span<const double> b,
                   std::span<const double> lambdas, std::span<double> out) {
  const std::size_t p = a.size();
  const std::size_t m = lambdas.size();
  std::size_t j = 0;
  for (; j + 2 <= m; j += 2) {
    const float64x2_t lam = vld1q_f64(lambdas.data() + j);
    float64x2_t u_cur = vdupq_n_f64(1.0), u_prev = vdupq_n_f64(0.0);
    float64x2_t v_cur = vdupq_n_f64(0.0), v_prev = vdupq_n_f64(1.0);
    for (std::size_t k = 0; k < p; ++k) {
      const float64x2_t a_prev = vdupq_n_f64(a[(k + p - 1) % p]);
      const float64x2_t a_k = vdupq_n_f64(a[k]);
      const float64x2_t t = vsubq_f64(lam, vdupq_n_f64(b[k]));
      const float64x2_t u_next =
          vdivq_f64(vsubq_f64(vmulq_f64(t, u_cur), vmulq_f64(a_prev, u_prev)), a_k);
      const float64x2_t v_next =
          vdivq_f64(vsubq_f64(vmulq_f64(t, v_cur), vmulq_f64(a_prev, v_prev)), a_k);
      u_prev = u_cur;
      u_cur = u_next;
      v_prev = v_cur;
      v_cur = v_next;
    }
    vst1q_f64(out.data() + j, vaddq_f64(u_cur, v_prev));
  }
  if (j < m) scalar::discriminants(a, b, lambdas.subspan(j), out.subspan(j));
}

}  // namespace gapcount::kernels::neon
