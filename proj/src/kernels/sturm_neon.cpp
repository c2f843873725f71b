#include <arm_neon.h>

#include <cstddef>

#include "gapcount/kernels/kernels.hpp"

namespace gapcount::kernels::neon {

void sturm_counts(const SturmInput& in, std::span<const double> shifts,
                  std::span<std::int32_t> counts, std::span<std::uint8_t> breakdown) {
  const std::size_t n = in.diag.size();
  const std::size_t m = shifts.size();
  if (n == 0) {
    scalar::sturm_counts(in, shifts, counts, breakdown);
    return;
  }
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t pivmin = vdupq_n_f64(in.pivmin);
  const float64x2_t neg_pivmin = vdupq_n_f64(-in.pivmin);

  std::size_t k = 0;
  for (; k + 2 <= m; k += 2) {
    const float64x2_t s = vld1q_f64(shifts.data() + k);
    int64x2_t cnt = vdupq_n_s64(0);
    uint64x2_t bd = vdupq_n_u64(0);

    float64x2_t d = vsubq_f64(vdupq_n_f64(in.diag[0]), s);
    uint64x2_t small = vcltq_f64(vabsq_f64(d), pivmin);
    d = vbslq_f64(small, neg_pivmin, d);
    bd = vorrq_u64(bd, small);
    cnt = vsubq_s64(cnt, vreinterpretq_s64_u64(vcltq_f64(d, zero)));

    for (std::size_t i = 1; i < n; ++i) {
      const float64x2_t t = vsubq_f64(vdupq_n_f64(in.diag[i]), s);
      const float64x2_t q = vdivq_f64(vdupq_n_f64(in.off_sq[i - 1]), d);
      d = vsubq_f64(t, q);
      small = vcltq_f64(vabsq_f64(d), pivmin);
      d = vbslq_f64(small, neg_pivmin, d);
      bd = vorrq_u64(bd, small);
      cnt = vsubq_s64(cnt, vreinterpretq_s64_u64(vcltq_f64(d, zero)));
    }
    counts[k] = static_cast<std::int32_t>(vgetq_lane_s64(cnt, 0));
    counts[k + 1] = static_cast<std::int32_t>(vgetq_lane_s64(cnt, 1));
    breakdown[k] = vgetq_lane_u64(bd, 0) != 0;
    breakdown[k + 1] = vgetq_lane_u64(bd, 1) != 0;
  }
  if (k < m) scalar::sturm_counts(in, shifts.subspan(k), counts.subspan(k), breakdown.subspan(k));
}

}  // namespace gapcount::kernels::neon
