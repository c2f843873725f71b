#include <cmath>
#include <cstddef>

#include "gapcount/kernels/kernels.hpp"

namespace gapcount::kernels::scalar {

namespace {

inline void sturm_one(const SturmInput& in, double shift, std::int32_t& count,
                      std::uint8_t& breakdown) {
  const std::size_t n = in.diag.size();
  std::int32_t c = 0;
  std::uint8_t bd = 0;
  double d = in.diag[0] - shift;
  if (std::fabs(d) < in.pivmin) {
    d = -in.pivmin;
    bd = 1;
  }
  c += d < 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double t = in.diag[i] - shift;
    const double q = in.off_sq[i - 1] / d;
    d = t - q;
    if (std::fabs(d) < in.pivmin) {
      d = -in.pivmin;
      bd = 1;
    }
    c += d < 0.0;
  }
  count = c;
  breakdown = bd;
}

}  // namespace

void sturm_counts(const SturmInput& in, std::span<const double> shifts,
                  std::span<std::int32_t> counts, std::span<std::uint8_t> breakdown) {
  if (in.diag.empty()) {
    for (std::size_t k = 0; k < shifts.size(); ++k) {
      counts[k] = 0;
      breakdown[k] = 0;
    }
    return;
  }
  for (std::size_t k = 0; k < shifts.size(); ++k) sturm_one(in, shifts[k], counts[k], breakdown[k]);
}

}  // namespace gapcount::kernels::scalar
