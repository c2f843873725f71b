#include <cstddef>

#include "gapcount/kernels/kernels.hpp"

namespace gapcount::kernels::scalar {

// Propagates the two canonical solutions through one period of
//   a[k] u[k+1] = (lambda - b[k]) u[k] - a[k-1] u[k-1]
// starting from (u0, u_-1) = (1, 0) and (0, 1). The transfer matrix has
// first column (u_p, u_{p-1}) and second column (v_p, v_{p-1}).
void discriminants(std::span<const double> a, std::span<const double> b,
                   std::span<const double> lambdas, std::span<double> out) {
  const std::size_t p = a.size();
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    const double lam = lambdas[j];
    double u_cur = 1.0, u_prev = 0.0;
    double v_cur = 0.0, v_prev = 1.0;
    for (std::size_t k = 0; k < p; ++k) {
      const double a_prev = a[(k + p - 1) % p];
      const double t = lam - b[k];
      const double u_next = (t * u_cur - a_prev * u_prev) / a[k];
      const double v_next = (t * v_cur - a_prev * v_prev) / a[k];
      u_prev = u_cur;
      u_cur = u_next;
      v_prev = v_cur;
      v_cur = v_next;
    }
    out[j] = u_cur + v_prev;
  }
}

}  // namespace gapcount::kernels::scalar
