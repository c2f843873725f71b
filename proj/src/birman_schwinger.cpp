#include "gapcount/birman_schwinger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "gapcount/dense.hpp"
#include "gapcount/error.hpp"

namespace gapcount {

namespace {

constexpr double kSupportThreshold = 1e-14;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double spectral_norm(const Eigen::MatrixXd& s) {
  if (s.size() == 0) return 0.0;
  return symmetric_eigenvalues(s).cwiseAbs().maxCoeff();
}

void require_psd(const Eigen::MatrixXd& b, std::string_view what) {
  require_symmetric(b, what);
  if (b.size() == 0) return;
  const Eigen::VectorXd ev = symmetric_eigenvalues(b);
  const double norm = ev.cwiseAbs().maxCoeff();
  if (ev.minCoeff() < -1e-12 * std::max(1.0, norm))
    throw InputError(std::string(what) + ": matrix is not positive semidefinite (min eigenvalue " +
                     fmt(ev.minCoeff()) + ")");
}

// Rows of b with diagonal plus row norm above the support threshold.
std::vector<std::size_t> dense_support(const Eigen::MatrixXd& b) {
  std::vector<std::size_t> support;
  if (b.size() == 0) return support;
  const double norm = spectral_norm(b);
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    const double w = std::fabs(b(i, i)) + b.row(i).norm();
    if (w >= kSupportThreshold * norm && w > 0.0) support.push_back(static_cast<std::size_t>(i));
  }
  return support;
}

Eigen::MatrixXd principal(const Eigen::MatrixXd& m, const std::vector<std::size_t>& idx) {
  const auto s = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd out(s, s);
  for (Eigen::Index i = 0; i < s; ++i)
    for (Eigen::Index j = 0; j < s; ++j)
      out(i, j) = m(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(i)]),
                    static_cast<Eigen::Index>(idx[static_cast<std::size_t>(j)]));
  return out;
}

double relative_asymmetry(const Eigen::MatrixXd& k) {
  if (k.size() == 0) return 0.0;
  const double scale = std::max(std::numeric_limits<double>::min(), k.cwiseAbs().maxCoeff());
  return (k - k.transpose()).cwiseAbs().maxCoeff() / scale;
}

// root * M * root on the support of b, where M is the support block of the
// resolvent-like operator produced by `block`.
template <class Block>
BSOperator sandwich(const Eigen::MatrixXd& b, double e, Block block) {
  BSOperator op;
  op.energy = e;
  op.support = dense_support(b);
  if (op.support.empty()) {
    op.kernel = Eigen::MatrixXd(0, 0);
    return op;
  }
  const Eigen::MatrixXd root = psd_sqrt(principal(b, op.support));
  const Eigen::MatrixXd k = root * block(op.support) * root;
  op.raw_asymmetry = relative_asymmetry(k);
  op.kernel = 0.5 * (k + k.transpose());
  return op;
}

// Columns `idx` of (m)^{-1}, restricted to rows `idx`, by an LU solve.
Eigen::MatrixXd inverse_block(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu, Eigen::Index n,
                              const std::vector<std::size_t>& idx) {
  const auto s = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, s);
  for (Eigen::Index j = 0; j < s; ++j) rhs(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(j)]), j) = 1.0;
  const Eigen::MatrixXd x = lu.solve(rhs);
  Eigen::MatrixXd out(s, s);
  for (Eigen::Index i = 0; i < s; ++i) out.row(i) = x.row(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(i)]));
  return out;
}

double distance_to_spectrum(const Eigen::VectorXd& ev, double e) {
  double d = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ev.size(); ++i) d = std::min(d, std::fabs(ev[i] - e));
  return d;
}

void check_proximity(const Eigen::VectorXd& ev, double e, double tol) {
  const double d = distance_to_spectrum(ev, e);
  if (d <= tol)
    throw ResolventProximityError("energy " + fmt(e) + " is within " + fmt(tol) + " of the spectrum (distance " +
                                      fmt(d) + ")",
                                  e, d);
}

// K(e) = B^{1/2} (e - A)^{-1} B^{1/2} for dense A whose spectrum is known.
BSOperator dense_kernel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double e) {
  return sandwich(b, e, [&](const std::vector<std::size_t>& idx) {
    const Eigen::MatrixXd shifted = e * Eigen::MatrixXd::Identity(a.rows(), a.cols()) - a;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(shifted);
    return inverse_block(lu, a.rows(), idx);
  });
}

std::size_t count_kernel_ge(const BSOperator& op, double threshold) {
  if (op.kernel.size() == 0) return 0;
  // Eigenvalues within rounding of the threshold are counted, so the bound
  // side never loses a marginal eigenvalue.
  const double slack = 1e-9 * std::max(1.0, std::fabs(threshold));
  return dense_count_ge(op.kernel, threshold, slack);
}

}  // namespace

BSOperator bs_operator(TridiagonalView a, std::span<const double> b_diag, double e, double tol) {
  if (b_diag.size() != a.size()) throw InputError("bs_operator: weight length differs from the matrix size");
  double bmax = 0.0;
  for (double v : b_diag) {
    if (v < 0.0) throw InputError("bs_operator: negative diagonal weight");
    bmax = std::max(bmax, v);
  }
  if (a.size() > 0) {
    const CountResult near = count_in_interval(a, {e - tol, e + tol}, tol * 1e-3);
    if (near.count > 0 || near.lo_flag || near.hi_flag) {
      const std::vector<double> close = eigs_in_interval(a, {e - tol, e + tol}, tol * 1e-3);
      double d = tol;
      for (double l : close) d = std::min(d, std::fabs(l - e));
      throw ResolventProximityError("energy " + fmt(e) + " is within " + fmt(tol) + " of the spectrum", e, d);
    }
  }

  BSOperator op;
  op.energy = e;
  for (std::size_t i = 0; i < b_diag.size(); ++i)
    if (b_diag[i] > kSupportThreshold * bmax && b_diag[i] > 0.0) op.support.push_back(i);
  const auto s = static_cast<Eigen::Index>(op.support.size());
  Eigen::MatrixXd k(s, s);
  for (Eigen::Index j = 0; j < s; ++j) {
    const std::size_t col = op.support[static_cast<std::size_t>(j)];
    const std::vector<double> g = resolvent_column(a, e, col);  // (A - e)^{-1} e_col
    for (Eigen::Index i = 0; i < s; ++i) {
      const std::size_t row = op.support[static_cast<std::size_t>(i)];
      k(i, j) = -std::sqrt(b_diag[row]) * g[row] * std::sqrt(b_diag[col]);
    }
  }
  op.raw_asymmetry = relative_asymmetry(k);
  op.kernel = 0.5 * (k + k.transpose());
  return op;
}

BSOperator bs_operator(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double e, double tol) {
  require_symmetric(a, "bs_operator A");
  if (b.rows() != a.rows()) throw InputError("bs_operator: B and A differ in size");
  require_psd(b, "bs_operator B");
  if (a.rows() > 0) check_proximity(symmetric_eigenvalues(a), e, tol);
  return dense_kernel(a, b, e);
}

Prop21Report verify_prop21(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, Interval gap, double e,
                           std::span<const double> mu_grid, double tol) {
  require_symmetric(a, "verify_prop21 A");
  if (b.rows() != a.rows()) throw InputError("verify_prop21: B and A differ in size");
  require_psd(b, "verify_prop21 B");
  if (!(gap.lo < gap.hi)) throw InputError("verify_prop21: empty gap");
  if (!gap.contains_open(e)) throw InputError("verify_prop21: energy is not inside the gap");
  const double scale_a = std::max(1.0, spectral_norm(a));
  if (a.rows() > 0) {
    // Eigenvalues at the gap ends may land a rounding error inside.
    const double slack = 1e-12 * scale_a;
    const CountResult inside = dense_count_in_interval(a, {gap.lo + slack, gap.hi - slack}, slack);
    if (inside.count > 0) throw InputError("verify_prop21: A has " + std::to_string(inside.count) +
                                           " eigenvalue(s) inside the gap");
  }

  Prop21Report rep;
  rep.energy = e;
  const BSOperator op = dense_kernel(a, b, e);
  rep.kernel_eigenvalues = symmetric_eigenvalues(op.kernel);
  const double knorm = rep.kernel_eigenvalues.size() ? rep.kernel_eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  const double bnorm = spectral_norm(b);
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd shifted = e * Eigen::MatrixXd::Identity(n, n) - a;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(shifted);

  for (double mu : mu_grid) {
    if (mu == 0.0) continue;
    Prop21Check c;
    c.mu = mu;
    const SymmetricEigen ce = symmetric_eigen(a + mu * b);
    const double op_tol = tol * std::max(1.0, scale_a + std::fabs(mu) * bnorm);
    std::vector<Eigen::Index> hits;
    for (Eigen::Index k = 0; k < ce.values.size(); ++k)
      if (std::fabs(ce.values[k] - e) <= op_tol) hits.push_back(k);
    c.operator_multiplicity = hits.size();

    const double target = 1.0 / mu;
    const double ker_tol = tol * std::max({1.0, knorm, std::fabs(target)});
    for (Eigen::Index k = 0; k < rep.kernel_eigenvalues.size(); ++k)
      if (std::fabs(rep.kernel_eigenvalues[k] - target) <= ker_tol) ++c.kernel_multiplicity;

    for (Eigen::Index k : hits) {
      const Eigen::VectorXd phi = ce.vectors.col(k);
      const Eigen::VectorXd lhs = lu.solve(b * phi);
      const double res = (lhs - phi / mu).norm() / (phi.norm() / std::fabs(mu));
      c.eigenvector_residual = std::max(c.eigenvector_residual, res);
    }
    c.consistent = c.operator_multiplicity == c.kernel_multiplicity && c.eigenvector_residual <= 1e-6;
    if (!c.consistent) ++rep.violations;
    if (c.operator_multiplicity > 0) ++rep.nontrivial;
    rep.max_eigenvector_residual = std::max(rep.max_eigenvector_residual, c.eigenvector_residual);
    rep.checks.push_back(c);
  }
  return rep;
}

std::string to_string(BoundVariant v) {
  switch (v) {
    case BoundVariant::kT11: return "t11";
    case BoundVariant::kT31: return "t31";
    case BoundVariant::kT32: return "t32";
  }
  return "?";
}

BoundVariant parse_bound_variant(const std::string& name) {
  if (name == "t11") return BoundVariant::kT11;
  if (name == "t31") return BoundVariant::kT31;
  if (name == "t32") return BoundVariant::kT32;
  throw InputError("unknown bound variant '" + name + "' (expected t11, t31 or t32)");
}

double default_guard(Interval gap) { return 1e-6 * gap.width(); }

BoundReport gap_bound(BoundVariant variant, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b_plus,
                      const Eigen::MatrixXd& b_minus, Interval gap, double e0, double guard) {
  require_symmetric(a, "gap_bound A");
  if (b_plus.rows() != a.rows() || b_minus.rows() != a.rows())
    throw InputError("gap_bound: perturbation size differs from A");
  require_psd(b_plus, "gap_bound B_plus");
  require_psd(b_minus, "gap_bound B_minus");
  const double x = gap.lo, y = gap.hi;
  if (!(x < y)) throw InputError("gap_bound: empty gap");
  const double e1 = 0.5 * (x + y);

  const Eigen::VectorXd spec_a = symmetric_eigenvalues(a);
  const double scale = std::max(1.0, spec_a.size() ? spec_a.cwiseAbs().maxCoeff() : 0.0);
  for (Eigen::Index i = 0; i < spec_a.size(); ++i)
    if (spec_a[i] > x + 1e-12 * scale && spec_a[i] < y - 1e-12 * scale)
      throw InputError("gap_bound: A has the eigenvalue " + fmt(spec_a[i]) + " inside the gap");
  check_proximity(spec_a, e0, guard);

  const bool lower = variant != BoundVariant::kT32;
  if (lower && !(x < e0 && e0 < e1))
    throw InputError("gap_bound: " + to_string(variant) + " needs x < e0 < (x+y)/2, got e0 = " + fmt(e0));
  if (!lower && !(e1 < e0 && e0 < y))
    throw InputError("gap_bound: t32 needs (x+y)/2 < e0 < y, got e0 = " + fmt(e0));

  BoundReport rep;
  rep.variant = variant;
  rep.x = x;
  rep.y = y;
  rep.e0 = e0;
  rep.e1 = e1;
  rep.target = lower ? OpenInterval{e0, e1} : OpenInterval{e1, e0};

  const Eigen::MatrixXd c = a + b_plus - b_minus;
  const double cscale = std::max(1.0, spectral_norm(c));
  rep.lhs = dense_count_in_interval(0.5 * (c + c.transpose()), rep.target, 1e-12 * cscale).count;

  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  switch (variant) {
    case BoundVariant::kT11: {
      rep.terms.push_back({"kernel_plus", count_kernel_ge(dense_kernel(a, b_plus, e0), 1.0)});
      const double half = 0.5 * (y - x);
      std::size_t big = 0;
      if (n > 0) {
        const Eigen::VectorXd ev = symmetric_eigenvalues(b_minus);
        for (Eigen::Index i = 0; i < ev.size(); ++i)
          if (ev[i] >= half - 1e-9 * std::max(1.0, half)) ++big;
      }
      rep.terms.push_back({"minus_large", big});
      break;
    }
    case BoundVariant::kT31: {
      rep.terms.push_back({"kernel_plus", count_kernel_ge(dense_kernel(a, b_plus, e0), 1.0)});
      const double q = spec_a.size() ? spec_a.minCoeff() : 0.0;
      rep.q = q;
      // A - q + 1 >= 1, so this kernel is positive semidefinite.
      const BSOperator shifted = sandwich(b_minus, q - 1.0, [&](const std::vector<std::size_t>& idx) {
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(a - (q - 1.0) * id);
        return inverse_block(lu, n, idx);
      });
      rep.terms.push_back({"kernel_minus_shifted", count_kernel_ge(shifted, 0.5 * (y - x) / (y - q + 1.0))});
      break;
    }
    case BoundVariant::kT32: {
      const BSOperator km = sandwich(b_minus, e0, [&](const std::vector<std::size_t>& idx) {
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(a - e0 * id);
        return inverse_block(lu, n, idx);
      });
      rep.terms.push_back({"kernel_minus", count_kernel_ge(km, 1.0)});
      // Part of the spectrum of A - B_minus below x, weighted by (e1 - l)^{-1} > 0.
      // Eigenvalues within rounding of x are kept, which only enlarges the term.
      const SymmetricEigen cm = symmetric_eigen(a - b_minus);
      Eigen::MatrixXd below = Eigen::MatrixXd::Zero(n, n);
      const double cut = x + 1e-12 * std::max(1.0, cm.values.size() ? cm.values.cwiseAbs().maxCoeff() : 0.0);
      for (Eigen::Index k = 0; k < cm.values.size(); ++k) {
        if (cm.values[k] >= cut) continue;
        const Eigen::VectorXd v = cm.vectors.col(k);
        below += (v * v.transpose()) / (e1 - cm.values[k]);
      }
      const BSOperator cross = sandwich(b_plus, e1, [&](const std::vector<std::size_t>& idx) {
        return principal(below, idx);
      });
      rep.terms.push_back({"cross", count_kernel_ge(cross, 1.0)});
      break;
    }
  }
  rep.rhs = 0;
  for (const BoundTerm& t : rep.terms) rep.rhs += t.value;
  rep.satisfied = rep.lhs <= rep.rhs;
  return rep;
}

BoundReport gap_bound(BoundVariant variant, const TruncatedMatrix& a, const SplitPerturbation& split, Interval gap,
                      double e0, double guard) {
  if (!(split.window == a.window())) throw InputError("gap_bound: split window differs from the truncation window");
  return gap_bound(variant, to_dense(a.view()), split.plus_dense(), split.minus_dense(), gap, e0, guard);
}

Decomposition bs_decompose(const Eigen::MatrixXd& b_minus, const Eigen::MatrixXd& c_plus, double e1, double y,
                           double tol) {
  require_symmetric(c_plus, "bs_decompose C_plus");
  if (b_minus.rows() != c_plus.rows()) throw InputError("bs_decompose: size mismatch");
  require_psd(b_minus, "bs_decompose B_minus");
  if (!(e1 < y)) throw InputError("bs_decompose: needs e1 < y");

  const Eigen::Index n = c_plus.rows();
  const SymmetricEigen ce = symmetric_eigen(c_plus);
  const double scale = std::max(1.0, n ? ce.values.cwiseAbs().maxCoeff() : 0.0);
  check_proximity(ce.values, e1, tol * scale);

  Decomposition d;
  const Eigen::MatrixXd root = psd_sqrt(b_minus);
  Eigen::MatrixXd p1 = Eigen::MatrixXd::Zero(n, n), p2 = p1, p3 = p1;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double l = ce.values[k];
    const Eigen::VectorXd v = ce.vectors.col(k);
    const Eigen::MatrixXd piece = (v * v.transpose()) / (l - e1);
    if (l < e1) {
      p1 += piece;
    } else if (l < y - tol * scale) {
      p2 += piece;
      ++d.n2;
    } else {
      p3 += piece;
    }
  }
  auto sym = [](const Eigen::MatrixXd& m) -> Eigen::MatrixXd { return 0.5 * (m + m.transpose()); };
  d.d1 = sym(root * p1 * root);
  d.d2 = sym(root * p2 * root);
  d.d3 = sym(root * p3 * root);
  if (n > 0) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(c_plus - e1 * Eigen::MatrixXd::Identity(n, n));
    d.full = sym(root * lu.solve(root));
  } else {
    d.full = Eigen::MatrixXd(0, 0);
  }

  const double bscale = std::max(1.0, spectral_norm(b_minus));
  const double dscale = std::max(1.0, n ? d.full.cwiseAbs().maxCoeff() : 0.0);
  d.d1_max_eigenvalue = n ? symmetric_eigenvalues(d.d1).maxCoeff() : 0.0;
  d.d1_nonpositive = d.d1_max_eigenvalue <= tol * dscale;
  d.d2_rank = n ? numerical_rank(d.d2) : 0;
  d.d2_rank_ok = static_cast<std::size_t>(d.d2_rank) <= d.n2;
  d.d3_excess = n ? symmetric_eigenvalues(d.d3 - b_minus / (y - e1)).maxCoeff() : 0.0;
  d.d3_dominated = d.d3_excess <= tol * bscale;
  d.completeness_error = n ? (d.d1 + d.d2 + d.d3 - d.full).cwiseAbs().maxCoeff() / dscale : 0.0;
  d.complete = d.completeness_error <= 1e-10;
  return d;
}

namespace {

Eigen::MatrixXd random_orthogonal(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
}

// Spectrum outside (x, y) with both endpoints present.
Eigen::MatrixXd engineered_matrix(std::mt19937_64& rng, Eigen::Index n, Interval gap) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double w = gap.width();
  Eigen::VectorXd lam(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i == 0) {
      lam[i] = gap.lo;
    } else if (i == 1) {
      lam[i] = gap.hi;
    } else if (u(rng) < 0.5) {
      lam[i] = gap.lo - 3.0 * w * u(rng);
    } else {
      lam[i] = gap.hi + 3.0 * w * u(rng);
    }
  }
  const Eigen::MatrixXd q = random_orthogonal(rng, n);
  const Eigen::MatrixXd a = q * lam.asDiagonal() * q.transpose();
  return 0.5 * (a + a.transpose());
}

Eigen::MatrixXd random_psd(std::mt19937_64& rng, Eigen::Index n, Eigen::Index rank, double norm) {
  if (rank == 0) return Eigen::MatrixXd::Zero(n, n);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd f(n, rank);
  for (Eigen::Index j = 0; j < rank; ++j)
    for (Eigen::Index i = 0; i < n; ++i) f(i, j) = g(rng);
  Eigen::MatrixXd b = f * f.transpose();
  b = 0.5 * (b + b.transpose());
  const double s = symmetric_eigenvalues(b).maxCoeff();
  return b * (norm / s);
}

Eigen::Index random_dim(std::mt19937_64& rng, const InstanceOptions& o) {
  if (o.dim_min < 2 || o.dim_max < o.dim_min) throw InputError("instance dimensions must satisfy 2 <= min <= max");
  std::uniform_int_distribution<std::size_t> d(o.dim_min, o.dim_max);
  return static_cast<Eigen::Index>(d(rng));
}

}  // namespace

EngineeredInstance make_instance(std::uint64_t seed, const InstanceOptions& opts, BoundVariant variant) {
  if (!(opts.gap.lo < opts.gap.hi)) throw InputError("instance gap is empty");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  EngineeredInstance inst;
  inst.seed = seed;
  inst.gap = opts.gap;
  const Eigen::Index n = random_dim(rng, opts);
  inst.a = engineered_matrix(rng, n, opts.gap);
  const Eigen::Index max_rank = std::min<Eigen::Index>(n, 6);
  std::uniform_int_distribution<Eigen::Index> r(1, max_rank);  // both parts nonzero: B is indefinite
  const double w = opts.gap.width();
  const Eigen::Index rp = r(rng), rm = r(rng);
  inst.b_plus = random_psd(rng, n, rp, w * (0.1 + 3.9 * u(rng)));
  inst.b_minus = random_psd(rng, n, rm, w * (0.1 + 3.9 * u(rng)));
  const double e1 = 0.5 * (opts.gap.lo + opts.gap.hi);
  const double frac = opts.e0_fraction ? *opts.e0_fraction : 0.05 + 0.9 * u(rng);
  inst.e0 = variant == BoundVariant::kT32 ? opts.gap.hi - frac * (opts.gap.hi - e1)
                                          : opts.gap.lo + frac * (e1 - opts.gap.lo);
  return inst;
}

Prop21Instance make_prop21_instance(std::uint64_t seed, const InstanceOptions& opts, std::size_t random_mu) {
  if (!(opts.gap.lo < opts.gap.hi)) throw InputError("instance gap is empty");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Prop21Instance inst;
  inst.seed = seed;
  inst.gap = opts.gap;
  const Eigen::Index n = random_dim(rng, opts);
  inst.a = engineered_matrix(rng, n, opts.gap);
  const double w = opts.gap.width();
  inst.b = random_psd(rng, n, std::min<Eigen::Index>(2, n), w * (0.5 + u(rng)));
  const double frac = opts.e0_fraction ? *opts.e0_fraction : 0.1 + 0.8 * u(rng);
  inst.e = opts.gap.lo + frac * w;
  for (std::size_t i = 0; i < random_mu; ++i) {
    double mu = 0.0;
    while (mu == 0.0) mu = (8.0 * u(rng) - 4.0);
    inst.mu_grid.push_back(mu);
  }
  const BSOperator k = dense_kernel(inst.a, inst.b, inst.e);
  const Eigen::VectorXd kappa = symmetric_eigenvalues(k.kernel);
  for (Eigen::Index i = 0; i < kappa.size(); ++i)
    if (std::fabs(kappa[i]) > 1e-8) inst.mu_grid.push_back(1.0 / kappa[i]);
  return inst;
}

}  // namespace gapcount
