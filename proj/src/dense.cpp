#include "gapcount/dense.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gapcount/error.hpp"

namespace gapcount {

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& s) {
  if (s.rows() == 0) return {};
  const Eigen::MatrixXd sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& s) {
  if (s.rows() == 0) return {};
  const Eigen::MatrixXd sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
  return es.eigenvalues();
}

void require_symmetric(const Eigen::MatrixXd& s, std::string_view what, double rel_tol) {
  if (s.rows() != s.cols()) throw InputError(std::string(what) + ": matrix is not square");
  if (s.size() == 0) return;
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  const double asym = (s - s.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= rel_tol * scale))
    throw InputError(std::string(what) + ": matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
}

Eigen::MatrixXd psd_range_factor(const Eigen::MatrixXd& b, double rel_threshold) {
  const Eigen::Index n = b.rows();
  if (n == 0) return Eigen::MatrixXd(0, 0);
  const SymmetricEigen eig = symmetric_eigen(b);
  const double norm = eig.values.cwiseAbs().maxCoeff();
  const double cut = rel_threshold * norm;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < n; ++k)
    if (eig.values[k] > cut && eig.values[k] > 0.0) keep.push_back(k);
  Eigen::MatrixXd f(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    f.col(static_cast<Eigen::Index>(c)) = std::sqrt(eig.values[keep[c]]) * eig.vectors.col(keep[c]);
  return f;
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& b) {
  if (b.rows() == 0) return b;
  const SymmetricEigen eig = symmetric_eigen(b);
  const Eigen::VectorXd root = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * root.asDiagonal() * eig.vectors.transpose();
}

SymTridiagonal tridiagonalize(const Eigen::MatrixXd& s) {
  SymTridiagonal t;
  const Eigen::Index n = s.rows();
  if (n == 0) return t;
  if (n == 1) {
    t.diag = {s(0, 0)};
    return t;
  }
  const Eigen::MatrixXd sym = 0.5 * (s + s.transpose());
  Eigen::Tridiagonalization<Eigen::MatrixXd> tri(sym);
  const Eigen::VectorXd d = tri.diagonal();
  const Eigen::VectorXd e = tri.subDiagonal();
  t.diag.assign(d.data(), d.data() + d.size());
  t.off.assign(e.data(), e.data() + e.size());
  return t;
}

Eigen::MatrixXd to_dense(TridiagonalView t) {
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = t.diag[static_cast<std::size_t>(i)];
    if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = t.off[static_cast<std::size_t>(i)];
  }
  return m;
}

Eigen::Index numerical_rank(const Eigen::MatrixXd& s, double rel_tol) {
  if (s.rows() == 0) return 0;
  const Eigen::VectorXd ev = symmetric_eigenvalues(s);
  const double cut = rel_tol * std::max(1.0, ev.cwiseAbs().maxCoeff());
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::fabs(ev[i]) > cut) ++r;
  return r;
}

}  // namespace gapcount
