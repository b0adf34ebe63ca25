#include "undistill/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "undistill/error.hpp"

namespace undistill {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNotHermitian: return "NotHermitian";
    case ErrorKind::kNonConvergence: return "NonConvergence";
    case ErrorKind::kBadSubsystemSpec: return "BadSubsystemSpec";
    case ErrorKind::kNotNormalized: return "NotNormalized";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kNotTracePreserving: return "NotTracePreserving";
    case ErrorKind::kBadParameter: return "BadParameter";
    case ErrorKind::kPreconditionRankNotLow: return "PreconditionRankNotLow";
    case ErrorKind::kBadSpec: return "BadSpec";
    case ErrorKind::kInvalidState: return "InvalidState";
    case ErrorKind::kParse: return "ParseError";
  }
  return "Error";
}

ComplexMatrix HermitianSpectrum::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

namespace kernels {

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool all_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::kDimensionMismatch, "max_abs_diff: shapes differ");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

HermitianSpectrum hermitian_eig(const ComplexMatrix& m, double symm_tol) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::kNotHermitian, "matrix is not square");
  }
  if (!all_finite(m)) {
    throw Error(ErrorKind::kNotHermitian, "matrix has non-finite entries");
  }
  const double defect = hermiticity_defect(m);
  if (defect > symm_tol) {
    throw Error(ErrorKind::kNotHermitian,
                "max |m - m^dagger| = " + std::to_string(defect) + " exceeds tolerance");
  }
  HermitianSpectrum out;
  if (m.rows() == 0) return out;

  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::kNonConvergence, "self-adjoint eigensolver failed");
  }
  // Eigen returns ascending order; a stable reverse keeps ties deterministic.
  const Eigen::Index n = sym.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return solver.eigenvalues()(a) > solver.eigenvalues()(b);
  });
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = solver.eigenvalues()(order[static_cast<std::size_t>(k)]);
    out.eigenvectors.col(k) = solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

double rank_cutoff(const RealVector& descending_eigenvalues, double rank_tol) {
  if (descending_eigenvalues.size() == 0) return 0.0;
  return rank_tol * std::max(descending_eigenvalues(0), 0.0);
}

std::size_t rank_of_spectrum(const RealVector& descending_eigenvalues, double rank_tol) {
  const double cut = rank_cutoff(descending_eigenvalues, rank_tol);
  std::size_t rank = 0;
  for (Eigen::Index k = 0; k < descending_eigenvalues.size(); ++k) {
    if (descending_eigenvalues(k) > cut) ++rank;
  }
  return rank;
}

std::size_t numerical_rank(const ComplexMatrix& m, double rank_tol, double symm_tol) {
  return rank_of_spectrum(hermitian_eig(m, symm_tol).eigenvalues, rank_tol);
}

double min_positive_eigenvalue(const ComplexMatrix& m, double rank_tol, double symm_tol) {
  const auto spec = hermitian_eig(m, symm_tol);
  const std::size_t rank = rank_of_spectrum(spec.eigenvalues, rank_tol);
  if (rank == 0) return 0.0;
  return spec.eigenvalues(static_cast<Eigen::Index>(rank) - 1);
}

namespace {

// Sum over the support of f(lambda) |v><v|.
template <class F>
ComplexMatrix spectral_function_on_support(const ComplexMatrix& m, double rank_tol,
                                           double symm_tol, F f) {
  const auto spec = hermitian_eig(m, symm_tol);
  const auto rank = static_cast<Eigen::Index>(rank_of_spectrum(spec.eigenvalues, rank_tol));
  const auto vecs = spec.eigenvectors.leftCols(rank);
  Eigen::VectorXcd weights(rank);
  for (Eigen::Index k = 0; k < rank; ++k) weights(k) = f(spec.eigenvalues(k));
  ComplexMatrix out = vecs * weights.asDiagonal() * vecs.adjoint();
  return 0.5 * (out + out.adjoint());
}

}  // namespace

ComplexMatrix support_projector(const ComplexMatrix& m, double rank_tol, double symm_tol) {
  return spectral_function_on_support(m, rank_tol, symm_tol, [](double) { return 1.0; });
}

ComplexMatrix pinv_sqrt(const ComplexMatrix& m, double rank_tol, double symm_tol) {
  return spectral_function_on_support(m, rank_tol, symm_tol,
                                      [](double lambda) { return 1.0 / std::sqrt(lambda); });
}

std::size_t singular_rank(const ComplexMatrix& m, double rank_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const RealVector s2 = svd.singularValues().cwiseAbs2();  // already descending
  return rank_of_spectrum(s2, rank_tol);
}

}  // namespace kernels
}  // namespace undistill
