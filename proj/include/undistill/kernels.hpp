#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace undistill {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Tolerances shared by every rank, spectrum and PPT decision.
///
/// `rank_tol` is relative: an eigenvalue counts toward the rank iff it is
/// strictly greater than `rank_tol * lambda_max`. The same cutoff defines the
/// support and the "minimum positive eigenvalue", so ranks and lambda_min can
/// never disagree.
struct Tolerances {
  double rank_tol = 1e-10;
  double ppt_tol = 1e-9;
  double symm_tol = 1e-10;
};

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
struct HermitianSpectrum {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;  // column k pairs with eigenvalues[k]

  std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
  ComplexMatrix reconstruct() const;
};

namespace kernels {

/// Largest entrywise modulus of m - m^dagger.
double hermiticity_defect(const ComplexMatrix& m);

/// True iff every entry is finite.
bool all_finite(const ComplexMatrix& m);

/// Throws NotHermitian if m is not square or deviates from its adjoint by
/// more than symm_tol; NonConvergence if the solver fails. Ties keep the
/// solver's order, which is deterministic for identical input.
HermitianSpectrum hermitian_eig(const ComplexMatrix& m, double symm_tol = 1e-10);

/// Eigenvalue cutoff for a spectrum: rank_tol * max(lambda_max, 0).
double rank_cutoff(const RealVector& descending_eigenvalues, double rank_tol);

/// Number of leading eigenvalues strictly above the cutoff.
std::size_t rank_of_spectrum(const RealVector& descending_eigenvalues, double rank_tol);

std::size_t numerical_rank(const ComplexMatrix& m, double rank_tol = 1e-10,
                           double symm_tol = 1e-10);

/// Smallest eigenvalue above the rank cutoff. Zero for the zero matrix.
double min_positive_eigenvalue(const ComplexMatrix& m, double rank_tol = 1e-10,
                               double symm_tol = 1e-10);

ComplexMatrix support_projector(const ComplexMatrix& m, double rank_tol = 1e-10,
                                double symm_tol = 1e-10);

/// m^{-1/2} on the support of m, zero on its kernel.
ComplexMatrix pinv_sqrt(const ComplexMatrix& m, double rank_tol = 1e-10,
                        double symm_tol = 1e-10);

/// Rank of a rectangular matrix counted through its squared singular values
/// with the same relative cutoff as `numerical_rank`, so the Schmidt rank of a
/// vector equals the rank of either of its reduced density matrices.
std::size_t singular_rank(const ComplexMatrix& m, double rank_tol = 1e-10);

/// Kronecker product a (x) b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest entrywise modulus of a - b. Sizes must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace kernels
}  // namespace undistill
