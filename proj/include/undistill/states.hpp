#pragma once

#include <cstddef>
#include <vector>

#include "undistill/kernels.hpp"

namespace undistill {

using Dims = std::vector<std::size_t>;

std::size_t total_dim(const Dims& dims);

/// Positive unit-trace Hermitian matrix over a tensor product of subsystems.
///
/// Subsystems are ordered left to right as tensor factors; the flat index of
/// (i_0, ..., i_{n-1}) is row-major, i.e. the last subsystem varies fastest.
/// The constructor validates Hermiticity, unit trace and positivity, each to
/// 1e-10, and throws InvalidState otherwise.
class DensityMatrix {
 public:
  static constexpr double kValidationTol = 1e-10;

  DensityMatrix(Dims dims, ComplexMatrix matrix);

  static DensityMatrix from_pure(Dims dims, const ComplexVector& psi);

  const Dims& dims() const { return dims_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  std::size_t num_subsystems() const { return dims_.size(); }

 private:
  Dims dims_;
  ComplexMatrix matrix_;
};

/// Unit vector over A (x) B (x) E. Norm is checked to 1e-12.
class TripartitePureState {
 public:
  static constexpr double kNormTol = 1e-12;

  TripartitePureState(Dims dims, ComplexVector amplitudes);

  const Dims& dims() const { return dims_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  std::size_t d_a() const { return dims_[0]; }
  std::size_t d_b() const { return dims_[1]; }
  std::size_t d_e() const { return dims_[2]; }

  /// rho_AB = Tr_E |psi><psi|
  DensityMatrix rho_ab() const;
  /// rho_AE = Tr_B |psi><psi|, dims [d_A, d_E]
  DensityMatrix rho_ae() const;

  /// Amplitudes with the A index fixed to `a`, reshaped to d_B x d_E.
  ComplexMatrix a_column(std::size_t a) const;

 private:
  Dims dims_;
  ComplexVector amplitudes_;
};

namespace states {

/// Keeps the listed subsystems (any order, no duplicates); output is ordered
/// by increasing subsystem index.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep);

/// Transpose on one tensor factor. An exact involution.
ComplexMatrix partial_transpose(const ComplexMatrix& m, const Dims& dims, std::size_t subsystem);
ComplexMatrix partial_transpose(const DensityMatrix& rho, std::size_t subsystem);

struct PptVerdict {
  bool ppt = false;
  double witness = 0.0;   // smallest eigenvalue of the partial transpose
  bool marginal = false;  // |witness| < 10 * tol
};

/// Bipartite PPT test on the second factor.
PptVerdict is_ppt(const DensityMatrix& rho, double tol = 1e-9);

/// -Tr rho log2 rho; eigenvalues at or below the rank cutoff contribute 0.
double von_neumann_entropy(const DensityMatrix& rho, double rank_tol = 1e-10);
double von_neumann_entropy(const ComplexMatrix& m, double rank_tol = 1e-10);

/// S(rho_B) - S(rho_AB), where B is the second factor.
double coherent_information(const DensityMatrix& rho_ab, double rank_tol = 1e-10);

/// Canonical purification sum_i sqrt(lambda_i) |e_i>_AB |i>_E over the
/// eigenvalues above the rank cutoff, descending. d_E = numerical rank.
TripartitePureState purify(const DensityMatrix& rho_ab, double rank_tol = 1e-10);

/// rho_AE of the canonical purification.
DensityMatrix complement(const DensityMatrix& rho_ab, double rank_tol = 1e-10);

/// Unnormalized Tr_A[(|phi><phi| (x) 1) rho_AB]. Throws NotNormalized unless
/// ||phi|| = 1 within 1e-9, DimensionMismatch if phi does not live on A.
ComplexMatrix conditional_marginal(const DensityMatrix& rho_ab, const ComplexVector& phi);

/// Numerical rank of v reshaped to d_left x d_right.
std::size_t schmidt_rank(const ComplexVector& v, std::size_t d_left, std::size_t d_right,
                         double rank_tol = 1e-10);

}  // namespace states
}  // namespace undistill
