#include "undistill/states.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "undistill/error.hpp"

namespace undistill {

std::size_t total_dim(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

namespace {

void check_dims(const Dims& dims, std::size_t expected_total, const char* what) {
  if (dims.empty()) {
    throw Error(ErrorKind::kBadSubsystemSpec, std::string(what) + ": empty dims");
  }
  for (std::size_t d : dims) {
    if (d == 0) throw Error(ErrorKind::kBadSubsystemSpec, std::string(what) + ": zero dimension");
  }
  if (total_dim(dims) != expected_total) {
    throw Error(ErrorKind::kDimensionMismatch,
                std::string(what) + ": product of dims " + std::to_string(total_dim(dims)) +
                    " != size " + std::to_string(expected_total));
  }
}

// Row-major strides: the last subsystem varies fastest.
std::vector<std::size_t> strides_of(const Dims& dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t s = dims.size(); s-- > 1;) strides[s - 1] = strides[s] * dims[s];
  return strides;
}

// Flat offsets contributed by all multi-indices over `subset`.
std::vector<std::size_t> offsets_over(const Dims& dims, const std::vector<std::size_t>& strides,
                                      const std::vector<std::size_t>& subset) {
  std::vector<std::size_t> offsets{0};
  for (std::size_t s : subset) {
    std::vector<std::size_t> next;
    next.reserve(offsets.size() * dims[s]);
    for (std::size_t base : offsets) {
      for (std::size_t i = 0; i < dims[s]; ++i) next.push_back(base + i * strides[s]);
    }
    offsets = std::move(next);
  }
  return offsets;
}

}  // namespace

DensityMatrix::DensityMatrix(Dims dims, ComplexMatrix matrix) : dims_(std::move(dims)) {
  if (matrix.rows() != matrix.cols()) {
    throw Error(ErrorKind::kInvalidState, "density matrix is not square");
  }
  check_dims(dims_, static_cast<std::size_t>(matrix.rows()), "density matrix");
  if (!matrix.allFinite()) {
    throw Error(ErrorKind::kInvalidState, "density matrix has non-finite entries");
  }
  const double defect = kernels::hermiticity_defect(matrix);
  if (defect > kValidationTol) {
    throw Error(ErrorKind::kInvalidState,
                "not Hermitian: max |m - m^dagger| = " + std::to_string(defect));
  }
  matrix_ = 0.5 * (matrix + matrix.adjoint());
  const Complex trace = matrix_.trace();
  if (std::abs(trace - Complex(1.0, 0.0)) > kValidationTol) {
    throw Error(ErrorKind::kInvalidState,
                "trace is " + std::to_string(trace.real()) + ", expected 1");
  }
  const auto spec = kernels::hermitian_eig(matrix_, kValidationTol);
  const double lowest = spec.eigenvalues(spec.eigenvalues.size() - 1);
  if (lowest < -kValidationTol) {
    throw Error(ErrorKind::kInvalidState,
                "not positive semidefinite: eigenvalue " + std::to_string(lowest));
  }
}

DensityMatrix DensityMatrix::from_pure(Dims dims, const ComplexVector& psi) {
  if (std::abs(psi.norm() - 1.0) > kValidationTol) {
    throw Error(ErrorKind::kNotNormalized, "pure state vector is not normalized");
  }
  return DensityMatrix(std::move(dims), psi * psi.adjoint());
}

TripartitePureState::TripartitePureState(Dims dims, ComplexVector amplitudes)
    : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
  if (dims_.size() != 3) {
    throw Error(ErrorKind::kBadSubsystemSpec, "tripartite state needs dims [d_A, d_B, d_E]");
  }
  check_dims(dims_, static_cast<std::size_t>(amplitudes_.size()), "tripartite state");
  if (!amplitudes_.allFinite()) {
    throw Error(ErrorKind::kInvalidState, "amplitudes have non-finite entries");
  }
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kNormTol) {
    throw Error(ErrorKind::kNotNormalized, "norm is " + std::to_string(norm) + ", expected 1");
  }
}

DensityMatrix TripartitePureState::rho_ab() const {
  using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const auto rows = static_cast<Eigen::Index>(d_a() * d_b());
  const auto cols = static_cast<Eigen::Index>(d_e());
  const Eigen::Map<const RowMajor> m(amplitudes_.data(), rows, cols);
  return DensityMatrix({d_a(), d_b()}, m * m.adjoint());
}

DensityMatrix TripartitePureState::rho_ae() const {
  const std::size_t da = d_a(), db = d_b(), de = d_e();
  ComplexMatrix m(static_cast<Eigen::Index>(da * de), static_cast<Eigen::Index>(db));
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t b = 0; b < db; ++b)
      for (std::size_t e = 0; e < de; ++e)
        m(static_cast<Eigen::Index>(a * de + e), static_cast<Eigen::Index>(b)) =
            amplitudes_(static_cast<Eigen::Index>((a * db + b) * de + e));
  return DensityMatrix({da, de}, m * m.adjoint());
}

ComplexMatrix TripartitePureState::a_column(std::size_t a) const {
  if (a >= d_a()) throw Error(ErrorKind::kBadSubsystemSpec, "A index out of range");
  const std::size_t db = d_b(), de = d_e();
  ComplexMatrix m(static_cast<Eigen::Index>(db), static_cast<Eigen::Index>(de));
  for (std::size_t b = 0; b < db; ++b)
    for (std::size_t e = 0; e < de; ++e)
      m(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(e)) =
          amplitudes_(static_cast<Eigen::Index>((a * db + b) * de + e));
  return m;
}

namespace states {

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep) {
  const Dims& dims = rho.dims();
  if (keep.empty()) throw Error(ErrorKind::kBadSubsystemSpec, "keep set is empty");
  std::vector<std::size_t> kept = keep;
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw Error(ErrorKind::kBadSubsystemSpec, "keep set has duplicates");
  }
  if (kept.back() >= dims.size()) {
    throw Error(ErrorKind::kBadSubsystemSpec, "subsystem index out of range");
  }
  std::vector<std::size_t> traced;
  for (std::size_t s = 0; s < dims.size(); ++s) {
    if (!std::binary_search(kept.begin(), kept.end(), s)) traced.push_back(s);
  }
  const auto strides = strides_of(dims);
  const auto kept_off = offsets_over(dims, strides, kept);
  const auto traced_off = offsets_over(dims, strides, traced);

  const auto n = static_cast<Eigen::Index>(kept_off.size());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  const ComplexMatrix& m = rho.matrix();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (std::size_t t : traced_off) {
        acc += m(static_cast<Eigen::Index>(kept_off[static_cast<std::size_t>(i)] + t),
                 static_cast<Eigen::Index>(kept_off[static_cast<std::size_t>(j)] + t));
      }
      out(i, j) = acc;
    }
  }
  Dims out_dims;
  for (std::size_t s : kept) out_dims.push_back(dims[s]);
  return DensityMatrix(std::move(out_dims), std::move(out));
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, const Dims& dims, std::size_t subsystem) {
  if (subsystem >= dims.size()) {
    throw Error(ErrorKind::kBadSubsystemSpec, "subsystem index out of range");
  }
  if (m.rows() != m.cols() || total_dim(dims) != static_cast<std::size_t>(m.rows())) {
    throw Error(ErrorKind::kDimensionMismatch, "partial_transpose: dims do not match matrix");
  }
  const auto strides = strides_of(dims);
  const std::size_t stride = strides[subsystem];
  const std::size_t d = dims[subsystem];
  const auto n = static_cast<std::size_t>(m.rows());
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t dr = (r / stride) % d;
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t dc = (c / stride) % d;
      const std::size_t r2 = r - dr * stride + dc * stride;
      const std::size_t c2 = c - dc * stride + dr * stride;
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          m(static_cast<Eigen::Index>(r2), static_cast<Eigen::Index>(c2));
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const DensityMatrix& rho, std::size_t subsystem) {
  return partial_transpose(rho.matrix(), rho.dims(), subsystem);
}

PptVerdict is_ppt(const DensityMatrix& rho, double tol) {
  if (rho.num_subsystems() != 2) {
    throw Error(ErrorKind::kBadSubsystemSpec, "PPT test needs a bipartite state");
  }
  const auto spec = kernels::hermitian_eig(partial_transpose(rho, 1));
  PptVerdict v;
  v.witness = spec.eigenvalues(spec.eigenvalues.size() - 1);
  v.ppt = v.witness >= -tol;
  v.marginal = std::abs(v.witness) < 10.0 * tol;
  return v;
}

double von_neumann_entropy(const ComplexMatrix& m, double rank_tol) {
  const auto spec = kernels::hermitian_eig(m);
  const double cut = kernels::rank_cutoff(spec.eigenvalues, rank_tol);
  double s = 0.0;
  for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k) {
    const double lambda = spec.eigenvalues(k);
    if (lambda > cut) s -= lambda * std::log2(lambda);
  }
  return std::max(s, 0.0);
}

double von_neumann_entropy(const DensityMatrix& rho, double rank_tol) {
  return von_neumann_entropy(rho.matrix(), rank_tol);
}

double coherent_information(const DensityMatrix& rho_ab, double rank_tol) {
  if (rho_ab.num_subsystems() != 2) {
    throw Error(ErrorKind::kBadSubsystemSpec, "coherent information needs a bipartite state");
  }
  return von_neumann_entropy(partial_trace(rho_ab, {1}), rank_tol) -
         von_neumann_entropy(rho_ab, rank_tol);
}

TripartitePureState purify(const DensityMatrix& rho_ab, double rank_tol) {
  if (rho_ab.num_subsystems() != 2) {
    throw Error(ErrorKind::kBadSubsystemSpec, "purify needs a bipartite state");
  }
  const auto spec = kernels::hermitian_eig(rho_ab.matrix());
  const std::size_t k = kernels::rank_of_spectrum(spec.eigenvalues, rank_tol);
  const std::size_t n = rho_ab.dim();
  ComplexVector psi(static_cast<Eigen::Index>(n * k));
  for (std::size_t ab = 0; ab < n; ++ab) {
    for (std::size_t i = 0; i < k; ++i) {
      const auto col = static_cast<Eigen::Index>(i);
      psi(static_cast<Eigen::Index>(ab * k + i)) =
          std::sqrt(spec.eigenvalues(col)) * spec.eigenvectors(static_cast<Eigen::Index>(ab), col);
    }
  }
  psi /= psi.norm();
  return TripartitePureState({rho_ab.dims()[0], rho_ab.dims()[1], k}, std::move(psi));
}

DensityMatrix complement(const DensityMatrix& rho_ab, double rank_tol) {
  return purify(rho_ab, rank_tol).rho_ae();
}

ComplexMatrix conditional_marginal(const DensityMatrix& rho_ab, const ComplexVector& phi) {
  if (rho_ab.num_subsystems() != 2) {
    throw Error(ErrorKind::kBadSubsystemSpec, "conditional marginal needs a bipartite state");
  }
  const std::size_t da = rho_ab.dims()[0], db = rho_ab.dims()[1];
  if (static_cast<std::size_t>(phi.size()) != da) {
    throw Error(ErrorKind::kDimensionMismatch, "phi does not live on subsystem A");
  }
  if (std::abs(phi.norm() - 1.0) > 1e-9) {
    throw Error(ErrorKind::kNotNormalized, "phi is not a unit vector");
  }
  // W = |phi> (x) 1_B, so W^dagger rho W = Tr_A[(|phi><phi| (x) 1) rho].
  ComplexMatrix w = ComplexMatrix::Zero(static_cast<Eigen::Index>(da * db),
                                        static_cast<Eigen::Index>(db));
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t b = 0; b < db; ++b)
      w(static_cast<Eigen::Index>(a * db + b), static_cast<Eigen::Index>(b)) =
          phi(static_cast<Eigen::Index>(a));
  ComplexMatrix out = w.adjoint() * rho_ab.matrix() * w;
  return 0.5 * (out + out.adjoint());
}

std::size_t schmidt_rank(const ComplexVector& v, std::size_t d_left, std::size_t d_right,
                         double rank_tol) {
  if (static_cast<std::size_t>(v.size()) != d_left * d_right) {
    throw Error(ErrorKind::kDimensionMismatch, "vector length != d_left * d_right");
  }
  if (std::abs(v.norm() - 1.0) > 1e-9) {
    throw Error(ErrorKind::kNotNormalized, "Schmidt rank needs a unit vector");
  }
  using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMajor> m(v.data(), static_cast<Eigen::Index>(d_left),
                                     static_cast<Eigen::Index>(d_right));
  return kernels::singular_rank(m, rank_tol);
}

}  // namespace states
}  // namespace undistill
