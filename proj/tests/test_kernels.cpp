#include <doctest.h>

#include "test_support.hpp"
#include "undistill/channels.hpp"
#include "undistill/error.hpp"
#include "undistill/kernels.hpp"

using namespace undistill;
using namespace testing_support;

TEST_CASE("hermitian_eig: trivial spectra") {
  const auto id = kernels::hermitian_eig(ComplexMatrix::Identity(3, 3));
  CHECK(id.eigenvalues.isApprox(Eigen::Vector3d(1, 1, 1)));

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 0.1;
  d(1, 1) = 0.9;
  const auto spec = kernels::hermitian_eig(d);
  CHECK(spec.eigenvalues(0) == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(spec.eigenvalues(1) == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("hermitian_eig: Werner-Holevo Choi against the antisymmetric projector") {
  // Oracle: (1 - SWAP)/6 built entrywise.
  ComplexMatrix oracle = ComplexMatrix::Zero(9, 9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      oracle(i * 3 + j, i * 3 + j) += 1.0 / 6.0;
      oracle(i * 3 + j, j * 3 + i) -= 1.0 / 6.0;
    }
  const ComplexMatrix choi = channels::werner_holevo().choi().matrix();
  CHECK(kernels::max_abs_diff(choi, oracle) < 1e-15);

  const auto spec = kernels::hermitian_eig(choi);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(spec.eigenvalues(k) - 1.0 / 3.0) < 1e-12);
  for (int k = 3; k < 9; ++k) CHECK(std::abs(spec.eigenvalues(k)) < 1e-12);
}

TEST_CASE("hermitian_eig: errors") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(kernels::hermitian_eig(m), Error);
  try {
    kernels::hermitian_eig(m);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNotHermitian);
  }
  CHECK_THROWS_AS(kernels::hermitian_eig(ComplexMatrix::Zero(2, 3)), Error);
  ComplexMatrix nan = ComplexMatrix::Identity(2, 2);
  nan(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(kernels::hermitian_eig(nan), Error);
}

TEST_CASE("hermitian_eig: reconstruction, orthonormality, trace and determinism") {
  Gen gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix m = gen.state(2, 3, 1 + trial % 6).matrix();
    const auto spec = kernels::hermitian_eig(m);
    CHECK(kernels::max_abs_diff(spec.reconstruct(), m) < 1e-12);
    CHECK(kernels::max_abs_diff(spec.eigenvectors.adjoint() * spec.eigenvectors,
                                ComplexMatrix::Identity(6, 6)) < 1e-12);
    CHECK(std::abs(spec.eigenvalues.sum() - m.trace().real()) < 1e-10);
    for (Eigen::Index k = 1; k < spec.eigenvalues.size(); ++k) {
      CHECK(spec.eigenvalues(k - 1) >= spec.eigenvalues(k));
    }
    const auto again = kernels::hermitian_eig(m);
    CHECK(again.eigenvalues == spec.eigenvalues);
    CHECK(again.eigenvectors == spec.eigenvectors);
  }
}

TEST_CASE("numerical_rank") {
  CHECK(kernels::numerical_rank(ComplexMatrix::Zero(2, 2)) == 0);
  const ComplexVector bell = bell_vector();
  CHECK(kernels::numerical_rank(bell * bell.adjoint()) == 1);
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 1e-9;
  d(2, 2) = 1e-11;
  CHECK(kernels::numerical_rank(d) == 2);
  CHECK(kernels::numerical_rank(d, 1e-8) == 1);
  CHECK(kernels::min_positive_eigenvalue(d) == doctest::Approx(1e-9));
  CHECK(kernels::min_positive_eigenvalue(ComplexMatrix::Zero(2, 2)) == 0.0);
}

TEST_CASE("support_projector and pinv_sqrt: named cases") {
  CHECK(kernels::max_abs_diff(kernels::support_projector(ComplexMatrix::Identity(3, 3)),
                              ComplexMatrix::Identity(3, 3)) < 1e-14);
  ComplexMatrix half = ComplexMatrix::Zero(3, 3);
  half(0, 0) = half(1, 1) = 0.5;
  ComplexMatrix expected = ComplexMatrix::Zero(3, 3);
  expected(0, 0) = expected(1, 1) = 1.0;
  CHECK(kernels::max_abs_diff(kernels::support_projector(half), expected) < 1e-14);

  CHECK(kernels::max_abs_diff(kernels::pinv_sqrt(ComplexMatrix::Identity(2, 2)),
                              ComplexMatrix::Identity(2, 2)) < 1e-14);
  ComplexMatrix four = ComplexMatrix::Zero(2, 2);
  four(0, 0) = 4.0;
  ComplexMatrix four_expected = ComplexMatrix::Zero(2, 2);
  four_expected(0, 0) = 0.5;
  CHECK(kernels::max_abs_diff(kernels::pinv_sqrt(four), four_expected) < 1e-14);

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 0.9;
  d(1, 1) = 0.1;
  const ComplexMatrix r = kernels::pinv_sqrt(d);
  CHECK(std::abs(r(0, 0).real() - 1.0 / std::sqrt(0.9)) < 1e-12);
  CHECK(std::abs(r(1, 1).real() - 1.0 / std::sqrt(0.1)) < 1e-12);
  CHECK(std::abs(r(0, 1)) < 1e-14);
}

TEST_CASE("property: R m R = Pi and rank(Pi) = rank(m) for random PSD m") {
  Gen gen(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t da = gen.uniform(1, 3), db = gen.uniform(1, 4);
    const std::size_t k = gen.uniform(1, da * db);
    const ComplexMatrix m = gen.state(da, db, k).matrix();
    const ComplexMatrix pi = kernels::support_projector(m);
    const ComplexMatrix r = kernels::pinv_sqrt(m);
    CHECK(kernels::max_abs_diff(r * m * r, pi) < 1e-9);
    CHECK(kernels::max_abs_diff(pi * pi, pi) < 1e-12);
    CHECK(kernels::numerical_rank(pi) == kernels::numerical_rank(m));
    CHECK(std::abs(pi.trace().real() - static_cast<double>(kernels::numerical_rank(m))) < 1e-10);
    CHECK(kernels::numerical_rank(m) == oracle_rank(m));
  }
}

TEST_CASE("singular_rank and kron") {
  ComplexMatrix m = ComplexMatrix::Zero(4, 3);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  CHECK(kernels::singular_rank(m) == 2);
  ComplexMatrix a(2, 2);
  a << 1.0, 2.0, 3.0, 4.0;
  const ComplexMatrix k = kernels::kron(a, ComplexMatrix::Identity(2, 2));
  CHECK(k(0, 2) == Complex(2.0));
  CHECK(k(3, 1) == Complex(3.0));
  CHECK(k(1, 0) == Complex(0.0));
}
