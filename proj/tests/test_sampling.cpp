#include <doctest.h>

#include "test_support.hpp"
#include "undistill/error.hpp"
#include "undistill/rng.hpp"
#include "undistill/sampling.hpp"

using namespace undistill;
using namespace testing_support;

TEST_CASE("Rng: determinism and range") {
  Rng a(7, 3), b(7, 3), c(7, 4);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform_open0();
    CHECK(x == b.uniform_open0());
    CHECK(x > 0.0);
    CHECK(x <= 1.0);
    differs = differs || x != c.uniform_open0();
  }
  CHECK(differs);
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
}

TEST_CASE("sample_pure: named cases") {
  const TripartitePureState psi = sampling::sample_pure(1, 1, 1, 0);
  CHECK(std::abs(std::abs(psi.amplitudes()(0)) - 1.0) < 1e-12);
  for (std::uint64_t s = 0; s < 20; ++s)
    CHECK(std::abs(sampling::sample_pure(2, 3, 2, s).amplitudes().norm() - 1.0) < 1e-12);
  CHECK(sampling::sample_pure(2, 3, 2, 5, 1).amplitudes() ==
        sampling::sample_pure(2, 3, 2, 5, 1).amplitudes());
  CHECK(sampling::sample_pure(2, 3, 2, 5, 1).amplitudes() !=
        sampling::sample_pure(2, 3, 2, 5, 2).amplitudes());
}

TEST_CASE("property: induced-measure marginal averages to the maximally mixed state") {
  ComplexMatrix mean = ComplexMatrix::Zero(2, 2);
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const DensityMatrix rho = sampling::sample_state(2, 2, 2, 11, static_cast<std::uint64_t>(i));
    mean += oracle_trace_b(rho.matrix(), 2, 2);
  }
  mean /= static_cast<double>(n);
  CHECK(kernels::max_abs_diff(mean, ComplexMatrix::Identity(2, 2) / 2.0) < 0.02);
}

TEST_CASE("haar_vector") {
  const ComplexVector v = sampling::haar_vector(4, 1, 2);
  CHECK(std::abs(v.norm() - 1.0) < 1e-12);
  CHECK(v == sampling::haar_vector(4, 1, 2));
}

TEST_CASE("sample_state: generic ranks") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const DensityMatrix rho = sampling::sample_state(2, 4, 3, s);
    CHECK(oracle_rank(rho.matrix()) == 3);
    CHECK(oracle_rank(oracle_trace_a(rho.matrix(), 2, 4)) == 4);
    CHECK(oracle_rank(sampling::sample_state(2, 2, 8, s).matrix()) == 4);
    CHECK(oracle_rank(sampling::sample_state(2, 3, 1, s).matrix()) == 1);
  }
  const DensityMatrix rho = sampling::sample_state(2, 4, 3, 0);
  CHECK(oracle_rank(states::conditional_marginal(rho, ket(2, 0))) == 3);
}

TEST_CASE("run_low_rank_ensemble: named cases") {
  SUBCASE("(2,4,3) with 200 samples hits every almost-sure fact") {
    const EnsembleReport rep = sampling::run_low_rank_ensemble({2, 4, 3, 200, 0, 1e-10}, 50);
    CHECK(rep.samples.size() == 200);
    CHECK(rep.freq_rank_ab() == 1.0);
    CHECK(rep.freq_rank_b() == 1.0);
    CHECK(rep.freq_schmidt() == 1.0);
    CHECK(rep.freq_witness() == 1.0);
    for (std::size_t i = 0; i < rep.samples.size(); ++i) {
      const SampleRecord& s = rep.samples[i];
      CHECK(s.index == i);
      CHECK(s.r == 3);
      CHECK(s.r_b == 4);
      CHECK(s.column_schmidt_ranks.size() == 2);
      CHECK(s.ab_max_discarded < 1e-10 * s.ab_min_retained);
    }
  }
  SUBCASE("smallest admissible triple") {
    const EnsembleReport rep = sampling::run_low_rank_ensemble({1, 2, 1, 10, 0, 1e-10}, 5);
    CHECK(rep.freq_rank_ab() == 1.0);
    CHECK(rep.freq_rank_b() == 1.0);
    CHECK(rep.freq_witness() == 1.0);
  }
  SUBCASE("bad specs") {
    auto kind = [](EnsembleSpec spec) {
      try {
        sampling::run_low_rank_ensemble(spec, 5);
      } catch (const Error& e) {
        return e.kind();
      }
      return ErrorKind::kParse;
    };
    CHECK(kind({2, 4, 4, 10, 0, 1e-10}) == ErrorKind::kBadSpec);
    CHECK(kind({0, 4, 3, 10, 0, 1e-10}) == ErrorKind::kBadSpec);
    CHECK(kind({2, 4, 3, 0, 0, 1e-10}) == ErrorKind::kBadSpec);
    CHECK(kind({2, 4, 3, 10, 0, 0.0}) == ErrorKind::kBadSpec);
  }
}

TEST_CASE("property: ensemble determinism and seed dependence") {
  const EnsembleSpec spec{2, 3, 2, 30, 99, 1e-10};
  const EnsembleReport a = sampling::run_low_rank_ensemble(spec, 20);
  const EnsembleReport b = sampling::run_low_rank_ensemble(spec, 20);
  EnsembleSpec other = spec;
  other.seed = 100;
  const EnsembleReport c = sampling::run_low_rank_ensemble(other, 20);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].ab_min_retained == b.samples[i].ab_min_retained);
    CHECK(a.samples[i].witness_trials == b.samples[i].witness_trials);
    any_diff = any_diff || a.samples[i].ab_min_retained != c.samples[i].ab_min_retained;
  }
  CHECK(any_diff);
}

TEST_CASE("property: random triples with d_E < d_B") {
  Gen gen(77);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t da = gen.uniform(1, 3), db = gen.uniform(2, 4);
    const std::size_t de = gen.uniform(1, db - 1);
    const EnsembleReport rep =
        sampling::run_low_rank_ensemble({da, db, de, 20, static_cast<std::uint64_t>(trial), 1e-10}, 50);
    CHECK(rep.freq_rank_ab() == 1.0);
    CHECK(rep.freq_rank_b() == 1.0);
    CHECK(rep.freq_schmidt() == 1.0);
    CHECK(rep.freq_witness() == 1.0);
  }
}
