#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "undistill/channels.hpp"
#include "undistill/distill.hpp"
#include "undistill/error.hpp"

using namespace undistill;
using namespace testing_support;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an undistill::Error");
  return ErrorKind::kParse;
}

DensityMatrix bell() { return pure(bell_vector(), {2, 2}); }
DensityMatrix skewed() { return pure(skewed_vector(), {2, 2}); }
DensityMatrix mixed4() { return DensityMatrix({2, 2}, ComplexMatrix::Identity(4, 4) / 4.0); }

DensityMatrix example1_complement(std::size_t d) {
  return channels::complement_channel(channels::example1_channel(d, 0.5)).choi();
}

TripartitePureState bell_with_product_e() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return TripartitePureState({2, 2, 1}, v);
}

}  // namespace

TEST_CASE("filter: named cases") {
  SUBCASE("maximally mixed marginal leaves the state unchanged") {
    const FilterOutcome f = distill::filter(bell(), Side::kB);
    CHECK(std::abs(f.p_succ - 1.0) < 1e-12);
    CHECK(kernels::max_abs_diff(f.filtered_state.matrix(), bell().matrix()) < 1e-12);
    CHECK(f.r == 1);
    CHECK(f.r_side == 2);
    CHECK(f.r_filtered == 1);
  }
  SUBCASE("skewed pure state filters to a Bell state") {
    for (Side side : {Side::kA, Side::kB}) {
      const FilterOutcome f = distill::filter(skewed(), side);
      CHECK(std::abs(f.lambda_min - 0.1) < 1e-12);
      CHECK(std::abs(f.p_succ - 0.2) < 1e-12);
      CHECK(kernels::max_abs_diff(f.filtered_state.matrix(), bell().matrix()) < 1e-12);
    }
  }
  SUBCASE("filter operator is a contraction") {
    const FilterOutcome f = distill::filter(skewed(), Side::kB);
    const ComplexMatrix yy = f.filter_operator.adjoint() * f.filter_operator;
    CHECK(oracle_eigenvalues(yy)(0) <= 1.0 + 1e-12);
  }
}

TEST_CASE("property: filter success probability and flattened marginal") {
  Gen gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t da = gen.uniform(2, 3), db = gen.uniform(2, 4);
    const DensityMatrix rho = gen.state(da, db, gen.uniform(1, da * db));
    for (Side side : {Side::kA, Side::kB}) {
      const FilterOutcome f = distill::filter(rho, side);
      CHECK(std::abs(f.p_succ - f.p_succ_closed_form) < 1e-9);
      CHECK(f.p_succ > 0.0);
      CHECK(f.p_succ <= 1.0 + 1e-12);
      CHECK(f.r_filtered == f.r);
      const std::size_t keep = side == Side::kA ? 0 : 1;
      const ComplexMatrix m = states::partial_trace(f.filtered_state, {keep}).matrix();
      CHECK(kernels::max_abs_diff(m, f.support_projector / static_cast<double>(f.r_side)) < 1e-8);
    }
  }
}

TEST_CASE("low_rank_bound") {
  CHECK(std::abs(distill::low_rank_bound(bell(), Side::kB) - 1.0) < 1e-12);
  CHECK(std::abs(distill::low_rank_bound(skewed(), Side::kB) - 0.2) < 1e-12);
  CHECK(std::abs(distill::low_rank_bound(skewed(), Side::kA) - 0.2) < 1e-12);
  CHECK(kind_of([] { distill::low_rank_bound(mixed4(), Side::kB); }) ==
        ErrorKind::kPreconditionRankNotLow);

  // Complement of the low-rank example channel, filtered on the environment.
  CHECK(std::abs(distill::low_rank_bound(example1_complement(2), Side::kB) - 0.10060252965230067) <
        1e-10);
  CHECK(std::abs(distill::low_rank_bound(example1_complement(3), Side::kB) - 0.20471266504616828) <
        1e-10);
}

TEST_CASE("filtered_hashing_rate") {
  CHECK(std::abs(distill::filtered_hashing_rate(bell(), Side::kB) - 1.0) < 1e-12);
  CHECK(std::abs(distill::filtered_hashing_rate(skewed(), Side::kB) - 0.2) < 1e-12);
  CHECK(std::abs(distill::filtered_hashing_rate(mixed4(), Side::kB) + 1.0) < 1e-12);
}

TEST_CASE("property: hashing rate dominates the low-rank bound") {
  Gen gen(17);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t da = gen.uniform(2, 3), db = gen.uniform(2, 4);
    const DensityMatrix rho = gen.state(da, db, gen.uniform(1, db - 1));
    for (Side side : {Side::kA, Side::kB}) {
      const std::size_t keep = side == Side::kA ? 0 : 1;
      const std::size_t r = kernels::numerical_rank(rho.matrix());
      const std::size_t rs = kernels::numerical_rank(states::partial_trace(rho, {keep}).matrix());
      if (r >= rs) continue;
      const double bound = distill::low_rank_bound(rho, side);
      CHECK(bound > 0.0);
      CHECK(distill::filtered_hashing_rate(rho, side) >= bound - 1e-9);
      ++checked;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("witness search: named cases") {
  SUBCASE("pure entangled state succeeds on the first basis vector") {
    const auto res = distill::one_way_witness_search(bell(), 10, 0);
    REQUIRE(res.found());
    CHECK(res.trial_index == 0);
    CHECK(res.target_rank == 1);
    CHECK(distill::is_one_way_witness(bell(), *res.phi));
  }
  SUBCASE("low-rank example complement has no witness") {
    for (std::size_t d : {2u, 3u}) {
      const auto res = distill::one_way_witness_search(example1_complement(d), 200, 0);
      CHECK_FALSE(res.found());
      CHECK(res.trials_used == 200 + d);  // basis vectors, then the random budget
    }
  }
  SUBCASE("precondition") {
    CHECK(kind_of([] { distill::one_way_witness_search(mixed4(), 10, 0); }) ==
          ErrorKind::kPreconditionRankNotLow);
    CHECK(kind_of([] { distill::one_way_witness_search_serial(mixed4(), 10, 0); }) ==
          ErrorKind::kPreconditionRankNotLow);
  }
}

TEST_CASE("witness_trial_vector") {
  for (std::size_t t = 0; t < 3; ++t) CHECK(distill::witness_trial_vector(3, 9, t) == ket(3, t));
  const ComplexVector v = distill::witness_trial_vector(3, 9, 5);
  CHECK(std::abs(v.norm() - 1.0) < 1e-12);
  CHECK(v == distill::witness_trial_vector(3, 9, 5));
  CHECK(v != distill::witness_trial_vector(3, 10, 5));
}

TEST_CASE("property: a found witness satisfies the rank condition") {
  Gen gen(23);
  for (int trial = 0; trial < 50; ++trial) {
    const DensityMatrix rho = gen.state(2, 4, 3);
    const auto res = distill::one_way_witness_search_serial(rho, 20, trial);
    REQUIRE(res.found());
    const ComplexMatrix m = states::conditional_marginal(rho, *res.phi);
    CHECK(oracle_rank(m) == oracle_rank(rho.matrix()));
  }
}

TEST_CASE("classify: named cases") {
  SUBCASE("GHZ is fully undistillable") {
    const auto rep = distill::classify(TripartitePureState({2, 2, 2}, ghz_vector()));
    CHECK(rep.classification == distill::Classification::kFullyUndistillableSeparable);
    CHECK(rep.ab.ppt.ppt);
    CHECK(rep.ae.ppt.ppt);
    for (const auto* s : {&rep.rates.ab_2way_ae_2way, &rep.rates.ab_2way_ae_1way,
                          &rep.rates.ab_1way_ae_2way, &rep.rates.ab_1way_ae_1way})
      CHECK(s->status == distill::RateStatus::kZero);
  }
  SUBCASE("Bell pair on AB with a product environment") {
    const auto rep = distill::classify(bell_with_product_e());
    CHECK(rep.classification == distill::Classification::kSomeReduction2WayDistillable);
    CHECK_FALSE(rep.ab.ppt.ppt);
    CHECK(rep.ae.ppt.ppt);
    CHECK(rep.r == 1);
    CHECK(rep.r_e == 1);
    REQUIRE(rep.ab.low_rank_bound_x.has_value());
    CHECK(std::abs(*rep.ab.low_rank_bound_x - 1.0) < 1e-12);
    CHECK(rep.ab.one_way.status == distill::RateStatus::kPositive);
    CHECK(rep.ae.one_way.status == distill::RateStatus::kZero);
    CHECK(rep.rates.ab_2way_ae_2way.status == distill::RateStatus::kPositive);
    CHECK(rep.rates.ab_1way_ae_1way.status == distill::RateStatus::kPositive);
  }
  SUBCASE("antisymmetric channel purification has two NPT reductions") {
    const TripartitePureState psi = states::purify(channels::werner_holevo().choi());
    const auto rep = distill::classify(psi);
    CHECK_FALSE(rep.ab.ppt.ppt);
    CHECK_FALSE(rep.ae.ppt.ppt);
    CHECK(rep.classification == distill::Classification::kSomeReduction2WayDistillable);
    CHECK(rep.ab.two_way.status == distill::RateStatus::kPositive);
    CHECK(rep.ae.two_way.status == distill::RateStatus::kPositive);
    CHECK(std::abs(rep.ab.coherent_information) < 1e-9);
  }
  SUBCASE("low-rank example: environment side certified, heuristic flag set on search miss") {
    const TripartitePureState psi = states::purify(channels::example1_channel(2, 0.5).choi());
    const auto rep = distill::classify(psi, {{}, 100, 0});
    CHECK(rep.classification == distill::Classification::kSomeReduction2WayDistillable);
    REQUIRE(rep.ae.low_rank_bound_x.has_value());
    CHECK(*rep.ae.low_rank_bound_x > 0.0);
    CHECK(rep.ae.two_way.status == distill::RateStatus::kPositive);
    CHECK(rep.ae.witness_search_run);
    CHECK_FALSE(rep.ae.witness->found());
    CHECK(rep.ae.all_phi_rank_deficit_heuristic);
  }
}

TEST_CASE("property: PPT on both reductions forces all-zero rates") {
  Gen gen(41);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexVector v = gen.unit_vector(8);
    const auto rep = distill::classify(TripartitePureState({2, 2, 2}, v));
    const bool both = rep.ab.ppt.ppt && rep.ae.ppt.ppt;
    CHECK(both == (rep.classification == distill::Classification::kFullyUndistillableSeparable));
    if (!both) {
      CHECK(rep.rates.ab_2way_ae_2way.status == distill::RateStatus::kPositive);
      CHECK(rep.rates.ab_2way_ae_1way.status == distill::RateStatus::kPositive);
      CHECK(rep.rates.ab_1way_ae_2way.status == distill::RateStatus::kPositive);
    }
  }
}

TEST_CASE("rank_regime: named cases") {
  SUBCASE("product pure state is separable") {
    const auto rec = distill::rank_regime(pure(ket(4, 0), {2, 2}));
    CHECK(rec.verdict == distill::RegimeVerdict::kSeparable);
    CHECK(rec.complement_rank_pattern);
  }
  SUBCASE("Bell state is strictly low rank") {
    const auto rec = distill::rank_regime(bell());
    CHECK(rec.strict_low_rank);
    CHECK(rec.verdict == distill::RegimeVerdict::kEntangled2WayDistillable);
  }
  SUBCASE("full-rank PPT state is outside the regime") {
    const auto rec = distill::rank_regime(mixed4());
    CHECK_FALSE(rec.ppt_equals_separable_regime);
    CHECK(rec.verdict == distill::RegimeVerdict::kPptSeparabilityUndecided);
  }
}

TEST_CASE("property: rank regime bookkeeping") {
  Gen gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t da = gen.uniform(2, 3), db = gen.uniform(2, 3);
    const DensityMatrix rho = gen.state(da, db, gen.uniform(1, da * db));
    const auto rec = distill::rank_regime(rho);
    CHECK(rec.r == rec.r_e);
    CHECK(rec.r_ae == rec.r_b);
    if (rec.ppt_equals_separable_regime && !rec.ppt.ppt)
      CHECK(rec.verdict == distill::RegimeVerdict::kEntangled2WayDistillable);
    // Low-rank PPT states are separable, so low rank plus PPT never appears
    // as "undecided".
    if (rec.ppt_equals_separable_regime)
      CHECK(rec.verdict != distill::RegimeVerdict::kPptSeparabilityUndecided);
  }
}
