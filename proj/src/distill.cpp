#include "undistill/distill.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>

#include "undistill/error.hpp"
#include "undistill/sampling.hpp"

namespace undistill {

const char* to_string(Side side) { return side == Side::kA ? "A" : "B"; }

namespace distill {

const char* to_string(RateStatus status) {
  switch (status) {
    case RateStatus::kZero: return "zero";
    case RateStatus::kPositive: return "positive";
    case RateStatus::kUnknown: return "unknown";
  }
  return "unknown";
}

const char* to_string(Classification c) {
  return c == Classification::kFullyUndistillableSeparable ? "FULLY_UNDISTILLABLE_SEPARABLE"
                                                           : "SOME_REDUCTION_2WAY_DISTILLABLE";
}

const char* to_string(RegimeVerdict v) {
  switch (v) {
    case RegimeVerdict::kSeparable: return "separable";
    case RegimeVerdict::kEntangled2WayDistillable: return "entangled, 2-way distillable";
    case RegimeVerdict::kPptSeparabilityUndecided:
      return "PPT but separability undecided by this tool";
    case RegimeVerdict::kNptDistillabilityUndecided:
      return "entangled (NPT), distillability undecided by this tool";
  }
  return "";
}

namespace {

void require_bipartite(const DensityMatrix& rho) {
  if (rho.num_subsystems() != 2) {
    throw Error(ErrorKind::kBadSubsystemSpec, "expected a bipartite state");
  }
}

std::size_t side_index(Side side) { return side == Side::kA ? 0 : 1; }

DensityMatrix marginal(const DensityMatrix& rho, Side side) {
  return states::partial_trace(rho, {side_index(side)});
}

std::size_t rank_of(const ComplexMatrix& m, const Tolerances& tol) {
  return kernels::numerical_rank(m, tol.rank_tol, tol.symm_tol);
}

}  // namespace

FilterOutcome filter(const DensityMatrix& rho_ab, Side side, const Tolerances& tol) {
  require_bipartite(rho_ab);
  const std::size_t da = rho_ab.dims()[0], db = rho_ab.dims()[1];
  const ComplexMatrix rho_side = marginal(rho_ab, side).matrix();

  const auto spec = kernels::hermitian_eig(rho_side, tol.symm_tol);
  const std::size_t r_side_pre = kernels::rank_of_spectrum(spec.eigenvalues, tol.rank_tol);
  const double lambda_min = spec.eigenvalues(static_cast<Eigen::Index>(r_side_pre) - 1);

  const ComplexMatrix y = std::sqrt(lambda_min) *
                          kernels::pinv_sqrt(rho_side, tol.rank_tol, tol.symm_tol);
  const ComplexMatrix full =
      side == Side::kA
          ? kernels::kron(y, ComplexMatrix::Identity(static_cast<Eigen::Index>(db),
                                                     static_cast<Eigen::Index>(db)))
          : kernels::kron(ComplexMatrix::Identity(static_cast<Eigen::Index>(da),
                                                  static_cast<Eigen::Index>(da)),
                          y);
  ComplexMatrix filtered = full * rho_ab.matrix() * full.adjoint();
  filtered = 0.5 * (filtered + filtered.adjoint());
  const double p_succ = filtered.trace().real();

  FilterOutcome out{
      .side = side,
      .filter_operator = y,
      .p_succ = p_succ,
      .p_succ_closed_form = lambda_min * static_cast<double>(r_side_pre),
      .filtered_state = DensityMatrix(rho_ab.dims(), filtered / p_succ),
      .support_projector = kernels::support_projector(rho_side, tol.rank_tol, tol.symm_tol),
      .r = rank_of(rho_ab.matrix(), tol),
      .r_side = 0,
      .r_filtered = 0,
      .lambda_min = lambda_min,
  };
  out.r_side = rank_of(marginal(out.filtered_state, side).matrix(), tol);
  out.r_filtered = rank_of(out.filtered_state.matrix(), tol);
  return out;
}

double low_rank_bound(const DensityMatrix& rho_ab, Side side, const Tolerances& tol) {
  require_bipartite(rho_ab);
  const ComplexMatrix rho_side = marginal(rho_ab, side).matrix();
  const std::size_t r = rank_of(rho_ab.matrix(), tol);
  const std::size_t r_side = rank_of(rho_side, tol);
  if (r >= r_side) {
    throw Error(ErrorKind::kPreconditionRankNotLow,
                "rank rho = " + std::to_string(r) + " is not below rank rho_" + to_string(side) +
                    " = " + std::to_string(r_side));
  }
  const double lambda_min = kernels::min_positive_eigenvalue(rho_side, tol.rank_tol, tol.symm_tol);
  const double rs = static_cast<double>(r_side);
  return lambda_min * rs * (std::log2(rs) - std::log2(static_cast<double>(r)));
}

double filtered_hashing_rate(const DensityMatrix& rho_ab, Side side, const Tolerances& tol) {
  const FilterOutcome f = filter(rho_ab, side, tol);
  const double s_side = states::von_neumann_entropy(marginal(f.filtered_state, side), tol.rank_tol);
  const double s_joint = states::von_neumann_entropy(f.filtered_state, tol.rank_tol);
  return f.p_succ * (s_side - s_joint);
}

ComplexVector witness_trial_vector(std::size_t d_a, std::uint64_t seed, std::size_t trial) {
  if (trial < d_a) {
    ComplexVector e = ComplexVector::Zero(static_cast<Eigen::Index>(d_a));
    e(static_cast<Eigen::Index>(trial)) = 1.0;
    return e;
  }
  return sampling::haar_vector(d_a, seed, trial - d_a);
}

bool is_one_way_witness(const DensityMatrix& rho_ab, const ComplexVector& phi,
                        const Tolerances& tol) {
  const std::size_t r = rank_of(rho_ab.matrix(), tol);
  return rank_of(states::conditional_marginal(rho_ab, phi), tol) == r;
}

namespace {

struct SearchSetup {
  std::size_t d_a = 0;
  std::size_t target_rank = 0;
  std::size_t n_trials = 0;
};

SearchSetup prepare_search(const DensityMatrix& rho_ab, std::size_t budget,
                           const Tolerances& tol) {
  require_bipartite(rho_ab);
  const std::size_t r = rank_of(rho_ab.matrix(), tol);
  const std::size_t r_b = rank_of(marginal(rho_ab, Side::kB).matrix(), tol);
  if (r >= r_b) {
    throw Error(ErrorKind::kPreconditionRankNotLow,
                "witness search needs rank rho_AB = " + std::to_string(r) +
                    " < rank rho_B = " + std::to_string(r_b));
  }
  return {rho_ab.dims()[0], r, rho_ab.dims()[0] + budget};
}

bool trial_succeeds(const DensityMatrix& rho_ab, const SearchSetup& setup, std::uint64_t seed,
                    std::size_t trial, const Tolerances& tol) {
  const ComplexVector phi = witness_trial_vector(setup.d_a, seed, trial);
  return rank_of(states::conditional_marginal(rho_ab, phi), tol) == setup.target_rank;
}

WitnessSearchResult finish_search(const SearchSetup& setup, std::uint64_t seed,
                                  std::size_t best) {
  WitnessSearchResult result;
  result.target_rank = setup.target_rank;
  if (best < setup.n_trials) {
    result.phi = witness_trial_vector(setup.d_a, seed, best);
    result.trial_index = best;
    result.trials_used = best + 1;
  } else {
    result.trial_index = setup.n_trials;
    result.trials_used = setup.n_trials;
  }
  return result;
}

}  // namespace

WitnessSearchResult one_way_witness_search_serial(const DensityMatrix& rho_ab,
                                                  std::size_t budget, std::uint64_t seed,
                                                  const Tolerances& tol) {
  const SearchSetup setup = prepare_search(rho_ab, budget, tol);
  std::size_t best = setup.n_trials;
  for (std::size_t t = 0; t < setup.n_trials; ++t) {
    if (trial_succeeds(rho_ab, setup, seed, t, tol)) {
      best = t;
      break;
    }
  }
  return finish_search(setup, seed, best);
}

WitnessSearchResult one_way_witness_search(const DensityMatrix& rho_ab, std::size_t budget,
                                           std::uint64_t seed, const Tolerances& tol) {
  const SearchSetup setup = prepare_search(rho_ab, budget, tol);
  // Lowest successful index wins. `best` only decreases, so any trial skipped
  // because it exceeded `best` at the time also exceeds the final value.
  std::atomic<std::size_t> best{setup.n_trials};
  const auto n = static_cast<std::int64_t>(setup.n_trials);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t t = 0; t < n; ++t) {
    const auto trial = static_cast<std::size_t>(t);
    if (trial >= best.load(std::memory_order_relaxed)) continue;
    try {
      if (trial_succeeds(rho_ab, setup, seed, trial, tol)) {
        std::size_t current = best.load(std::memory_order_relaxed);
        while (trial < current && !best.compare_exchange_weak(current, trial)) {
        }
      }
    } catch (...) {
#pragma omp critical(undistill_witness_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return finish_search(setup, seed, best.load());
}

namespace {

constexpr double kRatePositivity = 1e-9;

ReductionAnalysis analyze_reduction(const DensityMatrix& rho, const std::string& label,
                                    const ClassifyOptions& opts) {
  const Tolerances& tol = opts.tol;
  const std::string x = label.substr(1);
  ReductionAnalysis out;
  out.label = label;
  out.dims = rho.dims();
  const DensityMatrix rho_a = marginal(rho, Side::kA);
  const DensityMatrix rho_x = marginal(rho, Side::kB);
  out.r = rank_of(rho.matrix(), tol);
  out.r_a = rank_of(rho_a.matrix(), tol);
  out.r_x = rank_of(rho_x.matrix(), tol);
  out.ppt = states::is_ppt(rho, tol.ppt_tol);
  out.coherent_information = states::von_neumann_entropy(rho_x, tol.rank_tol) -
                             states::von_neumann_entropy(rho, tol.rank_tol);

  if (out.r < out.r_x) {
    out.low_rank_bound_x = low_rank_bound(rho, Side::kB, tol);
    out.filtered_rate_x = filtered_hashing_rate(rho, Side::kB, tol);
    out.witness_search_run = true;
    out.witness = one_way_witness_search(rho, opts.witness_budget, opts.seed, tol);
    out.all_phi_rank_deficit_heuristic = !out.witness->found();
  }
  if (out.r < out.r_a) {
    out.low_rank_bound_a = low_rank_bound(rho, Side::kA, tol);
    out.filtered_rate_a = filtered_hashing_rate(rho, Side::kA, tol);
  }

  if (out.ppt.ppt) {
    out.one_way = {RateStatus::kZero, "PPT reduction is undistillable"};
    out.two_way = {RateStatus::kZero, "PPT reduction is undistillable"};
    return out;
  }

  if (out.witness && out.witness->found()) {
    out.one_way = {RateStatus::kPositive,
                   "phi on A found with rank rho^phi_" + x + " = rank rho_" + label};
  } else if (out.coherent_information > kRatePositivity) {
    out.one_way = {RateStatus::kPositive, "hashing: coherent information is positive"};
  } else {
    out.one_way = {RateStatus::kUnknown, "no one-way certificate found"};
  }

  if (out.one_way.status == RateStatus::kPositive) {
    out.two_way = {RateStatus::kPositive, "implied by a positive one-way rate"};
  } else if (out.low_rank_bound_x || out.low_rank_bound_a) {
    out.two_way = {RateStatus::kPositive, "low-rank filter-then-hash lower bound"};
  } else if (out.r <= std::max(out.r_a, out.r_x)) {
    out.two_way = {RateStatus::kPositive,
                   "NPT with rank rho <= max{rank rho_A, rank rho_" + x +
                       "}: PPT and 2-way undistillability coincide in this regime"};
  } else {
    out.two_way = {RateStatus::kUnknown, "NPT outside the low-rank regime"};
  }
  return out;
}

StatusWithReason combine(const StatusWithReason& ab, const StatusWithReason& ae) {
  if (ab.status == RateStatus::kPositive) return {RateStatus::kPositive, "AB: " + ab.reason};
  if (ae.status == RateStatus::kPositive) return {RateStatus::kPositive, "AE: " + ae.reason};
  if (ab.status == RateStatus::kZero && ae.status == RateStatus::kZero) {
    return {RateStatus::kZero, "both reductions zero"};
  }
  return {RateStatus::kUnknown, "no certificate for either reduction"};
}

}  // namespace

DistillabilityReport classify(const TripartitePureState& psi, const ClassifyOptions& options) {
  DistillabilityReport report;
  report.dims = psi.dims();
  const DensityMatrix rho_ab = psi.rho_ab();
  const DensityMatrix rho_ae = psi.rho_ae();
  report.ab = analyze_reduction(rho_ab, "AB", options);
  report.ae = analyze_reduction(rho_ae, "AE", options);
  report.r = report.ab.r;
  report.r_a = report.ab.r_a;
  report.r_b = report.ab.r_x;
  report.r_e = report.ae.r_x;

  const bool both_ppt = report.ab.ppt.ppt && report.ae.ppt.ppt;
  report.classification = both_ppt ? Classification::kFullyUndistillableSeparable
                                   : Classification::kSomeReduction2WayDistillable;

  auto& rates = report.rates;
  if (both_ppt) {
    const StatusWithReason zero{RateStatus::kZero,
                                "both reductions PPT, hence separable and undistillable"};
    rates = {zero, zero, zero, zero};
    return report;
  }
  // An NPT reduction makes every configuration with at least one 2-way link
  // positive; only the purely 1-way configuration needs a certificate.
  const StatusWithReason npt_link{RateStatus::kPositive,
                                   "some reduction is NPT, so every configuration with a "
                                   "2-way link is positive"};
  rates.ab_2way_ae_2way = npt_link;
  rates.ab_2way_ae_1way = npt_link;
  rates.ab_1way_ae_2way = npt_link;
  rates.ab_1way_ae_1way = combine(report.ab.one_way, report.ae.one_way);
  return report;
}

RankRegimeRecord rank_regime(const DensityMatrix& rho_ab, const Tolerances& tol) {
  require_bipartite(rho_ab);
  RankRegimeRecord rec;
  rec.r = rank_of(rho_ab.matrix(), tol);
  rec.r_a = rank_of(marginal(rho_ab, Side::kA).matrix(), tol);
  rec.r_b = rank_of(marginal(rho_ab, Side::kB).matrix(), tol);
  const DensityMatrix rho_ae = states::complement(rho_ab, tol.rank_tol);
  rec.r_ae = rank_of(rho_ae.matrix(), tol);
  rec.r_e = rank_of(states::partial_trace(rho_ae, {1}).matrix(), tol);
  rec.complement_rank_pattern = rec.r == rec.r_e && rec.r_e <= rec.r_ae && rec.r_ae == rec.r_b;
  rec.ppt_equals_separable_regime = rec.r <= std::max(rec.r_a, rec.r_b);
  rec.strict_low_rank = rec.r < std::max(rec.r_a, rec.r_b);
  rec.ppt = states::is_ppt(rho_ab, tol.ppt_tol);
  if (rec.ppt_equals_separable_regime) {
    rec.verdict = rec.ppt.ppt ? RegimeVerdict::kSeparable : RegimeVerdict::kEntangled2WayDistillable;
  } else {
    rec.verdict = rec.ppt.ppt ? RegimeVerdict::kPptSeparabilityUndecided
                              : RegimeVerdict::kNptDistillabilityUndecided;
  }
  return rec;
}

}  // namespace distill
}  // namespace undistill
