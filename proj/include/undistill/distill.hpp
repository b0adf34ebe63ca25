#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "undistill/states.hpp"

namespace undistill {

enum class Side { kA, kB };

const char* to_string(Side side);

/// Result of the local filter {Y, sqrt(1 - Y^dagger Y)} applied on one side,
/// conditioned on the Y outcome.
struct FilterOutcome {
  Side side = Side::kB;
  ComplexMatrix filter_operator;     // Y on the filtering party only
  double p_succ = 0.0;               // Tr[(Y) rho (Y)^dagger], trace formula
  double p_succ_closed_form = 0.0;   // lambda_min * r_side
  DensityMatrix filtered_state;      // rho' = filtered / p_succ
  ComplexMatrix support_projector;   // Pi on the filtering side
  std::size_t r = 0;                 // rank rho
  std::size_t r_side = 0;            // rank of the filtered marginal
  std::size_t r_filtered = 0;        // rank rho'
  double lambda_min = 0.0;           // smallest positive eigenvalue of the pre-filter marginal
};

namespace distill {

/// Y = sqrt(lambda_min) * marginal^{-1/2} on the support of the marginal.
FilterOutcome filter(const DensityMatrix& rho_ab, Side side, const Tolerances& tol = {});

/// lambda_min * r_side * (log2 r_side - log2 r): ebits per copy achievable by
/// filtering on `side` then hashing. Throws PreconditionRankNotLow unless
/// rank rho < rank of the side's marginal.
double low_rank_bound(const DensityMatrix& rho_ab, Side side, const Tolerances& tol = {});

/// p_succ * [S(rho'_side) - S(rho')].
double filtered_hashing_rate(const DensityMatrix& rho_ab, Side side, const Tolerances& tol = {});

struct WitnessSearchResult {
  std::optional<ComplexVector> phi;
  std::size_t trial_index = 0;  // index of the returned phi, or trials tried
  std::size_t trials_used = 0;
  std::size_t target_rank = 0;  // rank rho_AB

  bool found() const { return phi.has_value(); }
};

/// Trial vector number `trial` of a witness search on C^{d_a}: the
/// computational basis for trial < d_a, then Haar-random unit vectors drawn
/// from Rng(seed, trial - d_a).
ComplexVector witness_trial_vector(std::size_t d_a, std::uint64_t seed, std::size_t trial);

/// True iff rank Tr_A[(|phi><phi| (x) 1) rho] equals rank rho.
bool is_one_way_witness(const DensityMatrix& rho_ab, const ComplexVector& phi,
                        const Tolerances& tol = {});

/// Looks for phi on A with rank rho^phi_B = rank rho_AB. A returned phi
/// certifies one-way distillability; an empty result certifies nothing.
/// Trials run in parallel; the lowest successful trial index wins, so the
/// result equals `one_way_witness_search_serial`.
/// Throws PreconditionRankNotLow unless rank rho_AB < rank rho_B.
WitnessSearchResult one_way_witness_search(const DensityMatrix& rho_ab, std::size_t budget,
                                           std::uint64_t seed, const Tolerances& tol = {});

/// Serial reference for `one_way_witness_search`.
WitnessSearchResult one_way_witness_search_serial(const DensityMatrix& rho_ab,
                                                  std::size_t budget, std::uint64_t seed,
                                                  const Tolerances& tol = {});

enum class RateStatus { kZero, kPositive, kUnknown };
const char* to_string(RateStatus status);

enum class Classification { kFullyUndistillableSeparable, kSomeReduction2WayDistillable };
const char* to_string(Classification c);

struct StatusWithReason {
  RateStatus status = RateStatus::kUnknown;
  std::string reason;
};

/// Everything the classifier learns about one reduction rho_AX (X = B or E).
struct ReductionAnalysis {
  std::string label;  // "AB" or "AE"
  Dims dims;
  std::size_t r = 0;
  std::size_t r_a = 0;
  std::size_t r_x = 0;
  states::PptVerdict ppt;
  std::optional<double> low_rank_bound_x;  // filter on X; present iff r < r_x
  std::optional<double> low_rank_bound_a;  // filter on A; present iff r < r_a
  std::optional<double> filtered_rate_x;
  std::optional<double> filtered_rate_a;
  double coherent_information = 0.0;       // S(rho_X) - S(rho_AX)
  bool witness_search_run = false;
  std::optional<WitnessSearchResult> witness;
  /// Witness search exhausted with r < r_x: the "rank rho^phi < min{r, r_x}
  /// for all phi" implication is reported, flagged heuristic because a
  /// finite budget cannot prove the universal quantifier.
  bool all_phi_rank_deficit_heuristic = false;
  StatusWithReason one_way;
  StatusWithReason two_way;
};

/// The four maximal rates of the tripartite configuration, named by the
/// (AB link, AE link) communication pattern.
struct ConfigurationStatuses {
  StatusWithReason ab_2way_ae_2way;
  StatusWithReason ab_2way_ae_1way;
  StatusWithReason ab_1way_ae_2way;
  StatusWithReason ab_1way_ae_1way;
};

struct ClassifyOptions {
  Tolerances tol;
  std::size_t witness_budget = 50;
  std::uint64_t seed = 0;
};

struct DistillabilityReport {
  Dims dims;  // [d_A, d_B, d_E]
  std::size_t r = 0, r_a = 0, r_b = 0, r_e = 0;
  ReductionAnalysis ab;
  ReductionAnalysis ae;
  Classification classification = Classification::kSomeReduction2WayDistillable;
  ConfigurationStatuses rates;
};

DistillabilityReport classify(const TripartitePureState& psi, const ClassifyOptions& options = {});

enum class RegimeVerdict {
  kSeparable,
  kEntangled2WayDistillable,
  kPptSeparabilityUndecided,
  kNptDistillabilityUndecided,
};
const char* to_string(RegimeVerdict v);

/// Rank bookkeeping of rho_AB against its canonical complement.
struct RankRegimeRecord {
  std::size_t r = 0, r_a = 0, r_b = 0, r_e = 0, r_ae = 0;
  /// rank rho_AB = rank rho_E <= rank rho_AE = rank rho_B
  bool complement_rank_pattern = false;
  /// rank rho_AB <= max{rank rho_A, rank rho_B}: PPT is equivalent to separable
  bool ppt_equals_separable_regime = false;
  /// rank rho_AB < max{rank rho_A, rank rho_B}: two-way distillable
  bool strict_low_rank = false;
  states::PptVerdict ppt;
  RegimeVerdict verdict = RegimeVerdict::kPptSeparabilityUndecided;
};

RankRegimeRecord rank_regime(const DensityMatrix& rho_ab, const Tolerances& tol = {});

}  // namespace distill
}  // namespace undistill
