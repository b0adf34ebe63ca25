#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "undistill/states.hpp"

namespace undistill {

/// Induced-measure ensemble: rho_AB = Tr_E |psi><psi| with psi Haar on
/// C^{d_A} (x) C^{d_B} (x) C^{d_E}.
struct EnsembleSpec {
  std::size_t d_a = 2;
  std::size_t d_b = 4;
  std::size_t d_e = 3;
  std::size_t n_samples = 200;
  std::uint64_t seed = 0;
  double rank_tol = 1e-10;
};

struct SampleRecord {
  std::size_t index = 0;
  std::size_t r = 0;
  std::size_t r_b = 0;
  std::vector<std::size_t> column_schmidt_ranks;  // one per A basis vector
  bool rank_ab_generic = false;   // r == min{d_E, d_A d_B}
  bool rank_b_generic = false;    // r_B == min{d_B, d_A d_E}
  bool columns_full_schmidt = false;  // every column has Schmidt rank d_E
  bool witness_found = false;
  std::size_t witness_trials = 0;
  // Tolerance audit: smallest kept and largest dropped eigenvalue.
  double ab_min_retained = 0.0;
  double ab_max_discarded = 0.0;
  double b_min_retained = 0.0;
  double b_max_discarded = 0.0;
};

struct EnsembleReport {
  EnsembleSpec spec;
  std::size_t witness_budget = 0;
  std::vector<SampleRecord> samples;  // in sample-index order
  std::size_t count_rank_ab = 0;
  std::size_t count_rank_b = 0;
  std::size_t count_schmidt = 0;
  std::size_t count_witness = 0;

  double freq_rank_ab() const;
  double freq_rank_b() const;
  double freq_schmidt() const;
  double freq_witness() const;
};

namespace sampling {

/// Standard complex Gaussian vector, normalized. Sample `stream` of `seed`.
TripartitePureState sample_pure(std::size_t d_a, std::size_t d_b, std::size_t d_e,
                                std::uint64_t seed, std::uint64_t stream = 0);

/// AB reduction of `sample_pure`.
DensityMatrix sample_state(std::size_t d_a, std::size_t d_b, std::size_t d_e,
                           std::uint64_t seed, std::uint64_t stream = 0);

/// Haar-random unit vector on C^d.
ComplexVector haar_vector(std::size_t d, std::uint64_t seed, std::uint64_t stream = 0);

/// Evaluates one sample of the ensemble. Sample i is drawn from stream i of
/// spec.seed; its witness search uses derive_seed(spec.seed, i).
SampleRecord evaluate_sample(const EnsembleSpec& spec, std::size_t index,
                             std::size_t witness_budget);

/// Checks the almost-sure rank facts and one-way witness existence on every
/// sample. Samples run in parallel; the report is in index order and equals
/// `run_low_rank_ensemble_serial`. Throws BadSpec unless d_E < d_B and all
/// dimensions and n_samples are >= 1.
EnsembleReport run_low_rank_ensemble(const EnsembleSpec& spec, std::size_t witness_budget);

EnsembleReport run_low_rank_ensemble_serial(const EnsembleSpec& spec,
                                            std::size_t witness_budget);

}  // namespace sampling
}  // namespace undistill
