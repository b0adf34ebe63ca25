#pragma once

#include <cstddef>

#include "undistill/states.hpp"

namespace undistill {

/// Channel M(d_in) -> M(d_out) stored as its Choi state
/// J = (id (x) Phi)(Omega+_{d_in}) with dims [d_in, d_out].
class ChoiChannel {
 public:
  static constexpr double kMarginalTol = 1e-6;

  /// Throws NotTracePreserving if Tr_out J differs from 1/d_in by more than
  /// kMarginalTol, DimensionMismatch if J's dims are not [d_in, d_out].
  ChoiChannel(std::size_t d_in, std::size_t d_out, DensityMatrix choi);

  std::size_t d_in() const { return d_in_; }
  std::size_t d_out() const { return d_out_; }
  const DensityMatrix& choi() const { return choi_; }

 private:
  std::size_t d_in_;
  std::size_t d_out_;
  DensityMatrix choi_;
};

namespace channels {

/// (1/sqrt d) sum_i |ii>
ComplexVector maximally_entangled(std::size_t d);

/// Phi(X) = d_in Tr_in[(X^T (x) 1) J]
ComplexMatrix apply(const ChoiChannel& channel, const ComplexMatrix& x);

ChoiChannel channel_from_choi(const DensityMatrix& choi, std::size_t d_in, std::size_t d_out);

/// Rebuilds the Choi matrix from the channel's action on matrix units.
ComplexMatrix choi_from_action(const ChoiChannel& channel);

ChoiChannel identity_channel(std::size_t d);

/// Complement obtained by purifying the Choi state and keeping (in, env).
/// The environment dimension is the numerical rank of the Choi matrix.
ChoiChannel complement_channel(const ChoiChannel& channel, double rank_tol = 1e-10);

/// Qutrit Werner-Holevo channel, Phi(X) = (Tr(X) 1 - X^T) / 2.
ChoiChannel werner_holevo();

/// Depolarizing channel (1-q) X + q Tr(X) 1/d.
ChoiChannel depolarizing(std::size_t d, double q);

/// Phi(X) = (X (+) Lambda(X)) / 2 with Lambda depolarizing(d_a, q); the
/// direct sum occupies output blocks [0, d_a) and [d_a, 2 d_a).
/// Throws BadParameter unless d_a >= 2 and 0 < q < 1.
ChoiChannel example1_channel(std::size_t d_a, double q = 0.5);

struct CapacityBounds {
  double q_lower = 0.0;         // Q >= D (distill, then teleport)
  double q_upper_factor = 0.0;  // Q <= d_A^2 D (teleportation simulates Phi w.p. 1/d_A^2)
};

/// Throws BadParameter for a negative rate or d_a == 0.
CapacityBounds capacity_bounds_from_distillation(std::size_t d_a, double distill_lower);

}  // namespace channels
}  // namespace undistill
