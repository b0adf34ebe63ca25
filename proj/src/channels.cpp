#include "undistill/channels.hpp"

#include <cmath>
#include <string>

#include "undistill/error.hpp"

namespace undistill {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

}  // namespace

ChoiChannel::ChoiChannel(std::size_t d_in, std::size_t d_out, DensityMatrix choi)
    : d_in_(d_in), d_out_(d_out), choi_(std::move(choi)) {
  if (d_in_ == 0 || d_out_ == 0) {
    throw Error(ErrorKind::kBadParameter, "channel dimensions must be >= 1");
  }
  if (choi_.dims() != Dims{d_in_, d_out_}) {
    throw Error(ErrorKind::kDimensionMismatch, "Choi dims must be [d_in, d_out]");
  }
  const ComplexMatrix marginal = states::partial_trace(choi_, {0}).matrix();
  const ComplexMatrix target =
      ComplexMatrix::Identity(idx(d_in_), idx(d_in_)) / static_cast<double>(d_in_);
  const double dev = kernels::max_abs_diff(marginal, target);
  if (dev > kMarginalTol) {
    throw Error(ErrorKind::kNotTracePreserving,
                "Tr_out J deviates from 1/d_in by " + std::to_string(dev));
  }
}

namespace channels {

ComplexVector maximally_entangled(std::size_t d) {
  if (d == 0) throw Error(ErrorKind::kBadParameter, "dimension must be >= 1");
  ComplexVector v = ComplexVector::Zero(idx(d * d));
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < d; ++i) v(idx(i * d + i)) = amp;
  return v;
}

ComplexMatrix apply(const ChoiChannel& channel, const ComplexMatrix& x) {
  const std::size_t din = channel.d_in(), dout = channel.d_out();
  if (x.rows() != idx(din) || x.cols() != idx(din)) {
    throw Error(ErrorKind::kDimensionMismatch, "input must be d_in x d_in");
  }
  const ComplexMatrix& j = channel.choi().matrix();
  ComplexMatrix out = ComplexMatrix::Zero(idx(dout), idx(dout));
  for (std::size_t a = 0; a < din; ++a)
    for (std::size_t b = 0; b < din; ++b) {
      const Complex w = x(idx(a), idx(b));
      if (w == Complex(0.0)) continue;
      out += w * j.block(idx(a * dout), idx(b * dout), idx(dout), idx(dout));
    }
  return static_cast<double>(din) * out;
}

ChoiChannel channel_from_choi(const DensityMatrix& choi, std::size_t d_in, std::size_t d_out) {
  return ChoiChannel(d_in, d_out, choi);
}

ComplexMatrix choi_from_action(const ChoiChannel& channel) {
  const std::size_t din = channel.d_in(), dout = channel.d_out();
  ComplexMatrix j = ComplexMatrix::Zero(idx(din * dout), idx(din * dout));
  for (std::size_t a = 0; a < din; ++a)
    for (std::size_t b = 0; b < din; ++b) {
      ComplexMatrix unit = ComplexMatrix::Zero(idx(din), idx(din));
      unit(idx(a), idx(b)) = 1.0;
      j.block(idx(a * dout), idx(b * dout), idx(dout), idx(dout)) = channels::apply(channel, unit);
    }
  return j / static_cast<double>(din);
}

ChoiChannel identity_channel(std::size_t d) {
  const ComplexVector omega = maximally_entangled(d);
  return ChoiChannel(d, d, DensityMatrix({d, d}, omega * omega.adjoint()));
}

ChoiChannel complement_channel(const ChoiChannel& channel, double rank_tol) {
  const TripartitePureState psi = states::purify(channel.choi(), rank_tol);
  return ChoiChannel(channel.d_in(), psi.d_e(), psi.rho_ae());
}

ChoiChannel werner_holevo() {
  constexpr std::size_t d = 3;
  ComplexMatrix swap = ComplexMatrix::Zero(idx(d * d), idx(d * d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) swap(idx(i * d + j), idx(j * d + i)) = 1.0;
  const ComplexMatrix choi = (ComplexMatrix::Identity(idx(d * d), idx(d * d)) - swap) / 6.0;
  return ChoiChannel(d, d, DensityMatrix({d, d}, choi));
}

namespace {

ComplexMatrix depolarizing_choi(std::size_t d, double q) {
  const ComplexVector omega = maximally_entangled(d);
  const double dd = static_cast<double>(d);
  return (1.0 - q) * (omega * omega.adjoint()) +
         q * ComplexMatrix::Identity(idx(d * d), idx(d * d)) / (dd * dd);
}

}  // namespace

ChoiChannel depolarizing(std::size_t d, double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw Error(ErrorKind::kBadParameter, "depolarizing parameter must lie in [0, 1]");
  }
  return ChoiChannel(d, d, DensityMatrix({d, d}, depolarizing_choi(d, q)));
}

ChoiChannel example1_channel(std::size_t d_a, double q) {
  if (d_a < 2) throw Error(ErrorKind::kBadParameter, "d_A must be >= 2");
  if (!(q > 0.0 && q < 1.0)) {
    throw Error(ErrorKind::kBadParameter, "q must lie in the open interval (0, 1)");
  }
  const std::size_t dout = 2 * d_a;
  const ComplexVector omega = maximally_entangled(d_a);
  const ComplexMatrix j_id = omega * omega.adjoint();
  const ComplexMatrix j_dep = depolarizing_choi(d_a, q);

  ComplexMatrix j = ComplexMatrix::Zero(idx(d_a * dout), idx(d_a * dout));
  for (std::size_t a = 0; a < d_a; ++a)
    for (std::size_t b = 0; b < d_a; ++b)
      for (std::size_t o = 0; o < d_a; ++o)
        for (std::size_t p = 0; p < d_a; ++p) {
          const Complex id_entry = j_id(idx(a * d_a + o), idx(b * d_a + p));
          const Complex dep_entry = j_dep(idx(a * d_a + o), idx(b * d_a + p));
          j(idx(a * dout + o), idx(b * dout + p)) = 0.5 * id_entry;
          j(idx(a * dout + d_a + o), idx(b * dout + d_a + p)) = 0.5 * dep_entry;
        }
  return ChoiChannel(d_a, dout, DensityMatrix({d_a, dout}, j));
}

CapacityBounds capacity_bounds_from_distillation(std::size_t d_a, double distill_lower) {
  if (d_a == 0) throw Error(ErrorKind::kBadParameter, "d_A must be >= 1");
  if (!(distill_lower >= 0.0)) {
    throw Error(ErrorKind::kBadParameter, "distillation rate must be non-negative");
  }
  const double dd = static_cast<double>(d_a);
  return {distill_lower, dd * dd * distill_lower};
}

}  // namespace channels
}  // namespace undistill
