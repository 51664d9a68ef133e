#pragma once

#include <array>
#include <span>

#include "multibarrier/wavepacket.hpp"

namespace mbp {

/// Symmetric tridiagonal 3x3: three diagonal entries, two off-diagonals.
/// beta entries are nonnegative (Lanczos normalization convention). On
/// breakdown the remaining entries are zero-padded and the flag set; no
/// restarts, so scans stay deterministic.
struct Tridiag3 {
  std::array<double, 3> alpha{};
  std::array<double, 2> beta{};
  bool breakdown = false;
};

/// All five entries divided by alpha[0] (when nonzero): scale-free form used
/// for periodicity detection.
Tridiag3 normalized(const Tridiag3& t);

/// Pointwise multiplication by a fixed density: diagonal, symmetric.
class DensityOperator {
 public:
  explicit DensityOperator(RealField density);

  void apply(std::span<const double> in, std::span<double> out) const;
  const RealField& field() const { return density_; }
  double scale() const { return scale_; }  // max |density|, breakdown threshold scale

 private:
  RealField density_;
  double scale_ = 0.0;
};

/// Three-step Lanczos recurrence with the dx-weighted inner product and full
/// reorthogonalization against previous vectors. Breakdown when
/// beta < 1e-14 * scale of the operator. Throws on a zero seed.
Tridiag3 lanczos3(const DensityOperator& op, const RealField& seed);

/// Tridiagonalization of multiplication-by-final-density seeded with the
/// initial density; the correlation C is the bottom diagonal entry.
Tridiag3 correlate(const RealField& initial_density, const RealField& final_density);

inline double correlation_value(const Tridiag3& t) { return t.alpha[2]; }

}  // namespace mbp
