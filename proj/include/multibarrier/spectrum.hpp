#pragma once

#include <complex>
#include <vector>

#include "multibarrier/geometry.hpp"

namespace mbp {

/// 2x2 complex transfer matrix acting on plane-wave amplitude pairs (A, B),
/// psi = A e^{ikx} + B e^{-ikx}. det = 1 for every composition at real E > 0.
/// Dispersion convention throughout: E = k^2 (m = 1/2 units), shared with the
/// evolution half of the library.
struct TransferMatrix2 {
  std::complex<double> m11, m12, m21, m22;

  std::complex<double> det() const { return m11 * m22 - m12 * m21; }
};

TransferMatrix2 matmul(const TransferMatrix2& a, const TransferMatrix2& b);

/// S relates incoming (A_0, B_{2N+1}) to outgoing (A_{2N+1}, B_0); unitary at
/// real energies.
struct SMatrix2 {
  std::complex<double> s11, s12, s21, s22;
};

/// Transfer matrix of one rectangular slab of the given width and potential,
/// amplitudes referenced to the slab's own edges (so V = 0 gives
/// diag(e^{ikw}, e^{-ikw})). The E = V case uses the analytic linear limit
/// sinh(kappa w)/kappa -> w. Throws std::invalid_argument for E <= 0.
TransferMatrix2 barrier_transfer(double energy, double height, double width);

/// Ordered product of N barrier matrices interleaved with N-1 gap matrices,
/// referenced to the array edges [-L/2, +L/2].
TransferMatrix2 compose_transfer(const BarrierLayout& layout, double energy, double height);

/// Re-reference amplitudes from segment-local phases to global plane waves
/// e^{+-ikx}: Q_global = P(x_right)^{-1} Q P(x_left), P(x) = diag(e^{ikx}, e^{-ikx}).
TransferMatrix2 shift_references(const TransferMatrix2& q, double k, double x_left,
                                 double x_right);

/// Standard amplitude relations. Throws std::runtime_error when Q22 = 0
/// (transmission zero).
SMatrix2 s_from_transfer(const TransferMatrix2& q);

/// Determinant of [[g S11 - 1, g S12], [g S21, g S22 - 1]] with the periodic
/// plane-wave ratio g = e^{2ikR}. Expanded form g^2 det S - g tr S + 1.
std::complex<double> det_condition(double energy, double radius, const SMatrix2& s);

struct Level {
  double energy = 0.0;
  bool from_real = false;  // which part of the determinant the root annihilates
  bool from_imag = false;
};

struct LevelSet {
  std::vector<Level> levels;  // strictly increasing
  double radius = 0.0;
};

/// Roots of Re(det) = 0 and Im(det) = 0 located by sign-change bracketing in
/// k = sqrt(E) (uniform oscillation scale) plus bisection, merged within 1e-9
/// in E and kept only where |det| < 1e-8, i.e. where both parts vanish.
/// The scan runs at samples_per_period and 2x that; differing level counts
/// raise std::runtime_error (resolution guard). Enforces R >= 5 L.
LevelSet find_levels(const BarrierLayout& layout, double height, double e_min,
                     double e_max, double radius, int samples_per_period = 8);

struct SpacingHistogram {
  std::vector<double> edges;   // bins+1 edges over [0, max normalized spacing]
  std::vector<int> counts;
  double mean_spacing = 0.0;   // normalization used
};

/// Consecutive spacings normalized by their mean (minimal unfolding).
/// Requires at least two levels and bins >= 1.
SpacingHistogram spacing_statistics(const LevelSet& levels, int bins);

/// Wigner surmise (pi s / 2) e^{-pi s^2 / 4}.
double wigner_pdf(double s);

}  // namespace mbp
