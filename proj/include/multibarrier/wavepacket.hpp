#pragma once

#include <complex>
#include <vector>

namespace mbp {

/// Uniform spatial grid plus the time step used by the evolution schemes.
struct GridSpec {
  double x_min = -40.0;
  double x_max = 60.0;
  double dx = 1.0 / 7.0;
  double dt = 1.0 / 50.0;
  int n_points = 701;

  double x(int i) const { return x_min + i * dx; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// n_points = round((x_max - x_min)/dx) + 1. Throws on nonpositive spacing
/// or an empty extent.
GridSpec make_grid(double x_min, double x_max, double dx, double dt);

/// Default extent [-40, 60]: the packet center travels p0/m * t = 36 units
/// right of x0 = -10 by t = 6, leaving a wide margin before the Dirichlet
/// walls on both sides.
GridSpec default_grid();

struct PacketParams {
  double x0 = -10.0;   // initial mean position
  double p0 = 3.0;     // initial momentum
  double w0 = 0.5;     // initial momentum-space width
  double mass = 0.5;
};

struct ComplexField {
  GridSpec grid;
  std::vector<std::complex<double>> values;
};

struct RealField {
  GridSpec grid;
  std::vector<double> values;
};

/// Closed-form free Gaussian packet
///   psi(x,t) = sqrt(w0) pi^(1/4) e^{-p0^2/(4 w0^2)}
///              * exp(w0^2 (i(x0-x) - p0/(2 w0^2))^2 / g) / sqrt(g),
///   g = 1 + 2 i t w0^2 / m  (principal square root; Re g = 1 always).
/// Exact solution of i dpsi/dt = -(1/(2m)) d2psi/dx2, so for m = 1/2 it is
/// the free-potential oracle for the evolution module.
ComplexField analytic_packet(const PacketParams& params, const GridSpec& grid, double t);

/// Pointwise Re^2 + Im^2.
RealField density(const ComplexField& field);

/// Discrete l2 norm sqrt(sum |v_i|^2 dx).
double l2_norm(const ComplexField& field);
double l2_norm(const RealField& field);

/// sum conj(a_i) b_i dx. Throws std::invalid_argument on grid mismatch.
std::complex<double> overlap(const ComplexField& a, const ComplexField& b);
double overlap(const RealField& a, const RealField& b);

}  // namespace mbp
