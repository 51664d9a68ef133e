#include "multibarrier/wavepacket.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mbp {

GridSpec make_grid(double x_min, double x_max, double dx, double dt) {
  if (!(dx > 0.0)) throw std::invalid_argument("grid spacing must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be > 0");
  if (!(x_max > x_min)) throw std::invalid_argument("empty grid extent");
  GridSpec g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.dx = dx;
  g.dt = dt;
  g.n_points = static_cast<int>(std::lround((x_max - x_min) / dx)) + 1;
  return g;
}

GridSpec default_grid() { return make_grid(-40.0, 60.0, 1.0 / 7.0, 1.0 / 50.0); }

ComplexField analytic_packet(const PacketParams& params, const GridSpec& grid, double t) {
  if (!(params.w0 > 0.0)) throw std::invalid_argument("w0 must be > 0");
  if (!(params.mass > 0.0)) throw std::invalid_argument("mass must be > 0");

  const double w0 = params.w0;
  const std::complex<double> g(1.0, 2.0 * t * w0 * w0 / params.mass);
  const std::complex<double> sqrt_g = std::sqrt(g);  // principal branch, Re g = 1
  const double prefactor =
      std::sqrt(w0) * std::pow(std::numbers::pi, 0.25) *
      std::exp(-params.p0 * params.p0 / (4.0 * w0 * w0));
  const double q = params.p0 / (2.0 * w0 * w0);

  ComplexField field{grid, std::vector<std::complex<double>>(grid.n_points)};
  for (int i = 0; i < grid.n_points; ++i) {
    const std::complex<double> z(-q, params.x0 - grid.x(i));
    field.values[i] = prefactor * std::exp(w0 * w0 * z * z / g) / sqrt_g;
  }
  return field;
}

RealField density(const ComplexField& field) {
  RealField out{field.grid, std::vector<double>(field.values.size())};
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const auto& v = field.values[i];
    out.values[i] = v.real() * v.real() + v.imag() * v.imag();
  }
  return out;
}

double l2_norm(const ComplexField& field) {
  double s = 0.0;
  for (const auto& v : field.values) s += v.real() * v.real() + v.imag() * v.imag();
  return std::sqrt(s * field.grid.dx);
}

double l2_norm(const RealField& field) {
  double s = 0.0;
  for (double v : field.values) s += v * v;
  return std::sqrt(s * field.grid.dx);
}

namespace {
void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw std::invalid_argument("fields live on different grids");
}
}  // namespace

std::complex<double> overlap(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a.grid, b.grid);
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    s += std::conj(a.values[i]) * b.values[i];
  return s * a.grid.dx;
}

double overlap(const RealField& a, const RealField& b) {
  require_same_grid(a.grid, b.grid);
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
  return s * a.grid.dx;
}

}  // namespace mbp
