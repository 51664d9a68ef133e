#include "multibarrier/correlation.hpp"

#include <cmath>
#include <stdexcept>

namespace mbp {

Tridiag3 normalized(const Tridiag3& t) {
  const double a1 = t.alpha[0];
  if (a1 == 0.0) return t;
  Tridiag3 out = t;
  for (auto& a : out.alpha) a /= a1;
  for (auto& b : out.beta) b /= a1;
  return out;
}

DensityOperator::DensityOperator(RealField density) : density_(std::move(density)) {
  for (double v : density_.values) scale_ = std::max(scale_, std::abs(v));
}

void DensityOperator::apply(std::span<const double> in, std::span<double> out) const {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = density_.values[i] * in[i];
}

namespace {

double dot_dx(const std::vector<double>& a, const std::vector<double>& b, double dx) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * dx;
}

}  // namespace

Tridiag3 lanczos3(const DensityOperator& op, const RealField& seed) {
  if (!(seed.grid == op.field().grid))
    throw std::invalid_argument("seed and operator live on different grids");
  const double dx = seed.grid.dx;
  const double seed_norm = std::sqrt(dot_dx(seed.values, seed.values, dx));
  if (seed_norm == 0.0) throw std::invalid_argument("lanczos seed has zero norm");

  const std::size_t n = seed.values.size();
  const double breakdown_floor = 1e-14 * op.scale();

  Tridiag3 t;
  std::vector<std::vector<double>> basis;  // kept for full reorthogonalization
  std::vector<double> v(n), v_prev(n, 0.0), av(n), w(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = seed.values[i] / seed_norm;
  basis.push_back(v);

  double beta_prev = 0.0;
  for (int k = 0; k < 3; ++k) {
    op.apply(v, av);
    t.alpha[k] = dot_dx(v, av, dx);
    if (k == 2) break;

    for (std::size_t i = 0; i < n; ++i)
      w[i] = av[i] - t.alpha[k] * v[i] - beta_prev * v_prev[i];
    for (const auto& u : basis) {
      const double proj = dot_dx(u, w, dx);
      for (std::size_t i = 0; i < n; ++i) w[i] -= proj * u[i];
    }

    const double beta = std::sqrt(dot_dx(w, w, dx));
    if (beta <= breakdown_floor) {
      t.breakdown = true;  // zero-pad the remaining entries, no restart
      break;
    }
    t.beta[k] = beta;
    v_prev = v;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / beta;
    basis.push_back(v);
    beta_prev = beta;
  }
  return t;
}

Tridiag3 correlate(const RealField& initial_density, const RealField& final_density) {
  if (!(initial_density.grid == final_density.grid))
    throw std::invalid_argument("densities live on different grids");
  return lanczos3(DensityOperator(final_density), initial_density);
}

}  // namespace mbp
