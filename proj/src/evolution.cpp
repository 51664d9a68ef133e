#include "multibarrier/evolution.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mbp {

const char* to_string(Scheme s) {
  return s == Scheme::crank_nicolson ? "crank_nicolson" : "paper_explicit";
}

std::optional<Scheme> parse_scheme(const std::string& name) {
  if (name == "crank_nicolson" || name == "cn") return Scheme::crank_nicolson;
  if (name == "paper_explicit" || name == "explicit") return Scheme::paper_explicit;
  return std::nullopt;
}

std::vector<double> sample_potential(const BarrierLayout& layout, double height,
                                     const GridSpec& grid) {
  std::vector<double> v(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) v[i] = potential_at(layout, grid.x(i), height);
  return v;
}

StepOperator StepOperator::prepare(const GridSpec& grid, std::span<const double> potential,
                                   Scheme scheme, double mass) {
  if (static_cast<int>(potential.size()) != grid.n_points)
    throw std::invalid_argument("potential length does not match grid");
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be > 0");

  StepOperator op;
  op.scheme_ = scheme;
  op.n_ = grid.n_points;
  op.dt_ = grid.dt;
  const double kin = 1.0 / (2.0 * mass);
  op.kin_over_dx2_ = kin / (grid.dx * grid.dx);
  op.potential_.assign(potential.begin(), potential.end());

  if (scheme == Scheme::paper_explicit) {
    // forward-time centered-space; caller guards dx^2 > dt
    if (!(grid.dx * grid.dx > grid.dt))
      throw std::invalid_argument("paper_explicit requires dx^2 > dt");
    return op;
  }

  // Crank-Nicolson: (I + i dt/2 H) psi' = (I - i dt/2 H) psi,
  // H = -kin D2 + V, Dirichlet rows pinned to zero.
  const std::complex<double> half_idt(0.0, grid.dt / 2.0);
  op.off_a_ = half_idt * (-op.kin_over_dx2_);
  op.off_b_ = -op.off_a_;
  op.diag_b_.resize(op.n_);
  std::vector<std::complex<double>> diag_a(op.n_);
  for (int i = 0; i < op.n_; ++i) {
    const double h_diag = 2.0 * op.kin_over_dx2_ + op.potential_[i];
    diag_a[i] = 1.0 + half_idt * h_diag;
    op.diag_b_[i] = 1.0 - half_idt * h_diag;
  }

  // Thomas elimination factors over the interior points [1, n-2]
  const int m = op.n_ - 2;
  op.cp_.resize(m);
  op.inv_denom_.resize(m);
  std::complex<double> denom = diag_a[1];
  op.inv_denom_[0] = 1.0 / denom;
  op.cp_[0] = op.off_a_ * op.inv_denom_[0];
  for (int i = 1; i < m; ++i) {
    denom = diag_a[i + 1] - op.off_a_ * op.cp_[i - 1];
    op.inv_denom_[i] = 1.0 / denom;
    op.cp_[i] = op.off_a_ * op.inv_denom_[i];
  }
  op.rhs_.resize(m);
  return op;
}

void StepOperator::apply(std::vector<std::complex<double>>& psi) const {
  if (static_cast<int>(psi.size()) != n_) throw std::invalid_argument("field size mismatch");

  if (scheme_ == Scheme::paper_explicit) {
    const std::complex<double> idt(0.0, dt_);
    std::complex<double> prev = psi[0];
    for (int i = 1; i + 1 < n_; ++i) {
      const std::complex<double> lap =
          (psi[i + 1] - 2.0 * psi[i] + prev) * kin_over_dx2_;
      const std::complex<double> updated = psi[i] + idt * (lap - potential_[i] * psi[i]);
      prev = psi[i];
      psi[i] = updated;
    }
    psi[0] = 0.0;
    psi[n_ - 1] = 0.0;
    return;
  }

  const int m = n_ - 2;
  // rhs = (I - i dt/2 H) psi on the interior, boundaries held at zero
  for (int i = 0; i < m; ++i) {
    const int j = i + 1;
    rhs_[i] = diag_b_[j] * psi[j] + off_b_ * (psi[j - 1] + psi[j + 1]);
  }
  // forward sweep with precomputed factors
  rhs_[0] *= inv_denom_[0];
  for (int i = 1; i < m; ++i)
    rhs_[i] = (rhs_[i] - off_a_ * rhs_[i - 1]) * inv_denom_[i];
  // back substitution
  psi[n_ - 2] = rhs_[m - 1];
  for (int i = m - 2; i >= 0; --i) psi[i + 1] = rhs_[i] - cp_[i] * psi[i + 2];
  psi[0] = 0.0;
  psi[n_ - 1] = 0.0;
}

ComplexField step_once(const StepOperator& op, const ComplexField& field) {
  ComplexField out = field;
  op.apply(out.values);
  return out;
}

namespace {

int resolve_step_count(double t_final, double dt) {
  if (t_final < 0.0) throw std::invalid_argument("t_final must be >= 0");
  const double ratio = t_final / dt;
  const long steps = std::lround(ratio);
  const double scale = std::max(std::abs(t_final), dt);
  if (std::abs(steps * dt - t_final) > 1e-9 * scale)
    throw std::invalid_argument("t_final is not an integer multiple of dt");
  return static_cast<int>(steps);
}

bool all_finite(const std::vector<std::complex<double>>& v) {
  for (const auto& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

}  // namespace

ComplexField evolve(const ComplexField& initial, const BarrierLayout& layout,
                    double height, const EvolutionConfig& config,
                    const SnapshotSink& sink) {
  const GridSpec& grid = initial.grid;
  if (grid.x_min > -layout.half_span() || grid.x_max < layout.half_span())
    throw std::invalid_argument("grid does not contain the barrier array");

  const int steps = resolve_step_count(config.t_final, grid.dt);
  const auto potential = sample_potential(layout, height, grid);
  const StepOperator op =
      StepOperator::prepare(grid, potential, config.scheme, config.mass);

  ComplexField field = initial;
  field.values.front() = 0.0;  // Dirichlet-zero walls
  field.values.back() = 0.0;

  const int stride = config.snapshot_stride;
  if (sink && stride > 0) sink(0, field);
  for (int s = 1; s <= steps; ++s) {
    op.apply(field.values);
    if (!all_finite(field.values))
      throw std::runtime_error("non-finite value detected at step " + std::to_string(s));
    if (sink && stride > 0 && (s % stride == 0) && s != steps) sink(s, field);
  }
  if (sink) sink(steps, field);
  return field;
}

}  // namespace mbp
