#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "multibarrier/geometry.hpp"
#include "multibarrier/wavepacket.hpp"

namespace mbp {

enum class Scheme {
  crank_nicolson,  // implicit, unconditionally stable, norm-conserving
  paper_explicit,  // forward-time centered-space; guarded by dx^2 > dt
};

const char* to_string(Scheme s);
std::optional<Scheme> parse_scheme(const std::string& name);

/// Evolution under i dpsi/dt = -(1/(2m)) d2psi/dx2 + V(x) psi with
/// Dirichlet-zero boundaries at the grid edges.
struct EvolutionConfig {
  Scheme scheme = Scheme::crank_nicolson;
  double t_final = 6.0;      // t_final/dt must be a nonnegative integer
  int snapshot_stride = 0;   // 0 = final only
  double mass = 0.5;
};

/// V sampled pointwise at grid nodes, no sub-cell averaging.
std::vector<double> sample_potential(const BarrierLayout& layout, double height,
                                     const GridSpec& grid);

/// Precomputed per-step operator data for one (grid, potential, scheme).
/// Holds a scratch buffer, so one instance must not be shared across
/// threads; concurrent evolutions each prepare their own.
class StepOperator {
 public:
  static StepOperator prepare(const GridSpec& grid, std::span<const double> potential,
                              Scheme scheme, double mass);

  /// One dt advance. Crank-Nicolson solves the implicit tridiagonal system
  /// with precomputed elimination factors; the explicit scheme applies the
  /// forward-time centered-space update.
  void apply(std::vector<std::complex<double>>& psi) const;

  Scheme scheme() const { return scheme_; }

 private:
  Scheme scheme_ = Scheme::crank_nicolson;
  int n_ = 0;
  // Crank-Nicolson: (I + i dt/2 H) psi' = (I - i dt/2 H) psi
  std::complex<double> off_a_;               // off-diagonal of the implicit matrix
  std::complex<double> off_b_;               // off-diagonal of the explicit rhs matrix
  std::vector<std::complex<double>> diag_b_; // rhs diagonal
  std::vector<std::complex<double>> cp_;     // precomputed elimination factors
  std::vector<std::complex<double>> inv_denom_;
  mutable std::vector<std::complex<double>> rhs_;
  // explicit scheme
  double kin_over_dx2_ = 0.0;
  double dt_ = 0.0;
  std::vector<double> potential_;
};

ComplexField step_once(const StepOperator& op, const ComplexField& field);

using SnapshotSink = std::function<void(int step, const ComplexField&)>;

/// Advances `initial` to t_final. Throws std::invalid_argument when the
/// explicit scheme is requested with dx^2 <= dt or when t_final/dt is not an
/// integer, and std::runtime_error (with the step index) if a non-finite
/// value appears mid-run. With snapshot_stride > 0 the sink also receives
/// the state at steps 0, stride, 2*stride, ... and the final step.
ComplexField evolve(const ComplexField& initial, const BarrierLayout& layout,
                    double height, const EvolutionConfig& config,
                    const SnapshotSink& sink = {});

}  // namespace mbp
