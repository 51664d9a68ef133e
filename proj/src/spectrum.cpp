#include "multibarrier/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mbp {

TransferMatrix2 matmul(const TransferMatrix2& a, const TransferMatrix2& b) {
  return TransferMatrix2{
      a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
      a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
}

namespace {

// (psi, psi') propagator across a constant-potential slab: real 2x2, det 1.
struct SlabMatrix {
  double w11, w12, w21, w22;
};

SlabMatrix slab_matrix(double energy, double height, double width) {
  const double q2 = energy - height;
  // linear limit at E = V: cos(qw) -> 1, sin(qw)/q -> w
  if (q2 == 0.0) return SlabMatrix{1.0, width, 0.0, 1.0};
  if (q2 > 0.0) {
    const double q = std::sqrt(q2);
    const double cw = std::cos(q * width), sw = std::sin(q * width);
    return SlabMatrix{cw, sw / q, -q * sw, cw};
  }
  const double kappa = std::sqrt(-q2);
  const double cw = std::cosh(kappa * width), sw = std::sinh(kappa * width);
  return SlabMatrix{cw, sw / kappa, kappa * sw, cw};
}

// Q = Phi0^{-1} W Phi0 with Phi0 = [[1, 1], [ik, -ik]]; for real W this has
// the flux-conserving structure Q22 = conj(Q11), Q21 = conj(Q12).
TransferMatrix2 to_amplitudes(const SlabMatrix& w, double k) {
  const double sum = 0.5 * (w.w11 + w.w22);
  const double dif = 0.5 * (w.w11 - w.w22);
  const double t1 = 0.5 * (k * w.w12 - w.w21 / k);
  const double t2 = 0.5 * (k * w.w12 + w.w21 / k);
  return TransferMatrix2{{sum, t1}, {dif, -t2}, {dif, t2}, {sum, -t1}};
}

}  // namespace

TransferMatrix2 barrier_transfer(double energy, double height, double width) {
  if (!(energy > 0.0)) throw std::invalid_argument("energy must be > 0");
  if (width < 0.0) throw std::invalid_argument("width must be >= 0");
  return to_amplitudes(slab_matrix(energy, height, width), std::sqrt(energy));
}

TransferMatrix2 compose_transfer(const BarrierLayout& layout, double energy, double height) {
  if (!(energy > 0.0)) throw std::invalid_argument("energy must be > 0");
  const double k = std::sqrt(energy);
  TransferMatrix2 q{1.0, 0.0, 0.0, 1.0};
  const int n = static_cast<int>(layout.intervals.size());
  for (int i = 0; i < n; ++i) {
    q = matmul(to_amplitudes(slab_matrix(energy, height, layout.barrier_width), k), q);
    if (i + 1 < n)
      q = matmul(to_amplitudes(slab_matrix(energy, 0.0, layout.gap_width), k), q);
  }
  return q;
}

TransferMatrix2 shift_references(const TransferMatrix2& q, double k, double x_left,
                                 double x_right) {
  const std::complex<double> el = std::polar(1.0, k * x_left);
  const std::complex<double> er = std::polar(1.0, -k * x_right);
  // diag(er, 1/er) * Q * diag(el, 1/el)
  return TransferMatrix2{q.m11 * er * el, q.m12 * er / el,
                         q.m21 * el / er, q.m22 / (el * er)};
}

SMatrix2 s_from_transfer(const TransferMatrix2& q) {
  if (std::abs(q.m22) == 0.0)
    throw std::runtime_error("transmission zero: Q22 = 0");
  const std::complex<double> det = q.det();
  return SMatrix2{det / q.m22, q.m12 / q.m22, -q.m21 / q.m22, 1.0 / q.m22};
}

std::complex<double> det_condition(double energy, double radius, const SMatrix2& s) {
  const std::complex<double> g = std::polar(1.0, 2.0 * std::sqrt(energy) * radius);
  const std::complex<double> det_s = s.s11 * s.s22 - s.s12 * s.s21;
  return g * g * det_s - g * (s.s11 + s.s22) + 1.0;
}

namespace {

// One determinant evaluation at energy E for the given layout.
std::complex<double> eval_det(const BarrierLayout& layout, double height, double radius,
                              double energy) {
  const double k = std::sqrt(energy);
  TransferMatrix2 q = compose_transfer(layout, energy, height);
  q = shift_references(q, k, -layout.half_span(), layout.half_span());
  return det_condition(energy, radius, s_from_transfer(q));
}

// The determinant factors as det S (g - e^{-i phi_1})(g - e^{-i phi_2}) over
// the eigenphases phi_j of the unitary S matrix, so its zeros are exactly the
// 2 pi crossings of the branch functions psi_j(k) = 2 k R + phi_j(k). With
// R >= 5 L the Wigner delay cannot cancel the 2R drift, psi_j is increasing,
// and crossings can be counted exactly by winding; exponentially narrow
// resonances only steepen psi_j, they cannot hide roots from the count.

struct PhasePair {
  double phi[2];  // raw eigenphases in (-pi, pi]
};

PhasePair eigenphases(const SMatrix2& s) {
  const std::complex<double> tr = s.s11 + s.s22;
  const std::complex<double> det = s.s11 * s.s22 - s.s12 * s.s21;
  const std::complex<double> disc = std::sqrt(tr * tr - 4.0 * det);
  return PhasePair{{std::arg(0.5 * (tr + disc)), std::arg(0.5 * (tr - disc))}};
}

double principal(double angle) {
  const double two_pi = 2.0 * std::numbers::pi;
  angle = std::fmod(angle, two_pi);
  if (angle > std::numbers::pi) angle -= two_pi;
  if (angle <= -std::numbers::pi) angle += two_pi;
  return angle;
}

struct BranchSample {
  double k;
  double phi[2];  // unwrapped, continued from the previous sample
};

struct BranchScanner {
  const BarrierLayout& layout;
  double height;
  double radius;

  PhasePair raw(double k) const {
    TransferMatrix2 q = compose_transfer(layout, k * k, height);
    q = shift_references(q, k, -layout.half_span(), layout.half_span());
    return eigenphases(s_from_transfer(q));
  }

  // Causality bounds the eigenphase decrease across a cell to L dk (small),
  // while a resonance narrower than the cell steps it up by about pi. Any
  // measured move below that bound is therefore a wrapped positive jump and
  // gets lifted by 2 pi, keeping step-like resonances counted upward.
  double upward(double delta, double dk) const {
    const double causality_floor = layout.total_length * dk + 0.05;
    return delta < -causality_floor ? delta + 2.0 * std::numbers::pi : delta;
  }

  // continue both branches from `prev`, choosing the pairing with the least
  // total angular movement (eigenvalue order from the quadratic formula is
  // arbitrary and swaps along the scan)
  BranchSample continued(const BranchSample& prev, double k) const {
    const PhasePair p = raw(k);
    const double d_keep =
        std::abs(principal(p.phi[0] - prev.phi[0])) + std::abs(principal(p.phi[1] - prev.phi[1]));
    const double d_swap =
        std::abs(principal(p.phi[1] - prev.phi[0])) + std::abs(principal(p.phi[0] - prev.phi[1]));
    BranchSample out;
    out.k = k;
    const double dk = k - prev.k;
    const int a = d_swap < d_keep ? 1 : 0;
    out.phi[0] = prev.phi[0] + upward(principal(p.phi[a] - prev.phi[0]), dk);
    out.phi[1] = prev.phi[1] + upward(principal(p.phi[1 - a] - prev.phi[1]), dk);
    return out;
  }
};

constexpr double kDetKeepThreshold = 1e-8;
constexpr double kDuplicateMergeWidth = 1e-9;  // in energy

struct Root {
  double k;
  int branch;
};

// Bisect psi_j(k) = 2 pi n inside [a, b]; branch values are identified by
// proximity to the linear interpolation of the (already subdivided, hence
// slowly varying) endpoint phases.
double bisect_branch(const BranchScanner& scan, const BranchSample& a,
                     const BranchSample& b, int j, double target) {
  double lo = a.k, hi = b.k;
  double phi_lo = a.phi[j], phi_hi = b.phi[j];
  const double two_pi = 2.0 * std::numbers::pi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double guess =
        phi_lo + (phi_hi - phi_lo) * ((mid - lo) / (hi - lo > 0 ? hi - lo : 1.0));
    const PhasePair p = scan.raw(mid);
    double best = guess + principal(p.phi[0] - guess);
    if (std::abs(guess + principal(p.phi[1] - guess) - guess) < std::abs(best - guess))
      best = guess + principal(p.phi[1] - guess);
    const double f = 2.0 * mid * scan.radius + best - two_pi * target;
    if (std::abs(f) < 1e-10) return mid;
    if (f > 0.0) {
      hi = mid;
      phi_hi = best;
    } else {
      lo = mid;
      phi_lo = best;
    }
  }
  return 0.5 * (lo + hi);
}

// adaptive subdivision: split cells until both branches move by < pi/2
void collect_roots(const BranchScanner& scan, const BranchSample& a, const BranchSample& b,
                   int depth, std::vector<Root>& roots) {
  const double move =
      std::max(std::abs(b.phi[0] - a.phi[0]), std::abs(b.phi[1] - a.phi[1]));
  if (move > std::numbers::pi / 2.0 && depth < 60 && (b.k - a.k) > 1e-13 * std::max(1.0, b.k)) {
    const BranchSample mid = scan.continued(a, 0.5 * (a.k + b.k));
    BranchSample b2 = scan.continued(mid, b.k);
    collect_roots(scan, a, mid, depth + 1, roots);
    collect_roots(scan, mid, b2, depth + 1, roots);
    return;
  }
  const double two_pi = 2.0 * std::numbers::pi;
  for (int j = 0; j < 2; ++j) {
    const double psi_a = 2.0 * a.k * scan.radius + a.phi[j];
    const double psi_b = 2.0 * b.k * scan.radius + b.phi[j];
    // psi increases with k; count integer multiples of 2 pi crossed
    const long n_lo = static_cast<long>(std::floor(psi_a / two_pi));
    const long n_hi = static_cast<long>(std::floor(psi_b / two_pi));
    for (long n = n_lo + 1; n <= n_hi; ++n)
      roots.push_back(Root{bisect_branch(scan, a, b, j, static_cast<double>(n)), j});
  }
}

struct ScanHit {
  double energy;
  bool from_real;
  bool from_imag;
};

std::vector<ScanHit> scan_levels(const BarrierLayout& layout, double height,
                                 double e_min, double e_max, double radius,
                                 int samples_per_period) {
  const double k_lo = std::sqrt(e_min);
  const double k_hi = std::sqrt(e_max);
  // e^{2ikR} oscillates with period pi/R in k
  const double dk_target = (std::numbers::pi / radius) / samples_per_period;
  const int n = std::max(2, static_cast<int>(std::ceil((k_hi - k_lo) / dk_target)) + 1);
  const double dk = (k_hi - k_lo) / (n - 1);

  const BranchScanner scan{layout, height, radius};
  std::vector<Root> roots;
  BranchSample prev;
  prev.k = k_lo;
  const PhasePair first = scan.raw(k_lo);
  prev.phi[0] = first.phi[0];
  prev.phi[1] = first.phi[1];
  for (int i = 1; i < n; ++i) {
    const BranchSample next = scan.continued(prev, k_lo + i * dk);
    collect_roots(scan, prev, next, 0, roots);
    prev = next;
  }

  std::sort(roots.begin(), roots.end(),
            [](const Root& a, const Root& b) { return a.k < b.k; });

  // merge duplicates (degenerate branch pairs), then keep genuine zeros and
  // probe which part of the determinant changes sign across each root
  std::vector<double> energies;
  for (const Root& r : roots) {
    const double e = r.k * r.k;
    if (!energies.empty() && std::abs(e - energies.back()) < kDuplicateMergeWidth) continue;
    energies.push_back(e);
  }

  // settle each root at the local |det| minimum so the keep decision cannot
  // depend on which scan resolution produced it
  auto polish = [&](double e) {
    double width = 2e-9;
    for (int round = 0; round < 3; ++round) {
      double best_e = e;
      double best = std::abs(eval_det(layout, height, radius, e));
      for (int i = -10; i <= 10; ++i) {
        const double probe = e + width * i / 10.0;
        if (probe <= 0.0) continue;
        const double v = std::abs(eval_det(layout, height, radius, probe));
        if (v < best) {
          best = v;
          best_e = probe;
        }
      }
      e = best_e;
      width *= 0.1;
    }
    return e;
  };

  std::vector<ScanHit> kept;
  const double probe_dk = (std::numbers::pi / radius) / 1000.0;
  for (double raw_e : energies) {
    const double e = polish(raw_e);
    if (std::abs(eval_det(layout, height, radius, e)) >= kDetKeepThreshold) continue;
    const double k = std::sqrt(e);
    const std::complex<double> lo_val =
        eval_det(layout, height, radius, std::pow(k - probe_dk, 2));
    const std::complex<double> hi_val =
        eval_det(layout, height, radius, std::pow(k + probe_dk, 2));
    ScanHit hit;
    hit.energy = e;
    hit.from_real = (lo_val.real() < 0.0) != (hi_val.real() < 0.0);
    hit.from_imag = (lo_val.imag() < 0.0) != (hi_val.imag() < 0.0);
    kept.push_back(hit);
  }
  return kept;
}

}  // namespace

LevelSet find_levels(const BarrierLayout& layout, double height, double e_min,
                     double e_max, double radius, int samples_per_period) {
  if (!(e_min > 0.0) || !(e_max > e_min))
    throw std::invalid_argument("energy range must satisfy 0 < e_min < e_max");
  if (radius < 5.0 * layout.total_length)
    throw std::invalid_argument("radius must be at least 5 * total length");
  if (samples_per_period < 1)
    throw std::invalid_argument("samples_per_period must be >= 1");

  const auto coarse = scan_levels(layout, height, e_min, e_max, radius, samples_per_period);
  const auto fine = scan_levels(layout, height, e_min, e_max, radius, 2 * samples_per_period);
  if (coarse.size() != fine.size())
    throw std::runtime_error("level scan is not resolution-stable: " +
                             std::to_string(coarse.size()) + " roots at base resolution vs " +
                             std::to_string(fine.size()) + " at doubled resolution");

  LevelSet out;
  out.radius = radius;
  out.levels.reserve(fine.size());
  for (const ScanHit& h : fine)
    out.levels.push_back(Level{h.energy, h.from_real, h.from_imag});
  return out;
}

SpacingHistogram spacing_statistics(const LevelSet& levels, int bins) {
  const std::size_t n = levels.levels.size();
  if (n < 2) throw std::invalid_argument("need at least two levels for spacings");
  if (bins < 1) throw std::invalid_argument("bins must be >= 1");

  std::vector<double> spacings(n - 1);
  double mean = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    spacings[i] = levels.levels[i + 1].energy - levels.levels[i].energy;
    mean += spacings[i];
  }
  mean /= static_cast<double>(n - 1);

  double s_max = 0.0;
  for (auto& s : spacings) {
    s /= mean;
    s_max = std::max(s_max, s);
  }

  SpacingHistogram hist;
  hist.mean_spacing = mean;
  const double top = s_max > 0.0 ? s_max * (1.0 + 1e-12) : 1.0;
  hist.edges.resize(bins + 1);
  for (int i = 0; i <= bins; ++i) hist.edges[i] = top * i / bins;
  hist.counts.assign(bins, 0);
  for (double s : spacings) {
    int b = static_cast<int>(s / top * bins);
    b = std::clamp(b, 0, bins - 1);
    ++hist.counts[b];
  }
  return hist;
}

double wigner_pdf(double s) {
  return 0.5 * std::numbers::pi * s * std::exp(-0.25 * std::numbers::pi * s * s);
}

}  // namespace mbp
