#pragma once

#include <string>
#include <vector>

namespace mbp {

/// Parameters of the bounded multibarrier potential: N identical rectangular
/// barriers of height `height` spread over `total_length`, with the ratio of
/// total gap width to total barrier width equal to `c`.
struct PotentialSpec {
  int n_barriers = 10;
  double c = 1.0;
  double total_length = 20.0;
  double height = 2.0;
};

enum class SpecError {
  none,
  too_few_barriers,    // N < 2: gap width b/(N-1) undefined
  nonpositive_ratio,   // c <= 0
  nonpositive_length,  // L <= 0
  nonpositive_height,  // V <= 0
};

SpecError validate(const PotentialSpec& spec);
const char* to_string(SpecError e);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Explicit tiling of the axis: the array spans [-L/2, +L/2], begins and ends
/// with a barrier, and alternates barrier / gap. Closed barrier intervals.
struct BarrierLayout {
  double a = 0.0;              // total barrier width, L/(1+c)
  double b = 0.0;              // total gap width, L*c/(1+c)
  double barrier_width = 0.0;  // a/N
  double gap_width = 0.0;      // b/(N-1)
  double total_length = 0.0;
  double height = 0.0;
  std::vector<Interval> intervals;  // N barrier intervals, sorted, disjoint

  double half_span() const { return total_length / 2.0; }
};

/// Throws std::invalid_argument (message from to_string(SpecError)) if the
/// spec is invalid. Deterministic: equal specs give bit-identical layouts.
BarrierLayout build_layout(const PotentialSpec& spec);

/// `height` if x lies inside any barrier interval (boundary points included),
/// 0 otherwise. Total function of x.
double potential_at(const BarrierLayout& layout, double x, double height);

}  // namespace mbp
