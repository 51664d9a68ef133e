#include "multibarrier/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace mbp {

SpecError validate(const PotentialSpec& spec) {
  if (spec.n_barriers < 2) return SpecError::too_few_barriers;
  if (!(spec.c > 0.0)) return SpecError::nonpositive_ratio;
  if (!(spec.total_length > 0.0)) return SpecError::nonpositive_length;
  if (!(spec.height > 0.0)) return SpecError::nonpositive_height;
  return SpecError::none;
}

const char* to_string(SpecError e) {
  switch (e) {
    case SpecError::none: return "ok";
    case SpecError::too_few_barriers: return "n_barriers must be >= 2 (gap width undefined)";
    case SpecError::nonpositive_ratio: return "ratio c must be > 0";
    case SpecError::nonpositive_length: return "total length must be > 0";
    case SpecError::nonpositive_height: return "barrier height must be > 0";
  }
  return "unknown";
}

BarrierLayout build_layout(const PotentialSpec& spec) {
  if (SpecError e = validate(spec); e != SpecError::none)
    throw std::invalid_argument(to_string(e));

  const int n = spec.n_barriers;
  BarrierLayout layout;
  layout.total_length = spec.total_length;
  layout.height = spec.height;
  layout.a = spec.total_length / (1.0 + spec.c);
  layout.b = spec.total_length * spec.c / (1.0 + spec.c);
  layout.barrier_width = layout.a / n;
  layout.gap_width = layout.b / (n - 1);

  const double pitch = layout.barrier_width + layout.gap_width;
  layout.intervals.resize(n);
  for (int i = 0; i < n; ++i) {
    double lo = -spec.total_length / 2.0 + i * pitch;
    layout.intervals[i] = Interval{lo, lo + layout.barrier_width};
  }
  return layout;
}

double potential_at(const BarrierLayout& layout, double x, double height) {
  const auto& iv = layout.intervals;
  auto it = std::upper_bound(iv.begin(), iv.end(), x,
                             [](double v, const Interval& in) { return v < in.lo; });
  if (it == iv.begin()) return 0.0;
  const Interval& in = *(it - 1);
  return (x <= in.hi) ? height : 0.0;
}

}  // namespace mbp
