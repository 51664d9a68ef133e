#pragma once

#include <optional>
#include <vector>

#include "multibarrier/rational.hpp"

namespace mbp {

/// Bundled reference dataset: published correlation values over the
/// {N = 4..15, 31..40, 55..72} x {4, 7/3, 3/2, 1, 2/3, 1/4} grid, with the
/// marker for entries reported periodic in N with period 140. Reports render
/// side-by-side agreement against this table; agreement is informational.
struct Table1Entry {
  int n = 0;
  Rational c{1, 1};
  double correlation = 0.0;
  bool periodic_140 = false;
};

const std::vector<Table1Entry>& table1_reference();
const Table1Entry* table1_lookup(int n, const Rational& c);

}  // namespace mbp
