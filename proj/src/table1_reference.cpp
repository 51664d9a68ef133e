#include "multibarrier/table1_reference.hpp"

#include <array>

namespace mbp {

namespace {

struct Row {
  int n;
  std::array<double, 6> value;  // column order: c = 4, 7/3, 3/2, 1, 2/3, 1/4
  const char* p;                // '1' where the entry is marked periodic (140)
};

// clang-format off
constexpr Row kRows[] = {
  { 4, {5.31202e3,  4.392e1,    3.36365e3, 1.5939e3,  3.313e1,    1.0855e2},   "000000"},
  { 5, {4.55098e3,  6.380e2,    1.5324e2,  1.5478e2,  3.4617e2,   1.4041e2},   "000000"},
  { 6, {2.89038e4,  2.143528e4, 4.8818e2,  1.12423e3, 2.97818e3,  1.995463e4}, "000010"},
  { 7, {2.076735e4, 9.20498e3,  2.2882e2,  1.00467e3, 1.3024e2,   1.82352e3},  "001000"},
  { 8, {3.01606e3,  4.3025e2,   4.2984e2,  4.3489e2,  7.312e1,    1.555678e4}, "101001"},
  { 9, {3.06900e3,  4.59357e3,  1.421014e4,3.47268e3, 6.664e1,    2.05691e3},  "100001"},
  {10, {9.28730e2,  1.6697e3,   2.88651e3, 8.2338e2,  1.4825e2,   2.273285e4}, "011001"},
  {11, {5.37380e3,  5.43254e3,  1.29778e3, 8.378e1,   7.195e1,    4.4193e3},   "101101"},
  {12, {3.8843e2,   8.818e1,    3.316e2,   2.5926e2,  2.829e1,    2.93109e3},  "100010"},
  {13, {1.29587e3,  3.8130e1,   7.086e1,   6.284e1,   4.819e1,    6.2898e2},   "100101"},
  {14, {2.2356e2,   3.903e2,    4.743e1,   9.1362e2,  3.501e1,    2.63225e3},  "110001"},
  {15, {1.58547e3,  1.9687e2,   1.905e1,   3.664e1,   4.278e1,    4.228e2},    "110110"},
  {31, {1.1767e2,   7.134e1,    1.52509e3, 2.368e1,   5.5717e2,   2.305e1},    "001011"},
  {32, {3.4680e1,   4.026e1,    1.4336e2,  3.854e1,   3.7924e2,   3.017e1},    "101111"},
  {33, {1.08940e2,  2.887e1,    3.133e1,   2.39e1,    4.805e1,    2.981e1},    "110111"},
  {34, {3.77230e2,  6.677e1,    5.853e1,   2.21e1,    4.3716e2,   2.427e1},    "010111"},
  {35, {2.08800e1,  2.086e1,    2.562e1,   2.402e1,   2.46e1,     2.021e1},    "011111"},
  {36, {2.06600e1,  2.128e1,    2.12e1,    2.522e1,   2.991e1,    3.214e1},    "111111"},
  {37, {2.27400e1,  2.195e1,    8.573e1,   1.2641e2,  2.11e1,     2.5054e2},   "101111"},
  {38, {4.34410e2,  2.518e1,    5.223e1,   6.78e1,    1.1804e2,   4.173e1},    "111111"},
  {39, {2.4010e1,   2.139e1,    7.9903e2,  2.556e1,   1.1795e2,   7.3825e2},   "111111"},
  {40, {7.75907e3,  9.886e1,    2.0648e2,  1.5902e2,  3.951835e4, 8.43398e3},  "101101"},
  {55, {6.0292e2,   7.002e1,    2.3000e1,  8.085e1,   1.153e2,    9.3828e2},   "111111"},
  {56, {2.6082e2,   7.428e1,    2.1090e1,  3.69e1,    2.865e1,    2.108e1},    "111111"},
  {57, {2.109e1,    2.591e1,    2.6780e1,  2.673e1,   6.079e1,    7.158e1},    "111111"},
  {58, {1.2728e2,   3.629e1,    3.4680e1,  3.811e1,   3.308e1,    6.796e1},    "111110"},
  {59, {4.305e2,    1.6849e2,   4.3350e1,  4.462e1,   3.005e1,    3.7354e2},   "111111"},
  {60, {8.2816e2,   2.38018e3,  1.2109e2,  4.874e1,   5.301e1,    1.20593e3},  "111111"},
  {61, {7.9283e2,   2.966e2,    2.84059e3, 3.805e1,   2.472e1,    8.6802e2},   "111101"},
  {62, {7.30202e3,  9.50662e3,  4.9941e3,  3.553e1,   8.411e1,    2.717475e4}, "011111"},
  {63, {1.41355e3,  5.51001e3,  1.15584e3, 4.9719e2,  8.17489e3,  8.6817e2},   "111111"},
  {64, {6.98547e3,  4.4736e2,   4.3380e1,  2.241e1,   4.017e1,    5.33998e3},  "111111"},
  {65, {1.187e2,    3.811e2,    9.71896e3, 2.655e1,   3.04e1,     3.29676e3},  "111111"},
  {66, {1.80058e3,  3.21e1,     1.22609e3, 2.057e1,   1.8292e2,   1.276e2},    "111111"},
  {67, {2.7297e2,   1.0732e2,   9.7360e1,  2.244e1,   2.01296e3,  1.69351e3},  "111111"},
  {68, {3.1167e2,   3.4067e2,   3.4780e1,  2.164e1,   1.4212e2,   5.0016e2},   "111111"},
  {69, {2.274e1,    3.679e1,    2.3380e1,  2.12e1,    2.2945e2,   5.241e1},    "110111"},
  {70, {3.787e1,    2.53e1,     2.1300e1,  1.983e1,   1.983e1,    1.983e1},    "111111"},
  {71, {2.028e1,    2.028e1,    2.0280e1,  2.028e1,   2.912e1,    2.53e1},     "111101"},
  {72, {4.148e1,    5.996e1,    5.9960e1,  2.268e1,   2.905e1,    3.8058e2},   "111111"},
};
// clang-format on

const std::array<Rational, 6> kColumns = {Rational{4, 1}, Rational{7, 3}, Rational{3, 2},
                                          Rational{1, 1}, Rational{2, 3}, Rational{1, 4}};

}  // namespace

const std::vector<Table1Entry>& table1_reference() {
  static const std::vector<Table1Entry> entries = [] {
    std::vector<Table1Entry> out;
    out.reserve(240);
    for (const Row& row : kRows)
      for (int col = 0; col < 6; ++col)
        out.push_back(Table1Entry{row.n, kColumns[col], row.value[col], row.p[col] == '1'});
    return out;
  }();
  return entries;
}

const Table1Entry* table1_lookup(int n, const Rational& c) {
  for (const Table1Entry& e : table1_reference())
    if (e.n == n && e.c == c) return &e;
  return nullptr;
}

}  // namespace mbp
