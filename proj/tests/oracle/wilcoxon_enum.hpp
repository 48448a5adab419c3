#pragma once

// Brute-force signed-rank null distribution: enumerate all 2^n sign
// assignments of the observed mid-ranks.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace oracle {

struct Enumerated {
  double w_plus = 0.0;
  double w_minus = 0.0;
  double p_upper = 1.0;  // P(W+ >= observed)
};

inline std::vector<double> mid_ranks(const std::vector<double>& d) {
  std::vector<double> r(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    double below = 0, same = 0;
    for (double x : d) {
      if (std::fabs(x) < std::fabs(d[i])) ++below;
      if (std::fabs(x) == std::fabs(d[i])) ++same;
    }
    r[i] = below + (same + 1.0) / 2.0;
  }
  return r;
}

// `d` must already exclude zeros.
inline Enumerated enumerate_signed_rank(const std::vector<double>& d) {
  if (d.size() > 24) throw std::invalid_argument("enumeration limited to n <= 24");
  const auto r = mid_ranks(d);
  Enumerated e;
  for (std::size_t i = 0; i < d.size(); ++i) (d[i] > 0 ? e.w_plus : e.w_minus) += r[i];
  const std::uint64_t total = std::uint64_t{1} << d.size();
  std::uint64_t at_least = 0;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    double w = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (mask >> i & 1u) w += r[i];
    }
    if (w >= e.w_plus - 1e-9) ++at_least;
  }
  e.p_upper = static_cast<double>(at_least) / static_cast<double>(total);
  return e;
}

}  // namespace oracle
