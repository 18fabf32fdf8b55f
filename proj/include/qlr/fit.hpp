#ifndef QLR_FIT_HPP
#define QLR_FIT_HPP

#include <cmath>
#include <cstdint>
#include <vector>

namespace qlr {

/// Ordinary least-squares line fit y = slope*x + intercept.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  int points = 0;
};

LinearFit fit_line(const std::vector<double>& xs,
                   const std::vector<double>& ys);

/// Counter-based uniform deviate in [0,1): a pure hash of
/// (seed, stream, counter), so parallel evaluation order cannot change it.
double counter_uniform(std::uint64_t seed, std::uint64_t stream,
                       std::uint64_t counter);

}  // namespace qlr

#endif  // QLR_FIT_HPP
