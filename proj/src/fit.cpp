#include "qlr/fit.hpp"

#include "qlr/errors.hpp"

namespace qlr {

LinearFit fit_line(const std::vector<double>& xs,
                   const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw Error("fit_line: length mismatch");
  const int n = static_cast<int>(xs.size());
  LinearFit fit;
  fit.points = n;
  if (n < 2) throw Error("fit_line: need at least 2 points");
  double sx = 0, sy = 0;
  for (int i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0) throw Error("fit_line: degenerate abscissae");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (int i = 0; i < n; ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += r * r;
  }
  fit.slope_stderr = (n > 2) ? std::sqrt(ss / (n - 2) / sxx) : 0.0;
  return fit;
}

double counter_uniform(std::uint64_t seed, std::uint64_t stream,
                       std::uint64_t counter) {
  std::uint64_t z = seed;
  z ^= 0x9e3779b97f4a7c15ULL + (stream << 1);
  z ^= counter * 0xbf58476d1ce4e5b9ULL;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return double(z >> 11) * 0x1.0p-53;
}

}  // namespace qlr
