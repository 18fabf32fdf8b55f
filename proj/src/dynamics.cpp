#include "qlr/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace qlr {

namespace {

double frac(double x) {
  double y = std::fmod(x, 1.0);
  return y < 0 ? y + 1.0 : y;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

DrivingSystem DrivingSystem::rotation(double alpha, double start) {
  if (alpha < 0.0 || alpha >= 1.0)
    throw ConfigError("rotation driver: alpha must be in [0,1)");
  DrivingSystem d;
  d.variant_ = Variant::Rotation;
  d.alpha_ = alpha;
  d.start_ = start;
  return d;
}

DrivingSystem DrivingSystem::bernoulli(std::uint64_t seed, int symbol_count) {
  if (symbol_count < 2)
    throw ConfigError("bernoulli driver: need at least 2 symbols");
  DrivingSystem d;
  d.variant_ = Variant::Bernoulli;
  d.seed_ = seed;
  d.symbol_count_ = symbol_count;
  return d;
}

DrivingSystem DrivingSystem::periodic(std::vector<double> cycle) {
  if (cycle.empty()) throw ConfigError("periodic driver: empty cycle");
  DrivingSystem d;
  d.variant_ = Variant::Periodic;
  d.cycle_ = std::move(cycle);
  return d;
}

double DrivingSystem::fiber_value(State omega) const {
  switch (variant_) {
    case Variant::Rotation:
      return frac(start_ + double(omega.index) * alpha_);
    case Variant::Bernoulli: {
      // The symbol at orbit index n is a pure function of (seed, n), which
      // makes the two-sided shift exactly invertible without storing
      // sequences.
      const std::uint64_t h =
          splitmix64(seed_ ^ (0x2545f4914f6cdd1dULL *
                              static_cast<std::uint64_t>(omega.index)));
      return double(h % std::uint64_t(symbol_count_)) / double(symbol_count_);
    }
    case Variant::Periodic: {
      const std::int64_t len = static_cast<std::int64_t>(cycle_.size());
      std::int64_t i = omega.index % len;
      if (i < 0) i += len;
      return cycle_[static_cast<std::size_t>(i)];
    }
  }
  return 0.0;
}

double TrigPoly::eval(double x) const {
  double acc = constant;
  for (const auto& t : terms)
    acc += t.amplitude * std::sin(kTwoPi * (t.freq * x + t.phase));
  return acc;
}

double TrigPoly::eval_derivative(double x) const {
  double acc = 0.0;
  for (const auto& t : terms)
    acc += t.amplitude * kTwoPi * t.freq *
           std::cos(kTwoPi * (t.freq * x + t.phase));
  return acc;
}

int TrigPoly::bandwidth() const {
  int bw = 0;
  for (const auto& t : terms) bw = std::max(bw, std::abs(t.freq));
  return bw;
}

SpectralField TrigPoly::to_field(int K) const {
  SpectralField f(1, K);
  f.set_coeff(0, constant);
  for (const auto& t : terms) {
    // a sin(2 pi (j x + phi)) = a/(2i) (e^{2 pi i phi} e_j - e^{-2 pi i phi} e_{-j})
    const Complex half = t.amplitude / Complex(0, 2);
    const Complex ph = std::polar(1.0, kTwoPi * t.phase);
    f.coeffs()[f.index(t.freq)] += half * ph;
    f.coeffs()[f.index(-t.freq)] -= half * std::conj(ph);
  }
  return f;
}

bool TrigPoly::is_zero() const {
  if (constant != 0.0) return false;
  for (const auto& t : terms)
    if (t.amplitude != 0.0) return false;
  return true;
}

MapFamily MapFamily::circle_expanding(int degree, std::vector<TrigTerm> terms,
                                      int order_N) {
  if (order_N < 0) throw ConfigError("circle family: order must be >= 0");
  MapFamily fam;
  fam.variant_ = Variant::CircleExpanding;
  fam.degree_ = degree;
  fam.base_terms_ = std::move(terms);
  fam.order_N_ = order_N;
  if (degree == 1 && fam.base_terms_.empty()) {
    // The identity map is admitted as a non-expanding control case for the
    // mixing and QR diagnostics.
    fam.expanding_range_ = 0.0;
    return fam;
  }
  if (degree < 2) throw ConfigError("circle family: degree must be >= 2");
  fam.check_expansion();
  return fam;
}

MapFamily MapFamily::u1_extension(int degree, std::vector<TrigTerm> base_terms,
                                  double tau_constant,
                                  std::vector<TrigTerm> tau_terms,
                                  int order_N) {
  MapFamily fam;
  fam.variant_ = Variant::U1Extension;
  fam.degree_ = degree;
  fam.base_terms_ = std::move(base_terms);
  fam.tau_constant_ = tau_constant;
  fam.tau_terms_ = std::move(tau_terms);
  fam.order_N_ = order_N;
  if (degree < 2) throw ConfigError("u1 family: base degree must be >= 2");
  fam.check_expansion();
  return fam;
}

MapFamily MapFamily::conjugated_doubling(double amplitude) {
  if (std::abs(amplitude) * kTwoPi >= 1.0)
    throw ConfigError("conjugated doubling: |a| must be < 1/(2 pi)");
  MapFamily fam;
  fam.variant_ = Variant::ConjugatedDoubling;
  fam.degree_ = 2;
  fam.order_N_ = 0;
  fam.conj_amplitude_ = amplitude;
  fam.check_expansion();
  return fam;
}

TrigPoly MapFamily::instantiate(const std::vector<TrigTerm>& terms,
                                double constant, double eps,
                                double omega_value, int eps_deriv) const {
  TrigPoly p;
  p.constant = (eps_deriv == 0) ? constant : 0.0;
  for (const auto& t : terms) {
    double amp;
    if (eps_deriv == 0) {
      amp = t.amplitude * std::pow(eps, double(t.eps_power));
    } else {
      amp = (t.eps_power == eps_deriv) ? t.amplitude * factorial(eps_deriv)
                                       : 0.0;
    }
    if (amp == 0.0) continue;
    p.terms.push_back(
        {t.freq, amp, t.fiber_mult * omega_value + t.phase});
  }
  return p;
}

CircleMap MapFamily::base_map(double eps, DrivingSystem::State omega,
                              const DrivingSystem& driver) const {
  if (variant_ == Variant::ConjugatedDoubling) {
    const double a = conj_amplitude_;
    CircleMap map;
    map.degree = 2;
    map.periodic_part = [a](double x) {
      const double u = conjugacy_inverse(a, x);
      return 2 * u + a * std::sin(kTwoPi * 2 * u) - 2 * x;
    };
    map.effective_bandwidth = 32;  // analytic conjugacy, fast coefficient decay
    return map;
  }
  TrigPoly p = instantiate(base_terms_, 0.0, eps, driver.fiber_value(omega), 0);
  CircleMap map;
  map.degree = degree_;
  map.effective_bandwidth = std::max(1, p.bandwidth());
  map.periodic_part = [p](double x) { return p.eval(x); };
  return map;
}

TrigPoly MapFamily::tau(double eps, DrivingSystem::State omega,
                        const DrivingSystem& driver) const {
  if (variant_ != Variant::U1Extension)
    throw Error("tau: family is not a U(1) extension");
  return instantiate(tau_terms_, tau_constant_, eps, driver.fiber_value(omega),
                     0);
}

void MapFamily::eval(double eps, DrivingSystem::State omega,
                     const DrivingSystem& driver, const double* in,
                     double* out) const {
  if (std::abs(eps) > 1.0) throw Error("eval_map: |eps| must be <= 1");
  const CircleMap base = base_map(eps, omega, driver);
  out[0] = base.eval(in[0]);
  if (variant_ == Variant::U1Extension) {
    const TrigPoly t = tau(eps, omega, driver);
    double s = in[1] + t.eval(in[0]) / kTwoPi;
    s = std::fmod(s, 1.0);
    out[1] = s < 0 ? s + 1.0 : s;
  }
}

TrigPoly MapFamily::eps_derivative_base(int j, DrivingSystem::State omega,
                                        const DrivingSystem& driver) const {
  if (j < 0 || j > order_N_)
    throw OrderError("eps_derivative: order " + std::to_string(j) +
                     " exceeds family order " + std::to_string(order_N_));
  if (variant_ == Variant::ConjugatedDoubling) return TrigPoly{};
  return instantiate(base_terms_, 0.0, 0.0, driver.fiber_value(omega), j);
}

TrigPoly MapFamily::eps_derivative_tau(int j, DrivingSystem::State omega,
                                       const DrivingSystem& driver) const {
  if (variant_ != Variant::U1Extension)
    throw Error("eps_derivative_tau: family is not a U(1) extension");
  if (j < 0 || j > order_N_)
    throw OrderError("eps_derivative: order exceeds family order");
  return instantiate(tau_terms_, tau_constant_, 0.0,
                     driver.fiber_value(omega), j);
}

void MapFamily::check_expansion() {
  const int x_grid = 2048;
  if (variant_ == Variant::ConjugatedDoubling) {
    // T'(x) = 2 h'(2u) / h'(u) at u = h^{-1}(x).
    double worst = 1e300;
    for (int i = 0; i < x_grid; ++i) {
      const double u = double(i) / x_grid;
      const double hp = 1.0 + conj_amplitude_ * kTwoPi * std::cos(kTwoPi * u);
      const double hp2 =
          1.0 + conj_amplitude_ * kTwoPi * std::cos(kTwoPi * 2 * u);
      worst = std::min(worst, 2.0 * hp2 / hp);
    }
    if (worst <= 1.0)
      throw NotExpandingError("conjugated doubling: min T' <= 1");
    expanding_range_ = 1.0;
    return;
  }
  // min_x E' > 1 is required at eps = 0; for eps != 0 the largest |eps| tier
  // on the grid where it still holds is recorded as expanding_range().
  const std::vector<double> omegas = {0.0,    0.0625, 0.125,  0.1875, 0.25,
                                      0.3125, 0.375,  0.4375, 0.5,    0.5625,
                                      0.625,  0.6875, 0.75,   0.8125, 0.875,
                                      0.9375};
  auto min_derivative = [&](double eps) {
    double worst = 1e300;
    for (double w : omegas) {
      const TrigPoly p = instantiate(base_terms_, 0.0, eps, w, 0);
      for (int i = 0; i < x_grid; ++i) {
        const double x = double(i) / x_grid;
        worst = std::min(worst, degree_ + p.eval_derivative(x));
      }
    }
    return worst;
  };
  if (min_derivative(0.0) <= 1.0)
    throw NotExpandingError("map family: min E'(x) <= 1 at eps = 0");
  double range = 0.0;
  for (int tier = 1; tier <= 16; ++tier) {
    const double eps = double(tier) / 16.0;
    if (min_derivative(eps) <= 1.0 || min_derivative(-eps) <= 1.0) break;
    range = eps;
  }
  expanding_range_ = range;
}

double conjugacy_inverse(double a, double y) {
  // Solve u + a sin(2 pi u) = y; h' >= 1 - 2 pi |a| > 0.
  double u = y;
  for (int it = 0; it < 60; ++it) {
    const double f = u + a * std::sin(kTwoPi * u) - y;
    const double fp = 1.0 + a * kTwoPi * std::cos(kTwoPi * u);
    const double step = f / fp;
    u -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return u;
}

}  // namespace qlr
