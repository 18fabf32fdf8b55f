#ifndef QLR_DYNAMICS_HPP
#define QLR_DYNAMICS_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qlr/spectral.hpp"

namespace qlr {

/// Invertible ergodic driving system (Omega, sigma, P). States are plain
/// orbit indices relative to a configured origin, so advancing by n and then
/// by -n is exact for every variant.
class DrivingSystem {
 public:
  enum class Variant { Rotation, Bernoulli, Periodic };

  struct State {
    std::int64_t index = 0;
  };

  static DrivingSystem rotation(double alpha, double start = 0.0);
  static DrivingSystem bernoulli(std::uint64_t seed, int symbol_count);
  static DrivingSystem periodic(std::vector<double> cycle);

  Variant variant() const { return variant_; }

  State advance(State omega, std::int64_t n) const {
    return State{omega.index + n};
  }

  /// The fiber label in [0,1) seen by map families at this state.
  double fiber_value(State omega) const;

  /// Defaults to the trivial rotation (alpha = 0, start = 0).
  DrivingSystem() = default;

 private:
  Variant variant_ = Variant::Rotation;
  double alpha_ = 0.0;
  double start_ = 0.0;
  std::uint64_t seed_ = 0;
  int symbol_count_ = 2;
  std::vector<double> cycle_;
};

/// Trigonometric term  amplitude * eps^power * sin(2 pi (freq*x + fiber_mult*omega + phase)).
/// phase is in turns; phase = 0.25 gives a cosine.
struct TrigTerm {
  int freq = 1;
  int eps_power = 0;
  double amplitude = 0.0;
  double fiber_mult = 0.0;
  double phase = 0.0;
};

/// Trigonometric polynomial with a constant part, at a fixed (eps, omega).
struct TrigPoly {
  double constant = 0.0;
  // (freq, amplitude, total phase in turns)
  struct Term {
    int freq;
    double amplitude;
    double phase;
  };
  std::vector<Term> terms;

  double eval(double x) const;
  double eval_derivative(double x) const;  // d/dx
  int bandwidth() const;
  SpectralField to_field(int K) const;
  bool is_zero() const;
};

/// A single concrete circle map at fixed (eps, omega), as consumed by the
/// transfer-matrix assembler: a lift x -> degree*x + p(x) with p 1-periodic.
struct CircleMap {
  int degree = 2;
  std::function<double(double)> periodic_part;  // p(x)
  int effective_bandwidth = 1;  // oversampling hint for quadrature

  double lift(double x) const { return degree * x + periodic_part(x); }
  double eval(double x) const {
    double y = std::fmod(lift(x), 1.0);
    return y < 0 ? y + 1.0 : y;
  }
};

/// Parametric random map family T_{eps,omega} on T^1 or T^2.
///
/// CircleExpanding:  T(x) = k x + p(eps, omega, x) mod 1
/// U1Extension:      T(x, s) = (E(x), s + tau(eps, omega, x)/(2 pi) mod 1)
/// ConjugatedDoubling: T = h o (2x) o h^{-1} with h(x) = x + a sin(2 pi x)
///   (eps-independent; its invariant density 1/h'(h^{-1}(x)) is known).
class MapFamily {
 public:
  enum class Variant { CircleExpanding, U1Extension, ConjugatedDoubling };

  static MapFamily circle_expanding(int degree, std::vector<TrigTerm> terms,
                                    int order_N);
  static MapFamily u1_extension(int degree, std::vector<TrigTerm> base_terms,
                                double tau_constant,
                                std::vector<TrigTerm> tau_terms, int order_N);
  static MapFamily conjugated_doubling(double amplitude);

  Variant variant() const { return variant_; }
  int dim() const { return variant_ == Variant::U1Extension ? 2 : 1; }
  int degree() const { return degree_; }
  int order() const { return order_N_; }

  /// Largest |eps| for which the expansion min_x E' > 1 held on the
  /// construction grid (1.0 when it holds on all of [-1,1]).
  double expanding_range() const { return expanding_range_; }

  /// Base circle map (x-coordinate) at fixed parameters.
  CircleMap base_map(double eps, DrivingSystem::State omega,
                     const DrivingSystem& driver) const;
  /// Fiber cocycle tau at fixed parameters (U1Extension only).
  TrigPoly tau(double eps, DrivingSystem::State omega,
               const DrivingSystem& driver) const;

  /// Map evaluation; for d = 1 only point[0] is used.
  void eval(double eps, DrivingSystem::State omega,
            const DrivingSystem& driver, const double* in, double* out) const;

  /// j-th eps-derivative of the periodic part of the x-coordinate at eps = 0,
  /// as a trigonometric polynomial (j = 0 returns p itself plus degree*x is
  /// excluded; callers combine with the linear part as needed).
  TrigPoly eps_derivative_base(int j, DrivingSystem::State omega,
                               const DrivingSystem& driver) const;
  /// j-th eps-derivative of tau at eps = 0 (U1Extension only).
  TrigPoly eps_derivative_tau(int j, DrivingSystem::State omega,
                              const DrivingSystem& driver) const;

  /// Defaults to the unperturbed doubling map.
  MapFamily() = default;

 private:
  void check_expansion();
  TrigPoly instantiate(const std::vector<TrigTerm>& terms, double constant,
                       double eps, double omega_value, int eps_deriv) const;

  Variant variant_ = Variant::CircleExpanding;
  int degree_ = 2;
  int order_N_ = 1;
  double expanding_range_ = 1.0;
  std::vector<TrigTerm> base_terms_;
  double tau_constant_ = 0.0;
  std::vector<TrigTerm> tau_terms_;
  double conj_amplitude_ = 0.0;
};

/// Inverse of h(x) = x + a sin(2 pi x) on the circle lift (strictly
/// increasing for |a| < 1/(2 pi)); Newton with bisection fallback.
double conjugacy_inverse(double amplitude, double y);

}  // namespace qlr

#endif  // QLR_DYNAMICS_HPP
