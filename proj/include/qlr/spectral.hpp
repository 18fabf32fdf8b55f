#ifndef QLR_SPECTRAL_HPP
#define QLR_SPECTRAL_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qlr/errors.hpp"

namespace qlr {

using Complex = std::complex<double>;
using VectorXcd = Eigen::VectorXcd;
using MatrixXcd = Eigen::MatrixXcd;

constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Truncated Fourier representation of a function on the torus T^d, d in {1,2}:
///
///   f(x) = sum_{|k_i| <= K} c_k exp(2*pi*i k.x)
///
/// Coefficients are stored dense over the full frequency box. For d = 2 the
/// coordinates are (x, s) and the flat index of k = (k1, k2) is
/// (k1 + K)*(2K+1) + (k2 + K).
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(int dim, int bandwidth);

  static SpectralField constant(int dim, int bandwidth, Complex value);
  /// Pure mode e_k (d = 1).
  static SpectralField mode(int bandwidth, int k, Complex amp = Complex(1, 0));
  /// Pure mode e_{(k1,k2)} (d = 2).
  static SpectralField mode2(int bandwidth, int k1, int k2,
                             Complex amp = Complex(1, 0));

  int dim() const { return dim_; }
  int bandwidth() const { return bandwidth_; }
  int size() const { return static_cast<int>(coeffs_.size()); }

  const VectorXcd& coeffs() const { return coeffs_; }
  VectorXcd& coeffs() { return coeffs_; }

  /// Flat index of a frequency vector.
  int index(int k1, int k2 = 0) const;
  Complex coeff(int k1, int k2 = 0) const { return coeffs_[index(k1, k2)]; }
  void set_coeff(int k1, Complex v) { coeffs_[index(k1)] = v; }
  void set_coeff2(int k1, int k2, Complex v) { coeffs_[index(k1, k2)] = v; }

  /// The mass functional xi(f) = integral of f = c_0.
  Complex mass() const { return coeffs_[index(0, 0)]; }

  /// Max deviation from the Hermitian symmetry c_{-k} = conj(c_k).
  double realness_defect() const;

  /// Point evaluation of the truncated series.
  Complex evaluate(double x) const;
  Complex evaluate(double x, double s) const;

  /// Partial derivative along axis (0 = x, 1 = s).
  SpectralField derivative(int axis = 0) const;

  /// Restrict or zero-pad to a new bandwidth.
  SpectralField resized(int new_bandwidth) const;

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(Complex a);
  friend SpectralField operator+(SpectralField a, const SpectralField& b) {
    return a += b;
  }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) {
    return a -= b;
  }
  friend SpectralField operator*(Complex a, SpectralField f) { return f *= a; }

 private:
  int dim_ = 1;
  int bandwidth_ = 0;
  VectorXcd coeffs_;
};

/// Sobolev weight w_m(k) = sum_{|alpha| <= m} prod_i (2 pi k_i)^(2 alpha_i).
double sobolev_weight(int dim, int m, int k1, int k2 = 0);

/// Exact truncated H^m norm, computed in coefficients.
double sobolev_norm(const SpectralField& f, int m);

/// Grid estimate of the C^m norm: max over a 4x oversampled grid of the
/// first m derivatives (used only for diagnostic ratios).
double cm_norm(const SpectralField& f, int m);

/// Samples of f on the uniform G-point grid per axis (x_g = g/G).
/// Requires G >= 2K+1, otherwise throws AliasingBudgetError.
VectorXcd synthesize(const SpectralField& f, int grid_size);

/// Forward transform with truncation at bandwidth K; exact on trigonometric
/// polynomials of bandwidth <= K when G >= 2K+1.
SpectralField analyze(const VectorXcd& samples, int dim, int grid_size,
                      int bandwidth);

/// Aliasing-free product: synthesize both factors on a grid of size
/// >= 2*(K_f + K_g) + 1, multiply pointwise, analyze at K_f + K_g.
SpectralField product(const SpectralField& f, const SpectralField& g);

/// Graded ladder of Sobolev spaces E_j = H^(m+j), j = 0..N.
struct SpaceLadder {
  int base_m = 0;
  int depth = 1;

  int level(int j) const;  // regularity index of E_j
};

}  // namespace qlr

#endif  // QLR_SPECTRAL_HPP
