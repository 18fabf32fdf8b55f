#include "qlr/spectral.hpp"

#include <cmath>

namespace qlr {

SpectralField::SpectralField(int dim, int bandwidth)
    : dim_(dim), bandwidth_(bandwidth) {
  if (dim != 1 && dim != 2) throw Error("SpectralField: dim must be 1 or 2");
  if (bandwidth < 0) throw Error("SpectralField: bandwidth must be >= 0");
  const int n = 2 * bandwidth + 1;
  coeffs_ = VectorXcd::Zero(dim == 1 ? n : n * n);
}

SpectralField SpectralField::constant(int dim, int bandwidth, Complex value) {
  SpectralField f(dim, bandwidth);
  f.coeffs_[f.index(0, 0)] = value;
  return f;
}

SpectralField SpectralField::mode(int bandwidth, int k, Complex amp) {
  SpectralField f(1, bandwidth);
  f.coeffs_[f.index(k)] = amp;
  return f;
}

SpectralField SpectralField::mode2(int bandwidth, int k1, int k2, Complex amp) {
  SpectralField f(2, bandwidth);
  f.coeffs_[f.index(k1, k2)] = amp;
  return f;
}

int SpectralField::index(int k1, int k2) const {
  const int K = bandwidth_;
  if (k1 < -K || k1 > K || (dim_ == 2 && (k2 < -K || k2 > K)))
    throw Error("SpectralField: frequency out of range");
  if (dim_ == 1) return k1 + K;
  return (k1 + K) * (2 * K + 1) + (k2 + K);
}

double SpectralField::realness_defect() const {
  const int K = bandwidth_;
  double worst = 0.0;
  if (dim_ == 1) {
    for (int k = -K; k <= K; ++k)
      worst = std::max(worst,
                       std::abs(coeff(-k) - std::conj(coeff(k))));
  } else {
    for (int k1 = -K; k1 <= K; ++k1)
      for (int k2 = -K; k2 <= K; ++k2)
        worst = std::max(worst, std::abs(coeff(-k1, -k2) -
                                         std::conj(coeff(k1, k2))));
  }
  return worst;
}

Complex SpectralField::evaluate(double x) const {
  if (dim_ != 1) throw Error("evaluate(x): field is not 1-d");
  const int K = bandwidth_;
  Complex acc(0, 0);
  for (int k = -K; k <= K; ++k)
    acc += coeff(k) * std::polar(1.0, kTwoPi * k * x);
  return acc;
}

Complex SpectralField::evaluate(double x, double s) const {
  if (dim_ != 2) throw Error("evaluate(x,s): field is not 2-d");
  const int K = bandwidth_;
  Complex acc(0, 0);
  for (int k1 = -K; k1 <= K; ++k1) {
    const Complex ph1 = std::polar(1.0, kTwoPi * k1 * x);
    for (int k2 = -K; k2 <= K; ++k2)
      acc += coeff(k1, k2) * ph1 * std::polar(1.0, kTwoPi * k2 * s);
  }
  return acc;
}

SpectralField SpectralField::derivative(int axis) const {
  SpectralField g = *this;
  const int K = bandwidth_;
  if (dim_ == 1) {
    for (int k = -K; k <= K; ++k)
      g.coeffs_[index(k)] *= Complex(0, kTwoPi * k);
  } else {
    for (int k1 = -K; k1 <= K; ++k1)
      for (int k2 = -K; k2 <= K; ++k2)
        g.coeffs_[index(k1, k2)] *= Complex(0, kTwoPi * (axis == 0 ? k1 : k2));
  }
  return g;
}

SpectralField SpectralField::resized(int new_bandwidth) const {
  SpectralField g(dim_, new_bandwidth);
  const int K = std::min(bandwidth_, new_bandwidth);
  if (dim_ == 1) {
    for (int k = -K; k <= K; ++k) g.coeffs_[g.index(k)] = coeff(k);
  } else {
    for (int k1 = -K; k1 <= K; ++k1)
      for (int k2 = -K; k2 <= K; ++k2)
        g.coeffs_[g.index(k1, k2)] = coeff(k1, k2);
  }
  return g;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  if (dim_ != o.dim_ || bandwidth_ != o.bandwidth_)
    throw Error("SpectralField: shape mismatch in +=");
  coeffs_ += o.coeffs_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  if (dim_ != o.dim_ || bandwidth_ != o.bandwidth_)
    throw Error("SpectralField: shape mismatch in -=");
  coeffs_ -= o.coeffs_;
  return *this;
}

SpectralField& SpectralField::operator*=(Complex a) {
  coeffs_ *= a;
  return *this;
}

double sobolev_weight(int dim, int m, int k1, int k2) {
  // Literal multi-index sum, not the equivalent (1+|k|^2)^m weight.
  if (dim == 1) {
    const double t = kTwoPi * k1 * (kTwoPi * k1);
    double w = 0.0, p = 1.0;
    for (int a = 0; a <= m; ++a) {
      w += p;
      p *= t;
    }
    return w;
  }
  const double t1 = kTwoPi * k1 * (kTwoPi * k1);
  const double t2 = kTwoPi * k2 * (kTwoPi * k2);
  double w = 0.0;
  double p1 = 1.0;
  for (int a1 = 0; a1 <= m; ++a1) {
    double p2 = 1.0;
    for (int a2 = 0; a2 + a1 <= m; ++a2) {
      w += p1 * p2;
      p2 *= t2;
    }
    p1 *= t1;
  }
  return w;
}

double sobolev_norm(const SpectralField& f, int m) {
  if (m < 0) throw Error("sobolev_norm: m must be >= 0");
  const int K = f.bandwidth();
  double acc = 0.0;
  if (f.dim() == 1) {
    for (int k = -K; k <= K; ++k)
      acc += sobolev_weight(1, m, k) * std::norm(f.coeff(k));
  } else {
    for (int k1 = -K; k1 <= K; ++k1)
      for (int k2 = -K; k2 <= K; ++k2)
        acc += sobolev_weight(2, m, k1, k2) * std::norm(f.coeff(k1, k2));
  }
  return std::sqrt(acc);
}

double cm_norm(const SpectralField& f, int m) {
  const int G = std::max(4 * (2 * f.bandwidth() + 1), 16);
  double worst = 0.0;
  if (f.dim() == 1) {
    SpectralField g = f;
    for (int order = 0; order <= m; ++order) {
      const VectorXcd samples = synthesize(g, G);
      worst = std::max(worst, samples.cwiseAbs().maxCoeff());
      if (order < m) g = g.derivative();
    }
  } else {
    // All partials with |alpha| <= m.
    for (int a1 = 0; a1 <= m; ++a1) {
      SpectralField g = f;
      for (int i = 0; i < a1; ++i) g = g.derivative(0);
      for (int a2 = 0; a1 + a2 <= m; ++a2) {
        const VectorXcd samples = synthesize(g, G);
        worst = std::max(worst, samples.cwiseAbs().maxCoeff());
        if (a1 + a2 < m) g = g.derivative(1);
      }
    }
  }
  return worst;
}

VectorXcd synthesize(const SpectralField& f, int G) {
  const int K = f.bandwidth();
  if (G < 2 * K + 1)
    throw AliasingBudgetError("synthesize: grid size " + std::to_string(G) +
                              " < 2K+1 = " + std::to_string(2 * K + 1));
  const int n = 2 * K + 1;
  // Per-axis DFT matrix E[g,k] = exp(2 pi i k g / G).
  MatrixXcd E(G, n);
  for (int g = 0; g < G; ++g)
    for (int k = -K; k <= K; ++k)
      E(g, k + K) = std::polar(1.0, kTwoPi * k * g / double(G));
  if (f.dim() == 1) return E * f.coeffs();
  Eigen::Map<const MatrixXcd> C(f.coeffs().data(), n, n);  // C(k2+K, k1+K)
  // samples(g2 + G*g1) = sum_{k1,k2} c_{k1,k2} E(g1,k1) E(g2,k2)
  MatrixXcd S = E * C * E.transpose();  // S(g2, g1)
  return Eigen::Map<VectorXcd>(S.data(), G * G);
}

SpectralField analyze(const VectorXcd& samples, int dim, int G, int K) {
  if (G < 2 * K + 1)
    throw AliasingBudgetError("analyze: grid size too small for bandwidth");
  const int n = 2 * K + 1;
  MatrixXcd E(G, n);
  for (int g = 0; g < G; ++g)
    for (int k = -K; k <= K; ++k)
      E(g, k + K) = std::polar(1.0, -kTwoPi * k * g / double(G));
  SpectralField f(dim, K);
  if (dim == 1) {
    if (samples.size() != G) throw Error("analyze: sample count != G");
    f.coeffs() = (E.transpose() * samples) / double(G);
    return f;
  }
  if (samples.size() != Eigen::Index(G) * G)
    throw Error("analyze: sample count != G*G");
  Eigen::Map<const MatrixXcd> S(samples.data(), G, G);  // S(g2, g1)
  MatrixXcd C = (E.transpose() * S * E) / double(G * G);  // C(k2+K, k1+K)
  f.coeffs() = Eigen::Map<VectorXcd>(C.data(), n * n);
  return f;
}

SpectralField product(const SpectralField& f, const SpectralField& g) {
  if (f.dim() != g.dim()) throw Error("product: dimension mismatch");
  const int Kout = f.bandwidth() + g.bandwidth();
  const int G = 2 * Kout + 1;
  const VectorXcd a = synthesize(f.resized(Kout), G);
  const VectorXcd b = synthesize(g.resized(Kout), G);
  return analyze(a.cwiseProduct(b), f.dim(), G, Kout);
}

int SpaceLadder::level(int j) const {
  if (j < 0 || j > depth) throw Error("SpaceLadder: index out of range");
  return base_m + j;
}

}  // namespace qlr
