#include "qlr/transfer.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <cstdio>
#include <functional>

namespace qlr {

namespace {

// Kernel weight multiplying e_{-m}(T x) in the duality integrand; m is the
// output frequency of the sector being assembled.
using KernelWeight = std::function<Complex(double x, int m)>;

int grid_size_for(const CircleMap& map, int K, const AssemblyOptions& opt) {
  return std::max(opt.min_grid,
                  opt.oversample_factor *
                      (K * map.degree + map.effective_bandwidth));
}

MatrixXcd circle_kernel(const CircleMap& map, int K, int G,
                        const KernelWeight& weight) {
  const int n = 2 * K + 1;
  MatrixXcd A(G, n), B(G, n);
  for (int g = 0; g < G; ++g) {
    const double x = double(g) / G;
    const double Tx = map.lift(x);
    for (int k = -K; k <= K; ++k) {
      A(g, k + K) = std::polar(1.0, kTwoPi * k * x);
      Complex b = std::polar(1.0, -kTwoPi * k * Tx);
      if (weight) b *= weight(x, k);
      B(g, k + K) = b;
    }
  }
  return (B.transpose() * A) / double(G);
}

MatrixXcd with_doubling_check(int K, int G, const AssemblyOptions& opt,
                              const std::function<MatrixXcd(int)>& build) {
  if (!opt.doubling_check) return build(G);
  MatrixXcd coarse = build(G);
  MatrixXcd fine = build(2 * G);
  // Relative to the operator scale: derivative kernels carry entries of size
  // (2 pi K)^j, and round-off drift grows with them.
  const double scale = std::max(1.0, fine.cwiseAbs().maxCoeff());
  const double drift = (fine - coarse).cwiseAbs().maxCoeff() / scale;
  if (drift > opt.budget) {
    char msg[128];
    std::snprintf(msg, sizeof(msg),
                  "assembly grid G=%d leaves relative entry drift %.3e "
                  "above budget %.3e",
                  G, drift, opt.budget);
    throw AliasingBudgetError(msg);
  }
  (void)K;
  return fine;
}

// Flat index layout shared with SpectralField.
int flat(int K, int k1, int k2) { return (k1 + K) * (2 * K + 1) + (k2 + K); }

TransferMatrix assemble_u1_sectors(const CircleMap& base, const TrigPoly& tau,
                                   int K, const AssemblyOptions& opt,
                                   const std::function<Complex(double, int, int)>&
                                       sector_weight) {
  const int n = 2 * K + 1;
  TransferMatrix out;
  out.dim = 2;
  out.bandwidth = K;
  out.M = MatrixXcd::Zero(n * n, n * n);
  const int G = grid_size_for(base, K, opt);
  for (int ks = -K; ks <= K; ++ks) {
    KernelWeight w = [&](double x, int m1) -> Complex {
      Complex v = std::polar(1.0, -double(ks) * tau.eval(x));
      if (sector_weight) v *= sector_weight(x, m1, ks);
      return v;
    };
    MatrixXcd block = with_doubling_check(
        K, G, opt, [&](int g) { return circle_kernel(base, K, g, w); });
    for (int m1 = -K; m1 <= K; ++m1)
      for (int n1 = -K; n1 <= K; ++n1)
        out.M(flat(K, m1, ks), flat(K, n1, ks)) = block(m1 + K, n1 + K);
  }
  return out;
}

}  // namespace

SpectralField TransferMatrix::apply(const SpectralField& f) const {
  if (f.dim() != dim || f.bandwidth() != bandwidth)
    throw Error("TransferMatrix::apply: field shape mismatch");
  SpectralField g(dim, bandwidth);
  g.coeffs() = M * f.coeffs();
  return g;
}

double TransferMatrix::mass_row_defect(bool markov) const {
  const int K = bandwidth;
  const int row = (dim == 1) ? K : flat(K, 0, 0);
  double worst = 0.0;
  for (int col = 0; col < M.cols(); ++col) {
    Complex expected(0, 0);
    if (markov && col == row) expected = Complex(1, 0);
    worst = std::max(worst, std::abs(M(row, col) - expected));
  }
  return worst;
}

TransferMatrix assemble(const CircleMap& map, int K,
                        const AssemblyOptions& opt) {
  TransferMatrix out;
  out.dim = 1;
  out.bandwidth = K;
  const int G = grid_size_for(map, K, opt);
  out.M = with_doubling_check(
      K, G, opt, [&](int g) { return circle_kernel(map, K, g, nullptr); });
  return out;
}

TransferMatrix assemble_u1(const CircleMap& base, const TrigPoly& tau, int K,
                           const AssemblyOptions& opt) {
  return assemble_u1_sectors(base, tau, K, opt, nullptr);
}

TransferMatrix assemble_u1_direct(const CircleMap& base, const TrigPoly& tau,
                                  int K, const AssemblyOptions& opt) {
  const int n = 2 * K + 1;
  const int Gs = 4 * K + 2;  // exact for the s-integrand's bandwidth
  const int Gx0 = grid_size_for(base, K, opt);
  auto build = [&](int Gx) {
    MatrixXcd A(Gx * Gs, n * n), B(Gx * Gs, n * n);
    for (int gx = 0; gx < Gx; ++gx) {
      const double x = double(gx) / Gx;
      const double Ex = base.lift(x);
      const double shift = tau.eval(x) / kTwoPi;
      for (int gs = 0; gs < Gs; ++gs) {
        const double s = double(gs) / Gs;
        const int row = gx * Gs + gs;
        for (int k1 = -K; k1 <= K; ++k1)
          for (int k2 = -K; k2 <= K; ++k2) {
            const int col = flat(K, k1, k2);
            A(row, col) = std::polar(1.0, kTwoPi * (k1 * x + k2 * s));
            B(row, col) =
                std::polar(1.0, -kTwoPi * (k1 * Ex + k2 * (s + shift)));
          }
      }
    }
    return MatrixXcd((B.transpose() * A) / double(Gx * Gs));
  };
  TransferMatrix out;
  out.dim = 2;
  out.bandwidth = K;
  out.M = with_doubling_check(K, Gx0, opt, build);
  return out;
}

TransferMatrix q1_matrix(const MapFamily& fam, const DrivingSystem& driver,
                         DrivingSystem::State omega, int K,
                         const AssemblyOptions& opt) {
  const TrigPoly xb = fam.eps_derivative_base(1, omega, driver);
  const CircleMap base = fam.base_map(0.0, omega, driver);
  TransferMatrix out;
  if (fam.dim() == 1) {
    KernelWeight w = [&](double x, int m) {
      return Complex(0, -kTwoPi * m) * xb.eval(x);
    };
    out.dim = 1;
    out.bandwidth = K;
    const int G = grid_size_for(base, K, opt);
    out.M = with_doubling_check(
        K, G, opt, [&](int g) { return circle_kernel(base, K, g, w); });
  } else {
    const TrigPoly xt = fam.eps_derivative_tau(1, omega, driver);
    const TrigPoly tau0 = fam.tau(0.0, omega, driver);
    auto sw = [&](double x, int m1, int ks) {
      return Complex(0, -kTwoPi * m1) * xb.eval(x) +
             Complex(0, -double(ks)) * xt.eval(x);
    };
    out = assemble_u1_sectors(base, tau0, K, opt, sw);
  }
  out.j_in = 1;
  out.j_out = 0;
  return out;
}

TransferMatrix q2_matrix(const MapFamily& fam, const DrivingSystem& driver,
                         DrivingSystem::State omega, int K,
                         const AssemblyOptions& opt) {
  if (fam.order() < 2)
    throw OrderError("q2_matrix: family order must be >= 2");
  const TrigPoly x1 = fam.eps_derivative_base(1, omega, driver);
  const TrigPoly x2 = fam.eps_derivative_base(2, omega, driver);
  const CircleMap base = fam.base_map(0.0, omega, driver);
  TransferMatrix out;
  if (fam.dim() == 1) {
    KernelWeight w = [&](double x, int m) {
      const Complex im(0, -kTwoPi * m);
      const Complex a = im * x1.eval(x);
      return 0.5 * (a * a + im * x2.eval(x));
    };
    out.dim = 1;
    out.bandwidth = K;
    const int G = grid_size_for(base, K, opt);
    out.M = with_doubling_check(
        K, G, opt, [&](int g) { return circle_kernel(base, K, g, w); });
  } else {
    const TrigPoly t1 = fam.eps_derivative_tau(1, omega, driver);
    const TrigPoly t2 = fam.eps_derivative_tau(2, omega, driver);
    const TrigPoly tau0 = fam.tau(0.0, omega, driver);
    auto sw = [&](double x, int m1, int ks) {
      const Complex a = Complex(0, -kTwoPi * m1) * x1.eval(x) +
                        Complex(0, -double(ks)) * t1.eval(x);
      const Complex b = Complex(0, -kTwoPi * m1) * x2.eval(x) +
                        Complex(0, -double(ks)) * t2.eval(x);
      return 0.5 * (a * a + b);
    };
    out = assemble_u1_sectors(base, tau0, K, opt, sw);
  }
  out.j_in = 2;
  out.j_out = 0;
  return out;
}

double weighted_operator_norm(const MatrixXcd& M, int dim, int K, int m_in,
                              int m_out, bool zero_mass_only) {
  const int n = 2 * K + 1;
  const int size = (dim == 1) ? n : n * n;
  if (M.rows() != size || M.cols() != size)
    throw Error("weighted_operator_norm: matrix size mismatch");
  Eigen::VectorXd w_in(size), w_out(size);
  for (int i = 0; i < size; ++i) {
    const int k1 = (dim == 1) ? i - K : i / n - K;
    const int k2 = (dim == 1) ? 0 : i % n - K;
    w_in[i] = std::sqrt(sobolev_weight(dim, m_in, k1, k2));
    w_out[i] = std::sqrt(sobolev_weight(dim, m_out, k1, k2));
  }
  MatrixXcd W = w_out.asDiagonal() * M * w_in.cwiseInverse().asDiagonal();
  if (zero_mass_only) {
    const int z = (dim == 1) ? K : (K * n + K);
    MatrixXcd R(size - 1, size - 1);
    for (int i = 0, ri = 0; i < size; ++i) {
      if (i == z) continue;
      for (int j = 0, rj = 0; j < size; ++j) {
        if (j == z) continue;
        R(ri, rj) = W(i, j);
        ++rj;
      }
      ++ri;
    }
    W.swap(R);
  }
  Eigen::BDCSVD<MatrixXcd> svd(W);
  return svd.singularValues()(0);
}

double operator_norm(const TransferMatrix& M, const SpaceLadder& ladder,
                     int j_in, int j_out, bool zero_mass_only) {
  return weighted_operator_norm(M.M, M.dim, M.bandwidth, ladder.level(j_in),
                                ladder.level(j_out), zero_mass_only);
}

}  // namespace qlr
