#ifndef QLR_TRANSFER_HPP
#define QLR_TRANSFER_HPP

#include "qlr/dynamics.hpp"
#include "qlr/spectral.hpp"

namespace qlr {

/// Dense matrix of a transfer operator (or of a derivative operator Q_j) on
/// the truncated Fourier basis, tagged with the ladder indices it maps
/// between. Entries are M[m,n] = <L e_n, e_m>.
struct TransferMatrix {
  int dim = 1;
  int bandwidth = 0;
  int j_in = 0;
  int j_out = 0;
  MatrixXcd M;

  SpectralField apply(const SpectralField& f) const;

  /// Max deviation of the frequency-0 row from delta_{n,0} (xi-Markov) or
  /// from zero (for Q_j operators, which annihilate mass).
  double mass_row_defect(bool markov) const;
};

/// Assembly options for the duality quadrature
///   M[m,n] = integral e_n(x) e_{-m}(T x) dx
/// on an oversampled uniform grid. The grid is doubled once as an aliasing
/// check; entries moving by more than `budget` raise AliasingBudgetError.
struct AssemblyOptions {
  double budget = 1e-12;
  bool doubling_check = true;
  int min_grid = 256;
  int oversample_factor = 8;
};

/// Perron-Frobenius matrix of a circle map at fixed (eps, omega).
TransferMatrix assemble(const CircleMap& map, int K,
                        const AssemblyOptions& opt = {});

/// Perron-Frobenius matrix of a U(1) extension, assembled blockwise: the
/// s-frequency is preserved, so L splits into 2K+1 circle-size sectors with
/// weights exp(-i k_s tau(x)).
TransferMatrix assemble_u1(const CircleMap& base, const TrigPoly& tau, int K,
                           const AssemblyOptions& opt = {});

/// Direct tensor-product quadrature over the full (x,s) grid; kept as a
/// correctness oracle for the sector-block assembly.
TransferMatrix assemble_u1_direct(const CircleMap& base, const TrigPoly& tau,
                                  int K, const AssemblyOptions& opt = {});

/// First derivative operator Q_1 = d/d eps L_{T_eps} |_{eps=0}, assembled by
/// differentiating the duality kernel: the entry integrand picks up the
/// factor -2 pi i m . dT/d eps. Maps E_i into E_{i-1} and annihilates mass.
TransferMatrix q1_matrix(const MapFamily& fam, const DrivingSystem& driver,
                         DrivingSystem::State omega, int K,
                         const AssemblyOptions& opt = {});

/// Second derivative operator Q_2 = (1/2) d^2/d eps^2 L |_0; the kernel
/// factor is ((-2 pi i m . X)^2 - 2 pi i m . X2)/2 with X = dT/d eps and
/// X2 = d^2 T/d eps^2 at eps = 0. Maps E_i into E_{i-2}.
TransferMatrix q2_matrix(const MapFamily& fam, const DrivingSystem& driver,
                         DrivingSystem::State omega, int K,
                         const AssemblyOptions& opt = {});

/// Induced operator norm between Sobolev levels: the largest singular value
/// of D_out M D_in^{-1} with D the diagonal H^m weights. With
/// zero_mass_only the frequency-0 row and column are removed (norm on ker xi).
double weighted_operator_norm(const MatrixXcd& M, int dim, int K, int m_in,
                              int m_out, bool zero_mass_only = false);

double operator_norm(const TransferMatrix& M, const SpaceLadder& ladder,
                     int j_in, int j_out, bool zero_mass_only = false);

}  // namespace qlr

#endif  // QLR_TRANSFER_HPP
