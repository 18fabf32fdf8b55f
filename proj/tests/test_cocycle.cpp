#include <doctest.h>

#include <cmath>

#include "qlr/cocycle.hpp"

using namespace qlr;

namespace {

CocycleSpec flagship_spec(double eps = 0.0, int K = 12) {
  CocycleSpec s;
  s.family = MapFamily::circle_expanding(
      2, {{1, 0, 0.1, 1.0, 0.0}, {2, 1, 1.0, 0.0, 0.0}}, 2);
  s.driver = DrivingSystem::rotation(std::sqrt(2.0) - 1.0, 0.0);
  s.eps = eps;
  s.bandwidth = K;
  s.ladder = SpaceLadder{1, 2};
  return s;
}

CocycleSpec doubling_spec(int K = 10) {
  CocycleSpec s;
  s.family = MapFamily::circle_expanding(2, {}, 1);
  s.driver = DrivingSystem::rotation(0.0, 0.0);
  s.bandwidth = K;
  s.ladder = SpaceLadder{0, 1};
  return s;
}

}  // namespace

TEST_CASE("cocycle property A^{(n+m)} = A^{(n)}(sigma^m w) A^{(m)}(w)") {
  const auto spec = flagship_spec(0.05);
  const DrivingSystem::State w{3};
  const auto A5 = cocycle_matrix(spec, w, 5);
  const auto A2 = cocycle_matrix(spec, w, 2);
  const auto A3 = cocycle_matrix(spec, spec.driver.advance(w, 2), 3);
  CHECK((A5.M - A3.M * A2.M).cwiseAbs().maxCoeff() < 1e-11);
  CHECK((cocycle_matrix(spec, w, 1).M - fiber_matrix(spec, w).M)
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("fiber matrix cache matches direct assembly") {
  const auto spec = flagship_spec(0.03);
  FiberMatrixCache cache(spec);
  for (std::int64_t i : {-4, 0, 7, -4}) {
    const auto& cached = cache({i});
    const auto direct = fiber_matrix(spec, {i});
    CHECK((cached.M - direct.M).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("equivariant density of unperturbed doubling is the constant 1") {
  const auto spec = doubling_spec();
  DensityStats stats;
  const auto v = equivariant_density(spec, {0}, 1e-12, 50, nullptr, &stats);
  CHECK(std::abs(v.mass() - Complex(1, 0)) < 1e-13);
  for (int k = 1; k <= spec.bandwidth; ++k) {
    CHECK(std::abs(v.coeff(k)) < 1e-12);
    CHECK(std::abs(v.coeff(-k)) < 1e-12);
  }
  CHECK(stats.iterations <= 5);
}

TEST_CASE("equivariance: A_eps(w) v(w) = v(sigma w) along the orbit") {
  const auto spec = flagship_spec(0.04, 16);
  FiberMatrixCache cache(spec);
  for (std::int64_t i : {0, 5, -3}) {
    const DrivingSystem::State w{i};
    const auto vw = equivariant_density(spec, w, 1e-11, 100, &cache);
    const auto vnext =
        equivariant_density(spec, spec.driver.advance(w, 1), 1e-11, 100, &cache);
    const auto pushed = cache(w).apply(vw);
    const auto diff = pushed - vnext;
    CHECK(sobolev_norm(diff, spec.ladder.level(0)) < 1e-9);
    CHECK(vw.realness_defect() < 1e-10);
    CHECK(std::abs(vw.mass() - Complex(1, 0)) < 1e-12);
  }
}

TEST_CASE("conjugated doubling: pullback density matches the closed form") {
  const double a = 0.03;
  CocycleSpec spec;
  spec.family = MapFamily::conjugated_doubling(a);
  spec.driver = DrivingSystem::rotation(0.0, 0.0);
  spec.bandwidth = 24;
  spec.ladder = SpaceLadder{1, 1};
  const auto v = equivariant_density(spec, {0}, 1e-12, 80);
  for (int i = 0; i < 64; ++i) {
    const double x = i / 64.0;
    const double u = conjugacy_inverse(a, x);
    const double expect = 1.0 / (1.0 + a * kTwoPi * std::cos(kTwoPi * u));
    CHECK(std::abs(v.evaluate(x) - Complex(expect, 0)) < 1e-8);
  }
}

TEST_CASE("default probes are zero-mass and normalized") {
  const auto probes = default_probes(1, 10, 1, 4, 99);
  CHECK(probes.size() >= 8);
  for (const auto& p : probes) {
    CHECK(std::abs(p.mass()) < 1e-14);
    CHECK(sobolev_norm(p, 1) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("mixing rate of the doubling cocycle is 1/2") {
  const auto spec = doubling_spec(16);
  MixingOptions opt;
  opt.n_max = 14;
  opt.fiber_count = 1;
  const auto probes = default_probes(1, 16, spec.ladder.level(1), 4, 7);
  const auto rep = mixing_rate(spec, probes, opt);
  CHECK(rep.is_mixing);
  CHECK(rep.verdict == "mixing");
  CHECK(rep.rho > 0.45);
  CHECK(rep.rho < 0.55);
  CHECK(!rep.traces.empty());
}

TEST_CASE("identity cocycle is flagged non-mixing") {
  CocycleSpec spec;
  spec.family = MapFamily::circle_expanding(1, {}, 1);
  spec.driver = DrivingSystem::rotation(0.0, 0.0);
  spec.bandwidth = 8;
  spec.ladder = SpaceLadder{1, 1};
  MixingOptions opt;
  opt.n_max = 10;
  opt.fiber_count = 1;
  const auto probes = default_probes(1, 8, 2, 2, 7);
  const auto rep = mixing_rate(spec, probes, opt);
  CHECK(!rep.is_mixing);
  CHECK(rep.verdict == "non-mixing");
  CHECK(rep.rho > 0.99);
}

TEST_CASE("u1 extension with constant tau is non-mixing") {
  CocycleSpec spec;
  spec.family = MapFamily::u1_extension(2, {}, 1.234, {}, 1);
  spec.driver = DrivingSystem::rotation(0.0, 0.0);
  spec.bandwidth = 5;
  spec.ladder = SpaceLadder{1, 1};
  MixingOptions opt;
  opt.n_max = 10;
  opt.fiber_count = 1;
  const auto probes = default_probes(2, 5, 2, 2, 7);
  const auto rep = mixing_rate(spec, probes, opt);
  CHECK(!rep.is_mixing);
  CHECK(rep.rho > 0.99);
}

TEST_CASE("u1 extension with oscillating tau mixes") {
  CocycleSpec spec;
  spec.family = MapFamily::u1_extension(2, {}, 0.9, {{1, 0, 0.8, 0.0, 0.0}}, 1);
  spec.driver = DrivingSystem::rotation(0.0, 0.0);
  spec.bandwidth = 6;
  spec.ladder = SpaceLadder{1, 1};
  MixingOptions opt;
  opt.n_max = 12;
  opt.fiber_count = 1;
  const auto probes = default_probes(2, 6, 2, 2, 7);
  const auto rep = mixing_rate(spec, probes, opt);
  CHECK(rep.is_mixing);
  CHECK(rep.rho < 0.99);
}

TEST_CASE("verify_qr: doubling passes the strong/weak rate gap test") {
  const auto spec = doubling_spec(12);
  QrOptions opt;
  opt.n_max = 10;
  opt.fiber_count = 1;
  const auto rep = verify_qr(spec, opt);
  CHECK(rep.alpha_less_than_M);
  CHECK(rep.alpha <= 0.55);
  CHECK(rep.C <= 10.0);
  CHECK(rep.C >= 1.0);
  for (double v : rep.level_norms) {
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
  }
}

TEST_CASE("verify_qr: identity fails the rate gap") {
  CocycleSpec spec;
  spec.family = MapFamily::circle_expanding(1, {}, 1);
  spec.driver = DrivingSystem::rotation(0.0, 0.0);
  spec.bandwidth = 8;
  spec.ladder = SpaceLadder{1, 1};
  QrOptions opt;
  opt.n_max = 10;
  opt.fiber_count = 1;
  const auto rep = verify_qr(spec, opt);
  CHECK(!rep.alpha_less_than_M);
}

TEST_CASE("verify_qr: perturbation exponents for the flagship") {
  auto spec = flagship_spec(0.0, 10);
  QrOptions opt;
  opt.n_max = 8;
  opt.fiber_count = 2;
  // The linear regime needs 2 pi K eps << 1.
  for (int p = 6; p <= 11; ++p) opt.dyadic_eps.push_back(std::pow(2.0, -p));
  const auto rep = verify_qr(spec, opt);
  // || A_eps - A_0 || ~ eps and || A_eps - A_0 - eps Q_1 || ~ eps^2
  CHECK(rep.qr4_slope > 0.85);
  CHECK(rep.qr4_slope < 1.15);
  CHECK(rep.qr5_slope > 1.8);
  CHECK(rep.qr5_slope < 2.2);
}
