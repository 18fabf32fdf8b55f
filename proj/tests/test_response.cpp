#include <doctest.h>

#include <cmath>

#include "qlr/response.hpp"

using namespace qlr;

namespace {
const double kPi = 3.14159265358979323846;

// T_eps(x) = 2x + eps sin(4 pi x), no fiber dependence: closed forms below.
CocycleSpec flagship_fixed(int K = 16) {
  CocycleSpec s;
  s.family = MapFamily::circle_expanding(2, {{2, 1, 1.0, 0.0, 0.0}}, 2);
  s.driver = DrivingSystem::rotation(0.0, 0.0);
  s.bandwidth = K;
  s.ladder = SpaceLadder{1, 2};
  return s;
}

// Fiber-dependent variant driven by an irrational rotation.
CocycleSpec flagship_driven(int K = 16) {
  CocycleSpec s;
  s.family = MapFamily::circle_expanding(
      2, {{1, 0, 0.1, 1.0, 0.0}, {2, 1, 1.0, 0.0, 0.0}}, 2);
  s.driver = DrivingSystem::rotation(std::sqrt(2.0) - 1.0, 0.0);
  s.bandwidth = K;
  s.ladder = SpaceLadder{1, 2};
  return s;
}

}  // namespace

TEST_CASE("linear response of the fixed flagship: closed form -2 pi cos") {
  const auto spec = flagship_fixed();
  const auto r = linear_response(spec, {0});
  // v_0 = 1
  CHECK(std::abs(r.v0.mass() - Complex(1, 0)) < 1e-12);
  for (int k = 1; k <= spec.bandwidth; ++k)
    CHECK(std::abs(r.v0.coeff(k)) < 1e-11);
  // v_0^(1) = -2 pi cos(2 pi x)
  CHECK(std::abs(r.v1.coeff(1) - Complex(-kPi, 0)) < 1e-8);
  CHECK(std::abs(r.v1.coeff(-1) - Complex(-kPi, 0)) < 1e-8);
  CHECK(std::abs(r.v1.mass()) < 1e-12);
  for (int k = 2; k <= spec.bandwidth; ++k)
    CHECK(std::abs(r.v1.coeff(k)) < 1e-8);
  // rho is fitted in the strong ladder norm H^2, where doubling halves
  // frequencies and so quarters the weight: ~ 1/4.
  CHECK(r.rho > 0.1);
  CHECK(r.rho < 0.7);
  CHECK(r.n_trunc > 0);
  CHECK(r.tail_v1 < 1e-10);
}

TEST_CASE("quadratic response of the fixed flagship: closed form") {
  const auto spec = flagship_fixed();
  const auto r = quadratic_response(spec, {0});
  REQUIRE(r.v2.has_value());
  const auto& v2 = *r.v2;
  // v_0^(2) = 4 pi^2 (cos(4 pi x) + cos(2 pi x)): c_{+-1} = c_{+-2} = 2 pi^2
  const double c = 2 * kPi * kPi;
  CHECK(std::abs(v2.coeff(1) - Complex(c, 0)) < 1e-7);
  CHECK(std::abs(v2.coeff(-1) - Complex(c, 0)) < 1e-7);
  CHECK(std::abs(v2.coeff(2) - Complex(c, 0)) < 1e-7);
  CHECK(std::abs(v2.coeff(-2) - Complex(c, 0)) < 1e-7);
  CHECK(std::abs(v2.mass()) < 1e-12);
  for (int k = 3; k <= spec.bandwidth; ++k)
    CHECK(std::abs(v2.coeff(k)) < 1e-7);
}

TEST_CASE("linear response matches the central-difference oracle") {
  const auto spec = flagship_driven(12);
  const DrivingSystem::State w{2};
  const auto r = linear_response(spec, w);
  const auto fd = fd_oracle(spec, w, 2e-4, 1);
  const auto diff = r.v1 - fd.field;
  const double rel =
      sobolev_norm(diff, 1) / std::max(1.0, sobolev_norm(r.v1, 1));
  CHECK(rel < 1e-4);
  CHECK(fd.discretization_error < 1e-5);
}

TEST_CASE("quadratic response matches the second-difference oracle") {
  const auto spec = flagship_driven(12);
  const DrivingSystem::State w{0};
  ResponseOptions opt;
  opt.tol = 1e-12;
  const auto r = quadratic_response(spec, w, opt);
  REQUIRE(r.v2.has_value());
  const auto fd = fd_oracle(spec, w, 2e-3, 2, opt);
  const auto diff = *r.v2 - fd.field;
  const double rel =
      sobolev_norm(diff, 0) / std::max(1.0, sobolev_norm(*r.v2, 0));
  CHECK(rel < 1e-3);
}

TEST_CASE("response on a Bernoulli-driven family stays consistent") {
  CocycleSpec s;
  s.family = MapFamily::circle_expanding(
      2, {{1, 0, 0.08, 1.0, 0.0}, {2, 1, 1.0, 0.0, 0.0}}, 1);
  s.driver = DrivingSystem::bernoulli(11, 4);
  s.bandwidth = 12;
  s.ladder = SpaceLadder{1, 1};
  const auto r = linear_response(s, {5});
  const auto fd = fd_oracle(s, {5}, 2e-4, 1);
  const double rel = sobolev_norm(r.v1 - fd.field, 1) /
                     std::max(1.0, sobolev_norm(r.v1, 1));
  CHECK(rel < 1e-4);
  CHECK(std::abs(r.v1.mass()) < 1e-12);
}

TEST_CASE("response refuses non-mixing systems") {
  CocycleSpec s;
  s.family = MapFamily::circle_expanding(1, {}, 1);
  s.driver = DrivingSystem::rotation(0.0, 0.0);
  s.bandwidth = 6;
  s.ladder = SpaceLadder{1, 1};
  CHECK_THROWS_AS(linear_response(s, {0}), NonMixingError);
}

TEST_CASE("quadratic response requires family order >= 2") {
  CocycleSpec s;
  s.family = MapFamily::circle_expanding(2, {{2, 1, 1.0, 0.0, 0.0}}, 1);
  s.driver = DrivingSystem::rotation(0.0, 0.0);
  s.bandwidth = 8;
  s.ladder = SpaceLadder{1, 1};
  CHECK_THROWS_AS(quadratic_response(s, {0}), OrderError);
}

TEST_CASE("epsilon sweep: Taylor remainders decay at the expected rates") {
  const auto spec = flagship_driven(14);
  const std::vector<double> grid = {1.0 / 16,  1.0 / 32,  1.0 / 64,
                                    1.0 / 128, 1.0 / 256, 1.0 / 512};
  ResponseOptions opt;
  opt.tol = 1e-12;
  const auto rep = epsilon_sweep(spec, {0}, grid, opt);
  REQUIRE(rep.remainders.size() == 3);
  REQUIRE(rep.slopes.size() == 3);
  CHECK(rep.slopes[0] > 0.9);
  CHECK(rep.slopes[0] < 1.1);
  CHECK(rep.slopes[1] > 1.8);
  CHECK(rep.slopes[1] < 2.2);
  CHECK(rep.slopes[2] > 2.5);
  // remainders themselves decrease with eps at every order
  for (const auto& row : rep.remainders)
    for (size_t i = 1; i < row.size(); ++i) CHECK(row[i] <= row[i - 1] * 1.05);
}

TEST_CASE("truncation picker honors an explicit depth") {
  const auto spec = flagship_fixed(10);
  ResponseOptions opt;
  opt.n_trunc = 7;
  opt.rho = 0.5;
  const auto r = linear_response(spec, {0}, opt);
  CHECK(r.n_trunc == 7);
  CHECK(r.rho == 0.5);
  CHECK(r.tail_v1 == doctest::Approx(r.tail_v1));  // finite
}
