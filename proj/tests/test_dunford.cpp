#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "waclab/dunford.hpp"
#include "waclab/generator.hpp"

using namespace waclab;

namespace {
constexpr double kPi = std::numbers::pi;

GeneratedPair wac_pair(std::uint64_t seed) {
  GeneratorSpec s;
  s.n = 4;
  s.k = 1;
  s.spectral_scale = 0.5;
  s.anticommutator_target = 1.0;
  s.seed = seed;
  return gen_pair(s);
}
}  // namespace

TEST_CASE("keyhole contour winds once around enclosed points only") {
  ContourSpec c = keyhole_contour(1.0, kPi / 4, 50.0, 200);
  CHECK(std::abs(winding_number(c, cplx(0, 0)) - 1.0) <= 1e-8);
  CHECK(std::abs(winding_number(c, cplx(-50.0, 0))) <= 1e-8);
  CHECK(std::abs(winding_number(c, cplx(3.7, 0)) - 1.0) <= 1e-8);
  // every node keeps its guaranteed distance from the positive real axis
  double min_dist = 1e300;
  for (const cplx& z : c.z) {
    double d = z.real() >= 0 ? std::abs(z.imag()) : std::abs(z);
    min_dist = std::min(min_dist, d);
  }
  CHECK(min_dist >= 1.0 * std::sin(kPi / 4) - 1e-12);
  CHECK_THROWS(keyhole_contour(1.0, kPi / 4, 50.0, 3));
}

TEST_CASE("commuting block pair: approximant is exact") {
  // S = diag(A, 0), T = diag(0, B) commute with ST = TS = 0
  GeneratedPair p = wac_pair(1);
  int m = p.s.dim();
  Mat zs = Mat::Zero(2 * m, 2 * m), zt = Mat::Zero(2 * m, 2 * m);
  zs.topLeftCorner(m, m) = p.s.matrix();
  zt.bottomRightCorner(m, m) = p.t.matrix();
  DunfordResult res = dunford_approximant(SelfAdjointOp(zs), SelfAdjointOp(zt), 10.0, 400);
  CHECK(res.r_norm <= 1e-6);
  CHECK(res.corrected_error <= 1e-6);
}

TEST_CASE("commuting pair with nonzero product: defect matches 2|ST|/(lambda^2+2)") {
  SelfAdjointOp s(kron(sigma3(), Mat::Identity(2, 2)));
  SelfAdjointOp t(kron(Mat::Identity(2, 2), sigma3()));
  for (double lambda : {10.0, 100.0}) {
    DunfordResult res = dunford_approximant(s, t, lambda, 400);
    CHECK(res.r_norm == doctest::Approx(2.0 / (lambda * lambda + 2.0)).epsilon(1e-2));
    CHECK(res.corrected_error <= 1e-8);
  }
}

TEST_CASE("certified instances reach a contracting defect on the sweep") {
  for (std::uint64_t seed : {2ull, 3ull}) {
    GeneratedPair p = wac_pair(seed);
    DunfordSweep sweep = dunford_sweep(p.s, p.t, {10, 100, 1000}, 400);
    REQUIRE(sweep.rows.size() == 3);
    CHECK(sweep.any_below_one);
    CHECK(sweep.corrected_ok);
    CHECK(sweep.refinement_ok);
    CHECK(sweep.tail_ratio <= 0.25);  // truncation leaves ~(1+|T|^2)/(r_max-|T|^2) at moderate lambda
    // defect decays roughly like 1/lambda^2 between the first two decades
    CHECK(sweep.rows[1].r_norm <= sweep.rows[0].r_norm * 0.1);
    for (const auto& row : sweep.rows) CHECK(row.corrected_resolvent_error <= 1e-6);
  }
}

TEST_CASE("lambda below 1 is rejected; the pole family must stay outside") {
  GeneratedPair p = wac_pair(4);
  CHECK_THROWS(dunford_approximant(p.s, p.t, 0.5, 100));
}

TEST_CASE("spectral angle: positive operators sit at the smallest grid angle") {
  GeneratedPair p = wac_pair(5);
  Mat psd = Mat::Identity(p.s.dim(), p.s.dim()) + p.s.matrix() * p.s.matrix();
  SectorialProfile prof = spectral_angle(psd);
  CHECK(prof.phi_hat == doctest::Approx(0.05 * kPi).epsilon(1e-12));
  REQUIRE(!prof.angles.empty());
  CHECK(prof.angles.back().stable);

  SectorialProfile idp = spectral_angle(Mat(Mat::Identity(4, 4)));
  CHECK(idp.phi_hat == doctest::Approx(0.05 * kPi).epsilon(1e-12));
}

TEST_CASE("spectral angle: a thin shifted rotation needs a half-plane sector") {
  // A = i sigma3 + 0.1: eigenvalues hug the imaginary axis
  Mat a = cplx(0, 1) * sigma3() + 0.1 * Mat::Identity(2, 2);
  SectorialProfile prof = spectral_angle(a);
  CHECK(prof.phi_hat == doctest::Approx(0.5 * kPi).epsilon(1e-12));
}
