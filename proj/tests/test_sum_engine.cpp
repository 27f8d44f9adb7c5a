#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "waclab/generator.hpp"
#include "waclab/sum_engine.hpp"

using namespace waclab;

static GeneratedPair wac_pair(std::uint64_t seed) {
  GeneratorSpec s;
  s.n = 4;
  s.k = 2;
  s.spectral_scale = 0.5;
  s.anticommutator_target = 1.0;
  s.seed = seed;
  return gen_pair(s);
}

TEST_CASE("pauli regularized sum at lambda = 10i is s1 + s2 + s3/10") {
  // TS = s2 s1 = i s3, so TS/lambda = s3/10 exactly
  Mat al = a_lambda(sigma1(), sigma2(), cplx(0, 10));
  Mat expect = sigma1() + sigma2() + 0.1 * sigma3();
  CHECK(op_norm(Mat(al - expect)) <= 1e-15);
}

TEST_CASE("factorization through the shifted product holds at roundoff") {
  CHECK(factorization_residual(sigma1(), sigma2(), cplx(0, 10)) <= 1e-14);
  GeneratedPair p = wac_pair(5);
  double scale = (1 + p.s.norm()) * (1 + p.t.norm());
  CHECK(factorization_residual(p.s.matrix(), p.t.matrix(), cplx(0, 10)) <= 1e-13 * scale);
  CHECK(factorization_residual(p.s.matrix(), p.t.matrix(), cplx(0, -3)) <= 1e-13 * scale);
}

TEST_CASE("five uniform bounds hold from the computed threshold upward") {
  for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
    GeneratedPair p = wac_pair(seed);
    WacCertificate cert = certify_wac(p.s, p.t, PairSign::anticommuting);
    Mu0Report mu0 = mu0_threshold(p.s, p.t, cert);
    REQUIRE(mu0.found);
    CHECK(mu0.mu0 >= 1.0);
    for (double mu_mult : {1.0, 10.0})
      for (double lam_mult : {10.0, 100.0}) {
        cplx mu(0, mu0.mu0 * mu_mult);
        cplx lam(0, mu0.mu0 * mu_mult * lam_mult);
        BoundSample b = five_bounds(p.s, p.t, cert, lam, mu);
        CHECK(b.ok);
        CHECK(b.worst_excess <= 0.0);
        CHECK(b.inv <= std::sqrt(2.0) + 1e-8);
        CHECK(b.s <= std::sqrt(2.0) + 1e-8);
        CHECK(b.t <= std::sqrt(2.0) + 1e-8);
        CHECK(b.ts <= 1.0 + 1e-8);
        CHECK(b.comm <= b.c_mu + 1e-8);
      }
  }
}

TEST_CASE("bound evaluation rejects shifts off the common imaginary ray") {
  GeneratedPair p = wac_pair(14);
  WacCertificate cert = certify_wac(p.s, p.t, PairSign::anticommuting);
  CHECK_THROWS(five_bounds(p.s, p.t, cert, cplx(10, 0), cplx(0, 1)));   // real lambda
  CHECK_THROWS(five_bounds(p.s, p.t, cert, cplx(0, 10), cplx(0, -1)));  // opposite rays
  CHECK_THROWS(five_bounds(p.s, p.t, cert, cplx(0, 1), cplx(0, 10)));   // |lambda| <= |mu|
}

TEST_CASE("resolvent convergence: slope near -1 and six-decade drop") {
  GeneratedPair p = wac_pair(15);
  WacCertificate cert = certify_wac(p.s, p.t, PairSign::anticommuting);
  Mu0Report mu0 = mu0_threshold(p.s, p.t, cert);
  REQUIRE(mu0.found);
  ConvergenceReport rep = convergence_sweep(p.s, p.t, cplx(0, mu0.mu0));
  REQUIRE(rep.rows.size() == 6);
  CHECK_FALSE(rep.ts_zero);
  CHECK(rep.slope >= -1.15);
  CHECK(rep.slope <= -0.85);
  CHECK(rep.drop_ratio <= 1e-4);
  CHECK(rep.bound_ok);
  CHECK(rep.rate_band_ok);
  double scale = (1 + p.s.norm()) * (1 + p.t.norm());
  CHECK(rep.identity_residual <= 1e-12 * scale);
}

TEST_CASE("zero TS makes the regularized sum exact") {
  // S = diag(A, 0), T = diag(0, B): TS = 0, A_lambda = S + T for every lambda
  GeneratedPair p = wac_pair(16);
  int m = p.s.dim();
  Mat zs = Mat::Zero(2 * m, 2 * m), zt = Mat::Zero(2 * m, 2 * m);
  zs.topLeftCorner(m, m) = p.s.matrix();
  zt.bottomRightCorner(m, m) = p.t.matrix();
  ConvergenceReport rep = convergence_sweep(SelfAdjointOp(zs), SelfAdjointOp(zt), cplx(0, 10));
  CHECK(rep.ts_zero);
  for (const auto& row : rep.rows) CHECK(row.residual <= 1e-12);
}

TEST_CASE("resolvent smoothing converges at first order") {
  GeneratedPair p = wac_pair(17);
  CounterRng rng(4242);
  SmoothingReport rep = smoothing_check(p.s, p.t, random_vector(rng, p.shape).m);
  REQUIRE(rep.lambda_abs.size() == 5);
  CHECK(std::abs(rep.slope0 + 1.0) <= 0.2);
  CHECK(std::abs(rep.slope_s + 1.0) <= 0.25);
  for (std::size_t i = 1; i < rep.err0.size(); ++i) CHECK(rep.err0[i] < rep.err0[i - 1]);
}
