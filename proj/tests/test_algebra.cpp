#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "waclab/algebra.hpp"
#include "waclab/generator.hpp"

using namespace waclab;

TEST_CASE("sigma algebra: squares, products, operator norms") {
  Mat s1 = sigma1(), s2 = sigma2(), s3 = sigma3();
  Mat i2 = Mat::Identity(2, 2);
  CHECK(op_norm(s1 * s1 - i2) == 0.0);
  CHECK(op_norm(s2 * s2 - i2) == 0.0);
  CHECK(op_norm(s3 * s3 - i2) == 0.0);
  CHECK(op_norm(s1 * s2 - cplx(0, -1) * s3) == 0.0);
  CHECK(op_norm(anticommutator(s1, s2)) == 0.0);
  CHECK(op_norm(s1) == doctest::Approx(1.0).epsilon(1e-14));

  Mat d(2, 2);
  d << 3, 0, 0, -5;
  CHECK(op_norm(d) == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("positivity is relative to the norm") {
  Mat i2 = Mat::Identity(2, 2);
  CHECK(is_positive(i2));
  CHECK(is_positive(Mat::Zero(2, 2)));
  Mat near(2, 2);
  near << 1, 0, 0, -1e-11;  // dip under tol*|a| = 1e-10
  CHECK(is_positive(near));
  near(1, 1) = -1e-9;
  CHECK_FALSE(is_positive(near));
  CHECK_FALSE(is_positive(Mat(cplx(0, 1) * sigma3())));  // not hermitian
}

TEST_CASE("pencil eigenvalues certify sup forms") {
  Mat a(2, 2), b(2, 2);
  a << 2, 0, 0, 8;
  b << 1, 0, 0, 2;
  RVec g = pencil_eigenvalues(a, b);
  CHECK(g.minCoeff() == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(g.maxCoeff() == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(pencil_sup_sqrt(a, b) == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("module inner product is B-valued and positive") {
  ModuleShape shape{2, 2};
  CounterRng rng(5);
  ModuleVector x = random_vector(rng, shape);
  Mat gram = inner_product(x, x);
  CHECK(is_positive(gram));
  CHECK(gram.rows() == 2);
  ModuleVector y = random_vector(rng, shape);
  Mat xy = inner_product(x, y);
  CHECK(op_norm(Mat(xy - inner_product(y, x).adjoint())) <= 1e-14 * op_norm(xy));
}

TEST_CASE("self-adjoint operator symmetrizes within tolerance and rejects beyond") {
  Mat a = sigma3();
  a(0, 1) = cplx(1e-13, 0);  // tiny asymmetry is absorbed
  SelfAdjointOp op(a);
  CHECK(op_norm(Mat(op.matrix() - op.matrix().adjoint())) == 0.0);

  Mat bad = sigma3();
  bad(0, 1) = cplx(0.5, 0);
  CHECK_THROWS(SelfAdjointOp(bad));
}

TEST_CASE("functional calculus and resolvent") {
  SelfAdjointOp s3(sigma3());
  // (sigma3 + 2i)^{-1} has norm 1/sqrt(5)
  CHECK(s3.resolvent_norm(cplx(0, 2)) == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-13));
  Mat r = s3.resolvent(cplx(0, 2));
  CHECK(op_norm(Mat((s3.matrix() + cplx(0, 2) * Mat::Identity(2, 2)) * r - Mat::Identity(2, 2))) <=
        1e-14);
  CHECK_THROWS(s3.resolvent(cplx(-1, 0)));  // on the spectrum

  Mat sq = s3.real_func([](double x) { return x * x; });
  CHECK(op_norm(Mat(sq - Mat::Identity(2, 2))) <= 1e-14);

  SelfAdjointOp neg = s3.negated();
  CHECK(op_norm(Mat(neg.matrix() + s3.matrix())) == 0.0);
  SelfAdjointOp half = s3.scaled(0.5);
  CHECK(half.norm() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(op_norm(Mat(SelfAdjointOp::from_eigen(s3.eigenvectors(), s3.eigenvalues()).matrix() -
                    s3.matrix())) <= 1e-14);
}

TEST_CASE("graded commutator covers both signs") {
  Mat s1 = sigma1(), s2 = sigma2(), s3 = sigma3();
  CHECK(op_norm(graded_commutator(s1, s2, +1.0)) == 0.0);
  CHECK(op_norm(Mat(graded_commutator(s1, s2, -1.0) - cplx(0, -2) * s3)) == 0.0);
  CHECK_THROWS(graded_commutator(s1, Mat::Identity(3, 3), 1.0));
}

TEST_CASE("resolvent commutation identities hold at roundoff") {
  GeneratorSpec spec;
  spec.n = 4;
  spec.k = 2;
  spec.spectral_scale = 0.5;
  spec.anticommutator_target = 1.0;
  spec.seed = 99;
  GeneratedPair p = gen_pair(spec);
  for (double tau : {+1.0, -1.0}) {
    ResolventIdentityReport r =
        resolvent_commutator_identities(p.s.matrix(), p.t.matrix(), cplx(1.3, 0.7), tau);
    CHECK(r.shift_through <= 1e-13 * r.scale);
    CHECK(r.square_minus <= 1e-13 * r.scale);
    CHECK(r.square_plus <= 1e-13 * r.scale);
  }
}

TEST_CASE("kron and psd square root") {
  Mat k = kron(sigma3(), Mat::Identity(3, 3));
  CHECK(k.rows() == 6);
  CHECK(k(0, 0) == cplx(1, 0));
  CHECK(k(5, 5) == cplx(-1, 0));

  Mat a(2, 2);
  a << 4, 0, 0, 9;
  Mat r = matrix_sqrt_psd(a);
  CHECK(op_norm(Mat(r * r - a)) <= 1e-10);
  CHECK(r(0, 0).real() == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(r(1, 1).real() == doctest::Approx(3.0).epsilon(1e-10));
}
