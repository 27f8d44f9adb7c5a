#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "waclab/clifford.hpp"
#include "waclab/kk.hpp"

using namespace waclab;

namespace {
constexpr double kPi = std::numbers::pi;

GeneratedPair wac_pair(std::uint64_t seed, double target = 1.0) {
  GeneratorSpec s;
  s.n = 4;
  s.k = 2;
  s.spectral_scale = 0.5;
  s.anticommutator_target = target;
  s.seed = seed;
  return gen_pair(s);
}

Mat g_of(const Mat& d, double mu) {
  return SelfAdjointOp(d).real_func([mu](double x) { return 1.0 / (1.0 + mu * mu * x * x); });
}
}  // namespace

TEST_CASE("volume element block identities") {
  GeneratedPair p = wac_pair(1);
  const Mat& ms = p.s.matrix();
  const Mat& mt = p.t.matrix();
  Mat w = volume_element(ms.rows());
  Mat shat = doubled(ms), that = doubled(mt);
  Mat dp = d_plus(ms, mt), dm = d_minus(ms, mt);
  CHECK(op_norm(Mat(w * w - Mat::Identity(w.rows(), w.cols()))) == 0.0);
  CHECK(op_norm(Mat(dp - (shat + w * that))) == 0.0);
  CHECK(op_norm(Mat(dm - (shat - w * that))) == 0.0);
  CHECK(op_norm(Mat(dp * w - w * dp)) == 0.0);  // both block diagonal
  CHECK(op_norm(Mat(w * dp - (w * shat + that))) == 0.0);
  // blocks: D+ = diag(S+T, S-T), D- = diag(S-T, S+T)
  int m = static_cast<int>(ms.rows());
  CHECK(op_norm(Mat(dp.topLeftCorner(m, m) - (ms + mt))) == 0.0);
  CHECK(op_norm(Mat(dp.bottomRightCorner(m, m) - (ms - mt))) == 0.0);
  CHECK(op_norm(Mat(dm.topLeftCorner(m, m) - (ms - mt))) == 0.0);
  CHECK(op_norm(Mat(dp.topRightCorner(m, m))) == 0.0);
}

TEST_CASE("chi is odd, bounded by 1, and the quadrature agrees with the eigenbasis") {
  GeneratedPair p = wac_pair(2);
  SelfAdjointOp d(d_plus(p.s.matrix(), p.t.matrix()));
  Mat c = chi_eig(d);
  CHECK(op_norm(c) < 1.0);
  CHECK(op_norm(Mat(chi_eig(d.negated()) + c)) == 0.0);  // odd, shared eigenbasis
  CHECK(op_norm(Mat(c - chi_quadrature(d, 200))) <= 1e-8);
  CHECK_THROWS(chi_quadrature(d, 4));

  SelfAdjointOp big = d.scaled(60.0 / d.norm());  // panel-split branch
  CHECK(op_norm(Mat(chi_eig(big) - chi_quadrature(big, 200))) <= 1e-8);
}

TEST_CASE("arctan quadrature stays under pi/2 at every scale") {
  GeneratedPair p = wac_pair(3);
  SelfAdjointOp d(d_plus(p.s.matrix(), p.t.matrix()));
  for (double scale : {1.0, 30.0, 300.0}) {
    double v = arctan_quadrature_max(d.scaled(scale / d.norm()));
    CHECK(v <= kPi / 2 + 1e-8);
    CHECK(v >= std::atan(scale) - 1e-3);
  }
}

TEST_CASE("K_mu contracts to both one-sided product forms") {
  GeneratedPair p = wac_pair(4);
  for (double mu : {0.3, 1.0, 2.5}) {
    KMuReport rep = k_mu_identities(p.s, p.t, mu);
    CHECK(rep.res_def_first <= 1e-13 * rep.scale);
    CHECK(rep.res_def_second <= 1e-13 * rep.scale);
    CHECK(rep.res_forms <= 1e-13 * rep.scale);
    CHECK(rep.norm_k <= 2.0);  // difference of two contractions
  }
  CHECK_THROWS(k_mu_identities(p.s, p.t, 0.0));
  CHECK_THROWS(k_mu_identities(p.s, p.t, -1.0));
}

TEST_CASE("K_mu sweep: residuals at roundoff, norms uniformly bounded in mu") {
  GeneratedPair p = wac_pair(5);
  KMuSweep sweep = k_mu_sweep(p.s, p.t, 25);
  REQUIRE(sweep.mu.size() == 25);
  CHECK(sweep.worst_residual <= 1e-12);
  CHECK(sweep.sup_k <= 2.0);
  CHECK(sweep.sup_dk < 1e3);
  for (std::size_t i = 0; i < sweep.mu.size(); ++i) {
    CHECK(sweep.norm_k[i] <= sweep.sup_k);
    CHECK(sweep.norm_dk[i] <= sweep.sup_dk);
  }
}

TEST_CASE("gold identity: w R_mu equals the two-term product form, with scaling") {
  GeneratedPair p = wac_pair(6);
  for (double mu : {0.5, 1.0, 2.0}) {
    RMuReport rep = r_mu_identity(p.s, p.t, mu);
    CHECK(rep.residual <= 1e-13 * rep.scale);
    CHECK(rep.residual_scaling <= 1e-13 * rep.scale);
    CHECK(rep.norm_r > 0.0);
  }
  CHECK_THROWS(r_mu_identity(p.s, p.t, 0.0));
}

TEST_CASE("replacement defect equals exact minus the all-minus product form") {
  GeneratedPair p = wac_pair(7);
  const Mat& ms = p.s.matrix();
  const Mat& mt = p.t.matrix();
  double mu = 0.7;
  Mat w = volume_element(ms.rows());
  Mat bhat = doubled(anticommutator(ms, mt));
  Mat dm = d_minus(ms, mt);
  Mat gm = g_of(dm, mu);
  Mat core = gm * bhat * gm;
  Mat replaced = w * Mat(core + mu * mu * dm * core * dm);
  Mat exact = r_mu_matrix(p.s, p.t, mu);
  Mat pert = pert_mu_matrix(p.s, p.t, mu);
  double scale = (1 + op_norm(bhat)) * (1 + mu * mu);
  CHECK(op_norm(Mat(pert - (exact - replaced))) <= 1e-12 * scale);
}

TEST_CASE("defect is linearly dominated through the interpolation endpoint") {
  for (std::uint64_t seed : {8ull, 9ull}) {
    GeneratedPair p = wac_pair(seed);
    Kk2Report rep = kk2_bound(p.s, p.t);
    CHECK(rep.ok);
    CHECK(rep.slack_plus >= -1e-9 * rep.scale);
    CHECK(rep.slack_minus >= -1e-9 * rep.scale);
    CHECK(rep.p0_norm > 0.0);
  }
}

TEST_CASE("resolvent-conjugated domination holds per mu and shrinks under rescaling") {
  GeneratedPair p = wac_pair(10);
  Kk3Report rep = kk3_bound(p.s, p.t);
  CHECK(rep.ok);
  CHECK(rep.scaling_ok);
  CHECK(rep.worst_slack >= -1e-9 * rep.scale);
  CHECK(rep.p0_tenth <= 0.1 * rep.p0_norm * (1 + 1e-12));
  REQUIRE(rep.rows.size() == 3);
}

TEST_CASE("rescaling achieves the positivity threshold") {
  double kappa = 0.1;
  for (std::uint64_t seed : {11ull, 12ull}) {
    GeneratedPair p = wac_pair(seed);
    RescaleReport rep = rescale_for_kappa(p.s, p.t, kappa);
    CHECK(rep.bisection_ok);
    CHECK(rep.success);
    CHECK(rep.t_star > 0.0);
    CHECK(rep.t_star <= 1.0);
    CHECK(rep.epsilon_used == doctest::Approx(2 * kappa / (kPi * kPi * kPi)).epsilon(1e-14));
    CHECK(rep.p0_at_t <= rep.epsilon_used * (1 + 1e-6));
    CHECK(rep.lambda_min >= -kappa);
    CHECK(rep.lambda_min_adjusted >= rep.lambda_min - 1.0);  // defect subtraction stays tame
  }
  GeneratedPair p = wac_pair(11);
  CHECK_THROWS(rescale_for_kappa(p.s, p.t, 0.0));
}

TEST_CASE("exactly anticommuting pairs need no rescaling at all") {
  GeneratedPair p = wac_pair(13, 0.0);
  RescaleReport rep = rescale_for_kappa(p.s, p.t, 0.1);
  CHECK(rep.t_star == 1.0);  // P0 vanishes, the threshold is met at t = 1
  CHECK(rep.success);
  CHECK(rep.lambda_min >= -0.1);
}

TEST_CASE("anticommutator of chi functions decomposes through the double integral") {
  GeneratorSpec s;
  s.n = 2;
  s.k = 2;
  s.spectral_scale = 0.3;
  s.anticommutator_target = 0.5;
  s.seed = 14;
  GeneratedPair p = gen_pair(s);
  CHECK(chi_decomposition_residual(p.s, p.t) <= 1e-6);
}

TEST_CASE("graded module construction validates the grading") {
  ModuleShape shape{2, 1};
  GradedModule m = make_graded_module(shape, sigma3());
  CHECK(op_norm(Mat(m.grading - sigma3())) == 0.0);
  CHECK_THROWS(make_graded_module(shape, Mat(sigma1() * 0.5)));  // square != identity
  CHECK_THROWS(make_graded_module(shape, Mat(cplx(0, 1) * sigma3())));  // not hermitian
}

TEST_CASE("cycle data from a generated pair: D odd, even representatives listed") {
  GeneratedPair p = wac_pair(15);
  KasparovTriple triple = triple_from_pair(p);
  CHECK(triple.module.shape.n == 2 * p.shape.n);
  CHECK(triple.d.dim() == 2 * p.s.dim());
  CHECK(triple.oddness_residual <= 1e-12 * std::max(1.0, triple.d.norm()));
  REQUIRE(triple.representation.size() == 3);
  REQUIRE(triple.commutator_norms.size() == 3);
  for (const auto& [name, nrm] : triple.commutator_norms) {
    CHECK(!name.empty());
    CHECK(nrm >= 0.0);
  }

  GeneratedPair bare = pair_from_matrices(sigma1(), sigma2(), ModuleShape{2, 1});
  CHECK_THROWS(triple_from_pair(bare));  // no grading carried
}

TEST_CASE("balanced tensor over matrix units: rank 2 with gram eigenvalues {2,2}") {
  // X = B over B = M_2, Y = C^2 with the identity left action
  ModuleShape xs{1, 2}, ys{2, 1};
  LeftAction rho = [](const Mat& b) { return b; };
  InteriorTensor e = interior_tensor(xs, ys, rho, sigma3(), Mat(Mat::Identity(2, 2)));
  CHECK(e.nx_coeff == 4);
  CHECK(e.ny_coeff == 2);
  CHECK(e.rank == 2);
  REQUIRE(e.gram_eigenvalues.size() == 8);
  for (int i = 0; i < 6; ++i) CHECK(std::abs(e.gram_eigenvalues[i]) <= 1e-12);
  CHECK(e.gram_eigenvalues[6] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(e.gram_eigenvalues[7] == doctest::Approx(2.0).epsilon(1e-12));
  // the embedding y -> 1_B (x) y is an isometry onto the quotient
  Mat emb = Mat::Zero(8, 2);
  for (int v = 0; v < 2; ++v)
    for (int u = 0; u < 2; ++u) emb((u * 2 + u) * 2 + v, v) = 1.0;
  Mat gram = coefficient_gram(e, emb);
  CHECK(op_norm(Mat(gram - Mat::Identity(2, 2))) <= 1e-13);
  // row grading descends (it preserves the balancing relations) and involutes
  CHECK(op_norm(Mat(e.grading * e.grading - Mat::Identity(e.rank, e.rank))) <= 1e-12);
  // a column grading does not commute with the left action: no quotient lift
  CHECK_THROWS(interior_tensor(xs, ys, rho, sigma3(), sigma3()));
}

TEST_CASE("trivial coefficients: gram is the identity and lifts are literal kroneckers") {
  ModuleShape xs{2, 1}, ys{2, 2};
  LeftAction rho = [](const Mat& b) { return Mat(b(0, 0) * Mat::Identity(4, 4)); };
  Mat gx = sigma3(), gy = kron(sigma3(), Mat::Identity(2, 2));
  InteriorTensor e = interior_tensor(xs, ys, rho, gx, gy);
  CHECK(e.nx_coeff == 2);
  CHECK(e.ny_coeff == 8);
  CHECK(e.rank == e.nx_coeff * e.ny_coeff);
  CHECK(op_norm(Mat(e.gram - Mat::Identity(e.rank, e.rank))) == 0.0);
  CHECK(op_norm(Mat(e.quotient_basis - Mat::Identity(e.rank, e.rank))) == 0.0);
  Mat sx = 0.7 * sigma1() + 0.2 * sigma3();
  Mat lifted = lift_s(e, sx);
  Mat expected = kron(sx, Mat::Identity(e.ny_coeff, e.ny_coeff));
  CHECK(op_norm(Mat(lifted - expected)) == 0.0);
}

TEST_CASE("non-balanced lifts are rejected by the null-space check") {
  ModuleShape xs{1, 2}, ys{2, 1};
  LeftAction rho = [](const Mat& b) { return b; };
  InteriorTensor e = interior_tensor(xs, ys, rho, sigma3(), Mat(Mat::Identity(2, 2)));
  // right multiplication on the X column index is not balanced over B
  Mat col_mix = Mat::Zero(2, 2);
  col_mix(0, 1) = 1.0;
  Mat bad = kron(kron(Mat::Identity(2, 2), col_mix), Mat::Identity(2, 2));
  CHECK_THROWS(project_to_quotient(e, bad));
  // left action on rows is balanced and passes
  Mat good = x_coefficient_action(e, sigma1());
  Mat projected = project_to_quotient(e, good);
  CHECK(projected.rows() == e.rank);
  CHECK(projected.cols() == e.rank);
}

TEST_CASE("graded extension satisfies both product-cycle conditions") {
  ModuleShape xs{2, 1}, ys{2, 2};
  LeftAction rho = [](const Mat& b) { return Mat(b(0, 0) * Mat::Identity(4, 4)); };
  Mat gx = sigma3(), gy = kron(sigma3(), Mat::Identity(2, 2));
  InteriorTensor e = interior_tensor(xs, ys, rho, gx, gy);
  Mat t_y = kron(sigma1(), Mat::Identity(2, 2));  // odd for gy
  Mat t_full = x_coefficient_action(e, gx) * y_coefficient_action(e, t_y);
  std::vector<HomogeneousVector> xs_h(2);
  for (int u = 0; u < 2; ++u) {
    xs_h[u].x_coeff = Eigen::VectorXcd::Zero(2);
    xs_h[u].x_coeff[u] = 1.0;
    xs_h[u].sign = u == 0 ? +1 : -1;
  }
  SelfAdjointOp s_q(sigma1()), d_q(sigma1());  // [chi,chi]+ = 2 chi(s)^2 >= 0
  std::vector<std::pair<std::string, Mat>> algebra = {
      {"one", Mat(Mat::Identity(2, 2))}, {"a", Mat(0.4 * sigma3() + 0.3 * sigma1())}};
  ConnesSkandalisReport rep =
      connes_skandalis_check(e, t_full, t_y, xs_h, s_q, d_q, algebra, 0.1);
  CHECK(rep.ok);
  CHECK(rep.kappa_admissible);
  CHECK(rep.condition_i_max <= 1e-12);
  // chi(sigma1) has eigenvalues +-1/2, so [chi,chi]+ = I/2 and a = I adds kappa
  CHECK(rep.identity_lambda_min == doctest::Approx(0.5).epsilon(1e-12));
  REQUIRE(rep.condition_ii.size() == 2);
  CHECK(rep.condition_ii[0].second == doctest::Approx(0.6).epsilon(1e-9));
  for (const auto& [name, lam] : rep.condition_ii) CHECK(lam >= -1e-10);
  CHECK(rep.finite_dimension_note);

  ConnesSkandalisReport badk =
      connes_skandalis_check(e, t_full, t_y, xs_h, s_q, d_q, algebra, 2.5);
  CHECK_FALSE(badk.kappa_admissible);
  CHECK_FALSE(badk.ok);
}
