#include "waclab/clifford.hpp"

#include <algorithm>
#include <cmath>

namespace waclab {

Mat doubled(const Mat& x) { return kron(Mat::Identity(2, 2), x); }

Mat sigma_of(int i) {
  switch (i) {
    case 1: return sigma1();
    case 2: return sigma2();
    case 3: return sigma3();
  }
  throw std::invalid_argument("sigma_of: index must be 1, 2, or 3");
}

Mat sigma_action(int i, Eigen::Index m) { return kron(sigma_of(i), Mat::Identity(m, m)); }

CliffordPair make_clifford_pair(const SelfAdjointOp& s, const SelfAdjointOp& t, int i, int j) {
  if (i == j) throw std::invalid_argument("make_clifford_pair: generator indices must differ");
  CliffordPair p;
  p.i = i;
  p.j = j;
  p.s_hat = doubled(s.matrix());
  p.t_hat = doubled(t.matrix());
  p.s_i = kron(sigma_of(i), s.matrix());
  p.t_j = kron(sigma_of(j), t.matrix());
  return p;
}

double lift_commutation_residual(const CliffordPair& p) {
  Eigen::Index m = p.s_hat.rows() / 2;
  double r = 0.0;
  for (int a = 1; a <= 3; ++a) {
    Mat act = sigma_action(a, m);
    r = std::max(r, op_norm(commutator(p.s_hat, act)));
    r = std::max(r, op_norm(commutator(p.t_hat, act)));
  }
  return r;
}

double square_residual(const CliffordPair& p) {
  Eigen::Index m = p.s_hat.rows() / 2;
  Mat s = p.s_hat.topLeftCorner(m, m);
  return op_norm(p.s_i * p.s_i - doubled(s * s));
}

double sign_swap_residual(const SelfAdjointOp& s, const SelfAdjointOp& t, int i, int j,
                          double tau) {
  Mat si = kron(sigma_of(i), s.matrix());
  Mat tj = kron(sigma_of(j), t.matrix());
  Mat lhs = graded_commutator(si, tj, tau);
  Mat rhs = kron(sigma_of(i) * sigma_of(j), graded_commutator(s.matrix(), t.matrix(), -tau));
  return op_norm(lhs - rhs);
}

double resolvent_form_residual(const SelfAdjointOp& s, int i, cplx lambda) {
  Mat si = kron(sigma_of(i), s.matrix());
  const Eigen::Index n = si.rows();
  Mat id = Mat::Identity(n, n);
  Mat sq_inv = Eigen::PartialPivLU<Mat>(doubled(s.matrix() * s.matrix()) - lambda * lambda * id)
                   .solve(id);
  Mat form = (si - lambda * id) * sq_inv;
  double r1 = op_norm((si + lambda * id) * form - id);
  Mat direct = Eigen::PartialPivLU<Mat>(si + lambda * id).solve(id);
  double r2 = op_norm(direct - form);
  return std::max(r1, r2);
}

double sum_block_residual(const SelfAdjointOp& s, const SelfAdjointOp& t) {
  const Mat& sm = s.matrix();
  const Mat& tm = t.matrix();
  const Eigen::Index m = sm.rows();
  Mat lhs = kron(sigma3(), sm) + doubled(tm);
  Mat rhs = Mat::Zero(2 * m, 2 * m);
  rhs.topLeftCorner(m, m) = sm + tm;
  rhs.bottomRightCorner(m, m) = tm - sm;
  return op_norm(lhs - rhs);
}

double anticommutator_block_residual(const SelfAdjointOp& s, const SelfAdjointOp& t, double pm) {
  const Mat& sm = s.matrix();
  const Mat& tm = t.matrix();
  Mat lhs = anticommutator(kron(sigma3(), sm) + pm * doubled(tm), kron(sigma1(), sm));
  Mat rhs = pm * kron(sigma1(), anticommutator(sm, tm));
  return op_norm(lhs - rhs);
}

TransferReport transfer_check(const SelfAdjointOp& s, const SelfAdjointOp& t) {
  TransferReport rep;
  rep.original = certify_wac(s, t, PairSign::anticommuting);
  CliffordPair p = make_clifford_pair(s, t, 1, 2);
  rep.transformed = certify_wac(SelfAdjointOp(p.s_i), SelfAdjointOp(p.t_j), PairSign::commuting);
  // coordinates are compared at the certificate's scale: per-coordinate self-relative
  // differences would amplify dust-level c's into order-one deviations
  double sc = std::max(1e-12, std::abs(rep.original.objective_value) +
                                  std::abs(rep.transformed.objective_value));
  auto rd = [sc](double x, double y) { return std::abs(x - y) / sc; };
  rep.rel_diff = std::max({rd(rep.original.c0, rep.transformed.c0),
                           rd(rep.original.c1, rep.transformed.c1),
                           rd(rep.original.c2, rep.transformed.c2),
                           rd(rep.original.objective_value, rep.transformed.objective_value)});
  return rep;
}

namespace {

std::vector<double> sorted_spectrum(const Mat& herm) {
  Eigen::SelfAdjointEigenSolver<Mat> es(herm, Eigen::EigenvaluesOnly);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.begin(), v.end());
  return v;
}

double multiset_gap(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double g = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) g = std::max(g, std::abs(a[i] - b[i]));
  return g;
}

}  // namespace

ParityReport parity_involution_check(const SelfAdjointOp& s, const SelfAdjointOp& t,
                                     bool expect_sign_conjugate) {
  const Mat& sm = s.matrix();
  const Mat& tm = t.matrix();
  // transform twice with generators (1,2): sigma (x) sigma (x) original
  Mat s2m = kron(sigma1(), kron(sigma1(), sm));
  Mat t2m = kron(sigma2(), kron(sigma2(), tm));
  double scale = std::max(1.0, s.norm() + t.norm());
  ParityReport rep;

  auto union_signs = [&](auto&& f) {
    std::vector<double> all;
    for (double a : {1.0, -1.0})
      for (double b : {1.0, -1.0}) {
        std::vector<double> part = sorted_spectrum(f(a * sm, b * tm));
        all.insert(all.end(), part.begin(), part.end());
      }
    return all;
  };
  double g = 0.0;
  g = std::max(g, multiset_gap(sorted_spectrum(s2m + t2m),
                               union_signs([](const Mat& a, const Mat& b) { return a + b; })));
  g = std::max(g, multiset_gap(sorted_spectrum(hermitian_part(anticommutator(s2m, t2m))),
                               union_signs([](const Mat& a, const Mat& b) { return anticommutator(a, b); })));
  rep.block_decomposition_ok = g <= 1e-10 * scale * scale;
  rep.worst_gap = g;

  if (expect_sign_conjugate) {
    auto four_copies = [&](const Mat& m) {
      std::vector<double> one = sorted_spectrum(m), all;
      for (int c = 0; c < 4; ++c) all.insert(all.end(), one.begin(), one.end());
      return all;
    };
    double h = 0.0;
    h = std::max(h, multiset_gap(sorted_spectrum(s2m), four_copies(sm)));
    h = std::max(h, multiset_gap(sorted_spectrum(t2m), four_copies(tm)));
    h = std::max(h, multiset_gap(sorted_spectrum(s2m + t2m), four_copies(sm + tm)));
    h = std::max(h, multiset_gap(sorted_spectrum(hermitian_part(anticommutator(s2m, t2m))),
                                 four_copies(hermitian_part(anticommutator(sm, tm)))));
    rep.sign_conjugate_match = h <= 1e-10 * scale * scale;
    rep.worst_gap = std::max(rep.worst_gap, h);
  }
  return rep;
}

}  // namespace waclab
