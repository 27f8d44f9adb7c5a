#include "waclab/algebra.hpp"

#include <cmath>

namespace waclab {

double op_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(a.adjoint() * a, Eigen::EigenvaluesOnly);
  double top = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(0.0, top));
}

Mat hermitian_part(const Mat& a) { return 0.5 * (a + a.adjoint()); }

double min_eig_herm(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double max_eig_herm(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

bool is_positive(const Mat& a, double tol) {
  double na = op_norm(a);
  if (na == 0.0) return true;
  if (op_norm(a - a.adjoint()) > tol * na) return false;
  return min_eig_herm(hermitian_part(a)) >= -tol * na;
}

RVec pencil_eigenvalues(const Mat& a, const Mat& b) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(a, b, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) throw std::runtime_error("pencil solve failed (B not positive definite?)");
  return es.eigenvalues();
}

double pencil_sup_sqrt(const Mat& a, const Mat& b) {
  double top = pencil_eigenvalues(a, b).maxCoeff();
  return std::sqrt(std::max(0.0, top));
}

Mat inner_product(const ModuleVector& x, const ModuleVector& y) {
  if (!(x.shape == y.shape)) throw std::invalid_argument("inner_product: shape mismatch");
  return x.m.adjoint() * y.m;
}

Mat graded_commutator(const Mat& a, const Mat& b, double tau) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("graded_commutator: shape mismatch");
  return a * b + tau * b * a;
}

SelfAdjointOp::SelfAdjointOp(const Mat& a, double tol) {
  double na = op_norm(a);
  double asym = op_norm(a - a.adjoint());
  if (na > 0.0 && asym > tol * na)
    throw std::invalid_argument("SelfAdjointOp: matrix is not hermitian within tolerance");
  mat_ = hermitian_part(a);
  Eigen::SelfAdjointEigenSolver<Mat> es(mat_);
  if (es.info() != Eigen::Success) throw std::runtime_error("SelfAdjointOp: eigensolver failed");
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
  norm_ = mat_.size() ? std::max(std::abs(evals_.minCoeff()), std::abs(evals_.maxCoeff())) : 0.0;
}

Mat SelfAdjointOp::func(const std::function<cplx(double)>& f) const {
  Eigen::VectorXcd d(evals_.size());
  for (Eigen::Index i = 0; i < evals_.size(); ++i) d(i) = f(evals_(i));
  return evecs_ * d.asDiagonal() * evecs_.adjoint();
}

Mat SelfAdjointOp::real_func(const std::function<double(double)>& f) const {
  return func([&](double x) { return cplx(f(x), 0.0); });
}

Mat SelfAdjointOp::resolvent(cplx lambda) const {
  double scale = std::max({1.0, norm_, std::abs(lambda)});
  for (Eigen::Index i = 0; i < evals_.size(); ++i)
    if (std::abs(evals_(i) + lambda) <= 1e-14 * scale)
      throw std::runtime_error("resolvent: A + lambda is singular");
  return func([&](double x) { return 1.0 / (x + lambda); });
}

double SelfAdjointOp::resolvent_norm(cplx lambda) const {
  double best = 0.0;
  for (Eigen::Index i = 0; i < evals_.size(); ++i) best = std::max(best, 1.0 / std::abs(evals_(i) + lambda));
  return best;
}

SelfAdjointOp SelfAdjointOp::negated() const { return from_eigen(evecs_, -evals_); }

SelfAdjointOp SelfAdjointOp::scaled(double t) const { return from_eigen(evecs_, t * evals_); }

SelfAdjointOp SelfAdjointOp::from_eigen(const Mat& evecs, const RVec& evals) {
  SelfAdjointOp op;
  op.evecs_ = evecs;
  op.evals_ = evals;
  op.mat_ = evecs * evals.cast<cplx>().asDiagonal() * evecs.adjoint();
  op.mat_ = hermitian_part(op.mat_);
  op.norm_ = evals.size() ? std::max(std::abs(evals.minCoeff()), std::abs(evals.maxCoeff())) : 0.0;
  return op;
}

ResolventIdentityReport resolvent_commutator_identities(const Mat& a, const Mat& b, cplx lambda,
                                                        double tau) {
  const Eigen::Index n = a.rows();
  Mat I = Mat::Identity(n, n);
  Mat lb = lambda * I + b;
  Mat lmb = lambda * I - tau * b;
  Mat lb2 = lambda * I + b * b;
  Eigen::PartialPivLU<Mat> lu_lb(lb), lu_lmb(lmb), lu_lb2(lb2);
  double rc = 1.0 / std::max({op_norm(lu_lb.solve(I)), op_norm(lu_lmb.solve(I)), op_norm(lu_lb2.solve(I))});
  if (!(rc > 0.0) || !std::isfinite(rc)) throw std::runtime_error("resolvent_commutator_identities: singular shift");

  Mat rb = lu_lb.solve(I), rmb = lu_lmb.solve(I), rb2 = lu_lb2.solve(I);
  ResolventIdentityReport rep{};

  Mat lhs = rb * a;
  Mat rhs = a * rmb - rb * graded_commutator(b, a, tau) * rmb;
  rep.shift_through = op_norm(lhs - rhs);

  Mat cm = commutator(rb2, a);
  Mat cmi = commutator(a, b);
  rep.square_minus = op_norm(cm - (rb2 * b * cmi * rb2 + rb2 * cmi * b * rb2));

  Mat cpl = anticommutator(a, b);
  rep.square_plus = op_norm(cm - (-rb2 * b * cpl * rb2 + rb2 * cpl * b * rb2));

  double na = op_norm(a), nb = op_norm(b);
  double nr = std::max({op_norm(rb), op_norm(rmb), op_norm(rb2)});
  rep.scale = std::max(1.0, na * std::max(1.0, nb) * nr * nr);
  return rep;
}

Mat sigma1() {
  Mat s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

Mat sigma2() {
  Mat s(2, 2);
  s << 0, cplx(0, 1), cplx(0, -1), 0;
  return s;
}

Mat sigma3() {
  Mat s(2, 2);
  s << 1, 0, 0, -1;
  return s;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat matrix_sqrt_psd(const Mat& a, int iters) {
  // Denman-Beavers: X -> (X + Y^{-1})/2, Y -> (Y + X^{-1})/2; X -> sqrt(A)
  const Eigen::Index n = a.rows();
  Mat I = Mat::Identity(n, n);
  double na = op_norm(a);
  if (na == 0.0) return Mat::Zero(n, n);
  Mat x = a / na, y = I;  // scale to unit norm, undo at the end
  x += 1e-300 * I;
  for (int it = 0; it < iters; ++it) {
    Mat xi = Eigen::PartialPivLU<Mat>(x).solve(I);
    Mat yi = Eigen::PartialPivLU<Mat>(y).solve(I);
    Mat xn = 0.5 * (x + yi);
    Mat yn = 0.5 * (y + xi);
    if (op_norm(xn - x) <= 1e-15 * op_norm(xn)) {
      x = xn;
      break;
    }
    x = xn;
    y = yn;
  }
  return std::sqrt(na) * x;
}

}  // namespace waclab
