#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>

#include "waclab/numeric.hpp"

namespace waclab {

using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

// Module shape: E = B^n over B = M_k(C); vectors are (n*k) x k matrices,
// operators act on the left as (n*k) x (n*k) matrices.
struct ModuleShape {
  int n = 1;
  int k = 1;
  int dim() const { return n * k; }
  bool operator==(const ModuleShape&) const = default;
};

struct ModuleVector {
  Mat m;  // (n*k) x k
  ModuleShape shape;
};

// operator 2-norm, sqrt of the largest eigenvalue of A*A
double op_norm(const Mat& a);

Mat hermitian_part(const Mat& a);

// smallest eigenvalue of a hermitian matrix (eigenvalues-only solve)
double min_eig_herm(const Mat& a);
double max_eig_herm(const Mat& a);

// positivity in the C*-algebra: hermitian within tol and lambda_min >= -tol*|a|
bool is_positive(const Mat& a, double tol = 1e-10);

// eigenvalues of the pencil A x = g B x for hermitian A and positive definite B
RVec pencil_eigenvalues(const Mat& a, const Mat& b);
// sqrt(lambda_max(A, B)): certifies sup_x sqrt(<x,Ax>/<x,Bx>)
double pencil_sup_sqrt(const Mat& a, const Mat& b);

// <x,y> = x* y in B = M_k(C)
Mat inner_product(const ModuleVector& x, const ModuleVector& y);

// [a,b]_tau = ab + tau*ba with tau in {+1,-1}
Mat graded_commutator(const Mat& a, const Mat& b, double tau);
inline Mat commutator(const Mat& a, const Mat& b) { return graded_commutator(a, b, -1.0); }
inline Mat anticommutator(const Mat& a, const Mat& b) { return graded_commutator(a, b, +1.0); }

// Self-adjoint operator with its eigendecomposition computed once and cached.
// Construction symmetrizes (A+A*)/2 when |A-A*| <= tol*|A| and rejects larger
// asymmetry; all instances are immutable and safe to share across threads.
class SelfAdjointOp {
 public:
  explicit SelfAdjointOp(const Mat& a, double tol = 1e-10);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Mat& matrix() const { return mat_; }
  const RVec& eigenvalues() const { return evals_; }
  const Mat& eigenvectors() const { return evecs_; }
  double norm() const { return norm_; }

  // U diag(f(d)) U*
  Mat func(const std::function<cplx(double)>& f) const;
  Mat real_func(const std::function<double(double)>& f) const;

  // (A + lambda)^{-1}; rejects lambda within 1e-14*scale of -spectrum
  Mat resolvent(cplx lambda) const;
  double resolvent_norm(cplx lambda) const;

  // -A sharing the cached eigenbasis
  SelfAdjointOp negated() const;
  // t*A sharing the cached eigenbasis
  SelfAdjointOp scaled(double t) const;

  static SelfAdjointOp from_eigen(const Mat& evecs, const RVec& evals);

 private:
  SelfAdjointOp() = default;
  Mat mat_;
  Mat evecs_;
  RVec evals_;
  double norm_ = 0.0;
};

// residuals of the three resolvent commutation identities, one tau sign
struct ResolventIdentityReport {
  double shift_through;   // (l+b)^{-1}a vs a(l-tau b)^{-1} minus the commutator correction
  double square_minus;    // [(l+b^2)^{-1},a] via b[a,b]- + [a,b]- b
  double square_plus;     // [(l+b^2)^{-1},a] via -b[a,b]+ + [a,b]+ b
  double scale;           // product-of-norms scale the residuals compare against
};
ResolventIdentityReport resolvent_commutator_identities(const Mat& a, const Mat& b, cplx lambda,
                                                        double tau);

// 2x2 generators with s1 s2 = -i s3, s3 = diag(1,-1)
Mat sigma1();
Mat sigma2();
Mat sigma3();
Mat kron(const Mat& a, const Mat& b);

// PSD square root by coupled Newton iteration; eigensolver-free cross-check oracle
Mat matrix_sqrt_psd(const Mat& a, int iters = 60);

}  // namespace waclab
