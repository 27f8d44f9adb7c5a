#include "waclab/generator.hpp"

#include <cmath>

namespace waclab {

std::string construction_name(Construction c) {
  switch (c) {
    case Construction::clifford_tensor: return "clifford_tensor";
    case Construction::perturbed_exact: return "perturbed_exact";
    case Construction::user_matrix: return "user_matrix";
  }
  return "?";
}

std::optional<Construction> construction_from_name(const std::string& s) {
  if (s == "clifford_tensor") return Construction::clifford_tensor;
  if (s == "perturbed_exact") return Construction::perturbed_exact;
  if (s == "user_matrix") return Construction::user_matrix;
  return std::nullopt;
}

Mat random_gaussian(CounterRng& rng, int rows, int cols) {
  Mat g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = rng.cnormal();
  return g;
}

Mat random_hermitian(CounterRng& rng, int n, double scale) {
  Mat g = random_gaussian(rng, n, n);
  return scale * hermitian_part(g);
}

Mat random_unitary(CounterRng& rng, int n) {
  Mat g = random_gaussian(rng, n, n);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    cplx d = r(i, i);
    q.col(i) *= std::abs(d) > 0 ? d / std::abs(d) : cplx(1, 0);
  }
  return q;
}

Mat hermitian_with_spectrum(CounterRng& rng, int n, double s) {
  RVec d(n);
  for (int i = 0; i < n; ++i) d(i) = std::pow(10.0, rng.uniform(0.0, s)) * rng.sign();
  Mat u = random_unitary(rng, n);
  return hermitian_part(u * d.cast<cplx>().asDiagonal() * u.adjoint());
}

ModuleVector random_vector(CounterRng& rng, const ModuleShape& shape) {
  return {random_gaussian(rng, shape.dim(), shape.k), shape};
}

namespace {

RVec draw_spectrum(CounterRng& rng, int n, double s) {
  RVec d(n);
  for (int i = 0; i < n; ++i) d(i) = std::pow(10.0, rng.uniform(0.0, s)) * rng.sign();
  return d;
}

double calibration(double target, const Mat& direction_bracket) {
  if (target == 0.0) return 0.0;
  double c = op_norm(direction_bracket);
  if (c <= 1e-12 * std::max(1.0, target))
    throw std::runtime_error("gen_pair: anticommutator target infeasible for these dimensions");
  return target / c;
}

}  // namespace

GeneratedPair gen_pair(const GeneratorSpec& spec) {
  ModuleShape shape{spec.n, spec.k};
  if (shape.dim() < 2 || shape.dim() % 2 != 0)
    throw std::runtime_error("gen_pair: module dimension n*k must be even and >= 2");
  if (spec.construction == Construction::user_matrix)
    throw std::runtime_error("gen_pair: user_matrix requires explicit matrices");
  const int m = shape.dim() / 2;
  CounterRng rng(spec.seed);
  Mat u = random_unitary(rng, m);
  RVec da = draw_spectrum(rng, m, spec.spectral_scale);
  RVec dq = draw_spectrum(rng, m, spec.spectral_scale);
  Mat a = hermitian_part(u * da.cast<cplx>().asDiagonal() * u.adjoint());
  Mat q = hermitian_part(u * dq.cast<cplx>().asDiagonal() * u.adjoint());

  Mat s_mat, t_mat;
  if (spec.construction == Construction::clifford_tensor) {
    Mat p = random_hermitian(rng, m);
    double eta = calibration(spec.anticommutator_target, commutator(a, p));
    s_mat = kron(sigma1(), a);
    t_mat = kron(sigma2(), q + eta * p);
  } else {
    Mat p1 = random_hermitian(rng, m);
    Mat p2 = random_hermitian(rng, m);
    Mat s0 = kron(sigma1(), a);
    Mat p = kron(sigma1(), p1) + kron(sigma2(), p2);
    double eta = calibration(spec.anticommutator_target, anticommutator(s0, p));
    s_mat = s0;
    t_mat = kron(sigma2(), q) + eta * p;
  }
  GeneratedPair out{SelfAdjointOp(s_mat), SelfAdjointOp(t_mat), shape,
                    construction_name(spec.construction), spec.seed,
                    kron(sigma3(), Mat::Identity(m, m))};
  return out;
}

GeneratedPair pair_from_matrices(const Mat& s, const Mat& t, const ModuleShape& shape, double tol) {
  if (s.rows() != shape.dim() || s.cols() != shape.dim() || t.rows() != shape.dim() || t.cols() != shape.dim())
    throw std::invalid_argument("pair_from_matrices: matrices do not match shape");
  return {SelfAdjointOp(s, tol), SelfAdjointOp(t, tol), shape,
          construction_name(Construction::user_matrix), 0, std::nullopt};
}

std::uint64_t pair_hash(const Mat& s, const Mat& t) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto feed = [&](const Mat& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        double re = m(i, j).real(), im = m(i, j).imag();
        h = hash_doubles(&re, 1, h);
        h = hash_doubles(&im, 1, h);
      }
  };
  feed(s);
  feed(t);
  return h;
}

}  // namespace waclab
