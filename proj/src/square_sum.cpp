#include "waclab/square_sum.hpp"

#include <cmath>

namespace waclab {

double square_expansion_residual(const SelfAdjointOp& s, const SelfAdjointOp& t) {
  const Mat& sm = s.matrix();
  const Mat& tm = t.matrix();
  Mat d = sm + tm;
  return op_norm(d * d - sm * sm - tm * tm - anticommutator(sm, tm));
}

DominationReport square_sum_domination(const SelfAdjointOp& s, const SelfAdjointOp& t,
                                       const WacCertificate& cert, double tol) {
  const Mat& sm = s.matrix();
  const Mat& tm = t.matrix();
  const Eigen::Index n = sm.rows();
  Mat id = Mat::Identity(n, n);
  Mat k = anticommutator(sm, tm);
  Mat d = sm + tm;
  Mat d2 = d * d;

  GraphNormReport g = graph_norm_constant(s, t);
  DominationReport rep;
  rep.c_comb = std::max({cert.c0, cert.c1, cert.c2}) * g.c;
  Mat dom = rep.c_comb * (id + d2);
  rep.scale = std::max(1.0, op_norm(dom) + op_norm(k * k));
  rep.slack_sq = min_eig_herm(dom - k.adjoint() * k);
  Mat half = 0.5 * (dom + id);
  rep.slack_plus = min_eig_herm(half - k);
  rep.slack_minus = min_eig_herm(half + k);

  Mat sq = sm * sm + tm * tm;
  rep.spec_lo = min_eig_herm(sq);
  rep.spec_hi = max_eig_herm(sq);
  rep.spec_bound = s.norm() * s.norm() + t.norm() * t.norm();

  Mat lhs = id + sq * sq;
  Mat rhs = id + d2 * d2;
  RVec pencil = pencil_eigenvalues(lhs, rhs);
  rep.domain_constant = std::max(pencil.maxCoeff(), 1.0 / pencil.minCoeff());

  Mat spt = sm + cplx(0, 1) * tm;
  rep.adjoint_residual = op_norm(spt.adjoint() - (sm - cplx(0, 1) * tm));

  rep.ok = rep.slack_sq >= -tol * rep.scale && rep.slack_plus >= -tol * rep.scale &&
           rep.slack_minus >= -tol * rep.scale && rep.spec_lo >= -tol * rep.scale &&
           rep.spec_hi <= rep.spec_bound + tol * rep.scale &&
           rep.adjoint_residual <= tol * rep.scale && std::isfinite(rep.domain_constant);
  return rep;
}

namespace {

Mat weight_power(const SelfAdjointOp& d, cplx w) {
  // (1+|x|)^w = exp(w log(1+|x|)) through the cached eigenbasis
  return d.func([&](double x) { return std::exp(w * std::log1p(std::abs(x))); });
}

}  // namespace

double interpolation_p0_norm(const SelfAdjointOp& s, const SelfAdjointOp& t) {
  Mat k = anticommutator(s.matrix(), t.matrix());
  SelfAdjointOp d(s.matrix() + t.matrix());
  return op_norm(k * weight_power(d, -1.0));
}

InterpolationReport interpolation_check(const SelfAdjointOp& s, const SelfAdjointOp& t) {
  Mat k = anticommutator(s.matrix(), t.matrix());
  SelfAdjointOp d(s.matrix() + t.matrix());
  InterpolationReport rep;
  Mat p0 = k * weight_power(d, -1.0);
  rep.p0_norm = op_norm(p0);
  for (double re : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    for (double im : {-5.0, -1.0, 0.0, 1.0, 5.0}) {
      cplx z(re, im);
      Mat pz = weight_power(d, -z) * k * weight_power(d, z - 1.0);
      rep.worst_norm = std::max(rep.worst_norm, op_norm(pz));
    }
  }
  rep.worst_excess = rep.worst_norm - rep.p0_norm * (1.0 + 1e-10);
  Mat p1 = weight_power(d, -1.0) * k;
  rep.adjoint_gap = op_norm(p1 - p0.adjoint());
  rep.ok = rep.worst_excess <= 0.0 && rep.adjoint_gap <= 1e-12 * std::max(1.0, rep.p0_norm);
  return rep;
}

KatoReport kato_rellich(const SelfAdjointOp& s, const SelfAdjointOp& t,
                        const std::vector<double>& eps_grid, int mc_vectors, std::uint64_t seed) {
  const Mat& sm = s.matrix();
  const Mat& tm = t.matrix();
  const Eigen::Index n = sm.rows();
  Mat id = Mat::Identity(n, n);
  Mat k = anticommutator(sm, tm);
  Mat k2 = k * k;
  Mat d = sm + tm;
  Mat d2 = d * d;
  double nk = op_norm(k);

  KatoReport rep;
  rep.monotone = true;
  rep.mc_below = true;
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : eps_grid) {
    auto feasible = [&](double c) {
      Mat m = c * id + eps * d2;
      return min_eig_herm(m * m - k2) >= 0.0;
    };
    KatoRow row;
    row.epsilon = eps;
    double lo = 0.0, hi = nk + 1e-9;
    if (feasible(lo)) {
      row.c_certified = 0.0;
    } else {
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
      }
      row.c_certified = hi;
    }
    CounterRng rng(seed);
    double witness = 0.0;
    for (int v = 0; v < mc_vectors; ++v) {
      Eigen::VectorXcd x(n);
      for (Eigen::Index i = 0; i < n; ++i) x(i) = rng.cnormal();
      x.normalize();
      witness = std::max(witness, (k * x).norm() - eps * (d2 * x).norm());
    }
    row.c_montecarlo = std::max(0.0, witness);
    rep.monotone = rep.monotone && row.c_certified <= prev + 1e-12 * std::max(1.0, prev);
    rep.mc_below = rep.mc_below && row.c_montecarlo <= row.c_certified + 1e-9 * std::max(1.0, nk);
    prev = row.c_certified;
    rep.rows.push_back(row);
  }
  return rep;
}

TripleReport triple_certify(const SelfAdjointOp& s1, const SelfAdjointOp& s2,
                            const SelfAdjointOp& s3, double tol) {
  TripleReport rep;
  rep.pair_13 = certify_wac(s1, s3, PairSign::anticommuting);
  rep.pair_23 = certify_wac(s2, s3, PairSign::anticommuting);
  GraphNormReport g = graph_norm_constant(s1, s2);
  rep.c_g = g.c;
  double m = 2.0 * std::max(rep.pair_13.c1, rep.pair_23.c1);
  rep.c0_prop = 2.0 * (rep.pair_13.c0 + rep.pair_23.c0) + m * (rep.c_g - 1.0);
  rep.c1_prop = m * rep.c_g;
  rep.c2_prop = 2.0 * (rep.pair_13.c2 + rep.pair_23.c2);

  Mat s12 = s1.matrix() + s2.matrix();
  const Mat& s3m = s3.matrix();
  const Eigen::Index n = s12.rows();
  Mat id = Mat::Identity(n, n);
  Mat k = anticommutator(s12, s3m);
  Mat dom = rep.c0_prop * id + rep.c1_prop * (s12 * s12) + rep.c2_prop * (s3m * s3m);
  rep.scale = std::max(1.0, op_norm(dom) + op_norm(k.adjoint() * k));
  rep.propagated_slack = min_eig_herm(dom - k.adjoint() * k);
  rep.propagated_objective = rep.c0_prop + rep.c1_prop + rep.c2_prop;

  SelfAdjointOp sum12(s12);
  rep.direct = certify_wac(sum12, s3, PairSign::anticommuting);
  rep.direct_objective = rep.direct.objective_value;

  Mat tri = s12 + s3m;
  Mat lhs = id + s1.matrix() * s1.matrix() + s2.matrix() * s2.matrix() + s3m * s3m;
  Mat rhs = id + tri * tri;
  RVec pencil = pencil_eigenvalues(lhs, rhs);
  rep.triple_domain_constant = std::max(pencil.maxCoeff(), 1.0 / pencil.minCoeff());

  rep.ok = rep.propagated_slack >= -tol * rep.scale &&
           rep.direct_objective <= rep.propagated_objective * (1.0 + 1e-9) + 1e-12 &&
           std::isfinite(rep.triple_domain_constant);
  return rep;
}

}  // namespace waclab
