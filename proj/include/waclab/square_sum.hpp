#pragma once

#include "waclab/certify.hpp"

namespace waclab {

// |(S+T)^2 - S^2 - T^2 - (ST+TS)| : exact algebra, roundoff only
double square_expansion_residual(const SelfAdjointOp& s, const SelfAdjointOp& t);

// domination of the defect by the sum: K*K <= c_comb (1 + D^2) with
// c_comb = max(c0,c1,c2) * graph_norm_constant, D = S+T, and the linear
// consequence +-K <= (c_comb(1+D^2)+1)/2
struct DominationReport {
  double c_comb = 0;
  double slack_sq = 0;     // lambda_min(c_comb(1+D^2) - K*K)
  double slack_plus = 0;   // lambda_min((c_comb(1+D^2)+1)/2 - K)
  double slack_minus = 0;  // lambda_min((c_comb(1+D^2)+1)/2 + K)
  double spec_lo = 0;      // spectrum(S^2+T^2) stays in [0, |S|^2+|T|^2]
  double spec_hi = 0;
  double spec_bound = 0;
  double domain_constant = 0;   // pencil constant of (1+(S^2+T^2)^2, 1+D^4)
  double adjoint_residual = 0;  // |(S+iT)* - (S-iT)|
  double scale = 1;
  bool ok = false;
};
DominationReport square_sum_domination(const SelfAdjointOp& s, const SelfAdjointOp& t,
                                       const WacCertificate& cert, double tol = 1e-8);

// interpolation family P_z = (1+|D|)^{-z} K (1+|D|)^{z-1}; the norm is
// maximal on the boundary z = 0, and P_1 = P_0^*
struct InterpolationReport {
  double p0_norm = 0;
  double worst_norm = 0;
  double worst_excess = 0;  // max over the z grid of |P_z| - |P_0|(1+1e-10)
  double adjoint_gap = 0;   // |P_1 - P_0^*|
  bool ok = false;
};
InterpolationReport interpolation_check(const SelfAdjointOp& s, const SelfAdjointOp& t);
// |K (1 + |D|)^{-1}| alone (the z = 0 endpoint)
double interpolation_p0_norm(const SelfAdjointOp& s, const SelfAdjointOp& t);

// relative-bound constant: smallest C with |Kx| <= C|x| + eps|D^2 x|,
// certified through the sufficient condition (C + eps D^2)^2 >= K^2 (bisected),
// with a Monte-Carlo witness as the falsification column
struct KatoRow {
  double epsilon = 0;
  double c_certified = 0;
  double c_montecarlo = 0;
};
struct KatoReport {
  std::vector<KatoRow> rows;
  bool monotone = false;  // c_certified nonincreasing in epsilon
  bool mc_below = false;  // witness never exceeds the certified constant
};
KatoReport kato_rellich(const SelfAdjointOp& s, const SelfAdjointOp& t,
                        const std::vector<double>& eps_grid = {1e-3, 1e-2, 1e-1, 1.0},
                        int mc_vectors = 1000, std::uint64_t seed = 1234);

// pairwise certificates propagate to the pair (S1+S2, S3):
//   m  = 2 max(a1, b1)
//   c0 = 2(a0+b0) + m (Cg - 1),  c1 = m Cg,  c2 = 2(a2+b2)
// where a = cert(S1,S3), b = cert(S2,S3), Cg = graph-norm constant of (S1,S2)
struct TripleReport {
  WacCertificate pair_13, pair_23, direct;
  double c_g = 1;
  double c0_prop = 0, c1_prop = 0, c2_prop = 0;
  double propagated_slack = 0;      // certificate inequality for (S1+S2, S3)
  double propagated_objective = 0;
  double direct_objective = 0;
  double triple_domain_constant = 0;  // pencil (1+S1^2+S2^2+S3^2, 1+(S1+S2+S3)^2)
  double scale = 1;
  bool ok = false;
};
TripleReport triple_certify(const SelfAdjointOp& s1, const SelfAdjointOp& s2,
                            const SelfAdjointOp& s3, double tol = 1e-8);

}  // namespace waclab
