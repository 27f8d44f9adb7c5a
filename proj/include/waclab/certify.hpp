#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "waclab/algebra.hpp"

namespace waclab {

// sign convention of the defect K: anticommuting studies ST+TS, commuting ST-TS
enum class PairSign { anticommuting, commuting };
std::string pair_sign_name(PairSign s);
inline double pair_sign_tau(PairSign s) { return s == PairSign::anticommuting ? +1.0 : -1.0; }

// quadratic domination certificate: K*K <= c0 + c1 S^2 + c2 T^2
struct WacCertificate {
  double c0 = 0, c1 = 0, c2 = 0;
  PairSign sign = PairSign::anticommuting;
  double slack = 0;          // lambda_min(c0 + c1 S^2 + c2 T^2 - K*K), >= 0 up to roundoff
  double lambda0 = -1;       // smallest 10^e (e = 0..6) where the derived resolvent bounds
                             // hold on the grid; -1 when none does (grid estimate, not a minimum)
  std::string objective;     // weighted objective that was minimized
  double objective_value = 0;
};

struct CertifyOptions {
  double w0 = 1, w1 = 1, w2 = 1;   // objective weights for (c0, c1, c2)
  bool constrain_c2_zero = false;  // legacy-style certificates force c2 = 0
};

// Minimizes w0 c0 + w1 c1 + w2 c2 over feasible certificates by coordinate
// descent on (c1, c2) over a log grid plus golden-section refinement; the
// minimal c0 at fixed (c1, c2) is exact: max(0, lambda_max(K*K - c1 S^2 - c2 T^2)).
// Deterministic; a zero defect stays at exactly (0,0,0).
WacCertificate certify_wac(const SelfAdjointOp& s, const SelfAdjointOp& t, PairSign sign,
                           const CertifyOptions& opt = {});

struct VerifyReport {
  double slack = 0;                  // lambda_min of the certificate inequality
  bool quadratic_ok = false;         // slack >= -tol * scale
  double pencil_worst_excess = 0;    // sup-form constant minus its certified bound, worst (lambda,mu)
  bool pencil_ok = false;
  double derived_worst_excess = 0;   // resolvent-product bounds, both orders, worst excess
  bool derived_ok = false;
  double form_constant = 0;          // pencil value sup sqrt(<Kx,Kx>/(|(S+l)x|^2+|(T+m)x|^2))
  double norm_constant_sampled = 0;  // sampled sup |Kx|/(|(S+l)x|+|(T+m)x|) (lower witness)
  double norm_vs_form_ratio = 0;     // the two constants agree up to sqrt(2); reported, not asserted
  bool ok = false;
  double scale = 1;
};

// checks the certificate inequality and the resolvent bounds it implies at
// (lambda, mu) on a small imaginary grid; C(l,m) = sqrt(max(c0/|l|^2+c1, c2))
VerifyReport verify_certificate(const SelfAdjointOp& s, const SelfAdjointOp& t,
                                const WacCertificate& cert, double tol = 1e-10);

struct GraphNormReport {
  double c = 1;            // max(g_max, 1/g_min) of the pencil (1+S^2+T^2, 1+(S+T)^2)
  double pencil_min = 1;
  double pencil_max = 1;
  double slack_upper = 0;  // lambda_min(c(1+(S+T)^2) - (1+S^2+T^2)), >= -tol*scale
  double slack_lower = 0;  // lambda_min(c(1+S^2+T^2) - (1+(S+T)^2)), >= -tol*scale
  double easy_slack = 0;   // lambda_min(2(S^2+T^2) - (S+T)^2), >= -tol*scale always
};
GraphNormReport graph_norm_constant(const SelfAdjointOp& s, const SelfAdjointOp& t);

struct RelativeGapReport {
  double epsilon = 0;        // certified sup |(A-B)x| / sqrt(|Ax|^2+|Bx|^2)
  double rho = 0;            // |(A-B)B^{-1}|
  bool hypothesis_met = false;  // epsilon < 1/3
  double bound = 0;          // 2 eps / (1 - eps) when the hypothesis holds
  bool conclusion_ok = true; // rho <= bound (only asserted when hypothesis_met)
};
RelativeGapReport relative_gap(const SelfAdjointOp& a, const SelfAdjointOp& b);

struct SmallnessSample {
  double lambda_abs = 0, mu_abs = 0;
  double observed = 0;    // max over both resolvent orderings
  double predicted = 0;   // c/(1 - c/min(|l|,|m|)) * (1/|l| + 1/|m|), c = C(l,m)
  bool absorbing = false; // c < min(|l|,|m|), the regime where the bound applies
  bool ok = true;
};
struct SmallnessReport {
  std::vector<SmallnessSample> samples;
  bool decays = false;  // observed value at 10^3 <= value at 10^2
  bool ok = true;
};
// commutator smallness induced by a commuting-sign certificate
SmallnessReport commuting_smallness(const SelfAdjointOp& s, const SelfAdjointOp& t,
                                    const WacCertificate& cert);

struct LegacyReport {
  double sup_norm = 0;     // sup over the lambda grid of |K (S+lambda)^{-1}|
  double c0_implied = 0, c1_implied = 0;  // certificate implied at the smallest grid lambda
  double constrained_objective = 0;       // best objective with c2 forced to 0
  double free_objective = 0;
  bool legacy_holds = false;  // constrained <= 10x free
};
// single-operator domination check; tau = + matches the anticommuting convention
LegacyReport legacy_wac_check(const SelfAdjointOp& s, const SelfAdjointOp& t,
                              const std::vector<double>& lambda_grid = {1, 10, 100, 1000});

}  // namespace waclab
