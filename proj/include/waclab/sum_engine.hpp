#pragma once

#include <string>
#include <vector>

#include "waclab/certify.hpp"

namespace waclab {

// regularized sum A_l = S + T + TS/l; for imaginary l it approximates S+T
// with resolvent error O(1/|l|)
Mat a_lambda(const Mat& s, const Mat& t, cplx lambda);

// |A_l + l - (T+l)(S+l)/l| : the factorization behind every bound here
double factorization_residual(const Mat& s, const Mat& t, cplx lambda);

// the five uniform resolvent bounds at (lambda, mu), both purely imaginary,
// same sign, |lambda| > |mu|; c_mu = sqrt(2(c0/|mu|^2 + c1 + c2))
struct BoundSample {
  double lambda_abs = 0, mu_abs = 0;
  double inv = 0;    // |mu| |(A_l+mu)^{-1}|        <= sqrt(2)
  double s = 0;      // |S (A_l+mu)^{-1}|           <= sqrt(2)
  double t = 0;      // |T (A_l+mu)^{-1}|           <= sqrt(2)
  double ts = 0;     // |(TS/l)(A_l+mu)^{-1}|       <= 1
  double comm = 0;   // |(ST+TS)(A_l+mu)^{-1}|      <= c_mu
  double c_mu = 0;
  double worst_excess = 0;  // max over the five, after the +1e-8 allowance
  bool ok = false;
};
BoundSample five_bounds(const SelfAdjointOp& s, const SelfAdjointOp& t,
                        const WacCertificate& cert, cplx lambda, cplx mu);

struct Mu0Report {
  bool found = false;
  double mu0 = 0;            // smallest 10^e (e = 0..6) from which every larger grid
                             // mu and every lambda = 10^{1,2} mu satisfies all bounds
                             // (grid estimate, not a certified minimum)
  double worst_violation = 0;
  std::string worst_bound;
  double worst_mu = 0, worst_lambda = 0;
  std::vector<BoundSample> samples;
};
Mu0Report mu0_threshold(const SelfAdjointOp& s, const SelfAdjointOp& t,
                        const WacCertificate& cert);

struct ConvergenceRow {
  double lambda_abs = 0;
  double inv_norm = 0;   // |(A_l+mu)^{-1}|
  double s_norm = 0;     // |S (A_l+mu)^{-1}|
  double t_norm = 0;     // |T (A_l+mu)^{-1}|
  double ts_norm = 0;    // |(TS/l)(A_l+mu)^{-1}|
  double comm_norm = 0;  // |(ST+TS)(A_l+mu)^{-1}|
  double residual = 0;   // |(A_l+mu)^{-1} - (S+T+mu)^{-1}|, direct subtraction
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;   // |lambda| = |mu| 10^g, g = 1..6
  double mu_abs = 0;
  bool ts_zero = false;      // TS = 0 makes A_l exact; residuals at roundoff
  double slope = 0;          // log10 residual vs log10 |lambda| least-squares slope
  double drop_ratio = 0;     // residual(1e6|mu|) / residual(10|mu|)
  double bound_excess = 0;   // worst residual minus its factorized bound
  bool bound_ok = false;     // residual <= |(S+T+mu)^{-1}T| |S(A_l+mu)^{-1}| / |l| each row
  double identity_residual = 0;  // |(S+T+mu)(A_l+mu)^{-1} - I + (TS/l)(A_l+mu)^{-1}|, worst
  bool rate_band_ok = false;     // residual(l2) <= 1.2 (l1/l2) residual(l1), decade pairs
};
ConvergenceReport convergence_sweep(const SelfAdjointOp& s, const SelfAdjointOp& t, cplx mu);

struct SmoothingReport {
  std::vector<double> lambda_abs;  // 10^g, g = 1..5
  std::vector<double> err0;        // |x_l - x|
  std::vector<double> err_s;       // |S(x_l - x)|
  std::vector<double> err_t;       // |T(x_l - x)|
  double slope0 = 0, slope_s = 0;  // both approach -1
};
// x_l = l^2 (T+l)^{-1} (S+l)^{-1} x
SmoothingReport smoothing_check(const SelfAdjointOp& s, const SelfAdjointOp& t, const Mat& x);

}  // namespace waclab
