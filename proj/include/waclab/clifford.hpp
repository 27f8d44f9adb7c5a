#pragma once

#include "waclab/certify.hpp"

namespace waclab {

// doubled module E (+) E with the rank-2 Clifford action on the 2x2 block slot
Mat doubled(const Mat& x);                    // I2 (x) X, commutes with the action
Mat sigma_action(int i, Eigen::Index m);      // sigma_i (x) I_m, i in {1,2,3}
Mat sigma_of(int i);

// Transformed pair (S sigma_i, T sigma_j), i != j. The transform swaps the
// commutation sign: [S si, T sj]_tau = [S,T]_{-tau} si sj, so an anticommuting
// certificate of (S,T) is a commuting one of (s_i, t_j) with equal constants.
struct CliffordPair {
  Mat s_hat, t_hat;  // lifts I2 (x) S, I2 (x) T
  Mat s_i, t_j;      // sigma_i (x) S, sigma_j (x) T, both self-adjoint
  int i = 1, j = 2;
  int parity = -1;   // sign carried onto the commutation relation
};
CliffordPair make_clifford_pair(const SelfAdjointOp& s, const SelfAdjointOp& t, int i = 1,
                                int j = 2);

// |[lift, action]| summed over the three generators; exactly 0 by construction
double lift_commutation_residual(const CliffordPair& p);
// |(S sigma_i)^2 - lift(S^2)|
double square_residual(const CliffordPair& p);
// |[S si, T sj]_tau - (lift [S,T]_{-tau}) si sj| for tau = +-1
double sign_swap_residual(const SelfAdjointOp& s, const SelfAdjointOp& t, int i, int j, double tau);
// both resolvent forms of (S sigma_i + lambda)^{-1} = (S sigma_i - lambda)(S^2 - lambda^2)^{-1}
double resolvent_form_residual(const SelfAdjointOp& s, int i, cplx lambda);

// block identities of the anti-diagonal doubling:
//   S s3 + T = diag(S+T, T-S)
double sum_block_residual(const SelfAdjointOp& s, const SelfAdjointOp& t);
//   [S s3 +- T, S s1]_+ = +-(ST+TS) s1
double anticommutator_block_residual(const SelfAdjointOp& s, const SelfAdjointOp& t, double pm);

struct TransferReport {
  WacCertificate original;     // certify(S, T, anticommuting)
  WacCertificate transformed;  // certify(S s1, T s2, commuting)
  double rel_diff = 0;         // worst relative difference over (c0, c1, c2)
};
TransferReport transfer_check(const SelfAdjointOp& s, const SelfAdjointOp& t);

// Applying the transform twice decomposes, in a Bell-type basis, into the four
// sign pairs (aS, bT); spectra are compared as sorted multisets. For pairs
// conjugate to all their sign flips (the s1/s2 tensor construction) the doubled
// spectra match four copies of the original exactly.
struct ParityReport {
  bool block_decomposition_ok = false;  // spectra of double transform = union over signs
  bool sign_conjugate_match = false;    // spectra = 4x original (sigma-structured input)
  double worst_gap = 0;
};
ParityReport parity_involution_check(const SelfAdjointOp& s, const SelfAdjointOp& t,
                                     bool expect_sign_conjugate);

}  // namespace waclab
