#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "waclab/algebra.hpp"

namespace waclab {

enum class Construction { clifford_tensor, perturbed_exact, user_matrix };

std::string construction_name(Construction c);
std::optional<Construction> construction_from_name(const std::string& s);

struct GeneratorSpec {
  int n = 2;                          // module rank
  int k = 1;                          // coefficient algebra dimension
  double spectral_scale = 0.0;        // spectra log-uniform in [1, 10^s]
  double anticommutator_target = 0.0; // |ST+TS| calibrated to this value
  Construction construction = Construction::clifford_tensor;
  std::uint64_t seed = 1;
};

struct GeneratedPair {
  SelfAdjointOp s;
  SelfAdjointOp t;
  ModuleShape shape;
  std::string construction;
  std::uint64_t seed = 0;
  std::optional<Mat> grading;  // present when both operators are odd for it
};

// complex Gaussian entries, one rng counter pair per entry
Mat random_gaussian(CounterRng& rng, int rows, int cols);
Mat random_hermitian(CounterRng& rng, int n, double scale = 1.0);
// Haar-like unitary: QR of a Gaussian with the R-diagonal phase fixed
Mat random_unitary(CounterRng& rng, int n);
// hermitian with eigenvalues log-uniform in [1,10^s], random signs
Mat hermitian_with_spectrum(CounterRng& rng, int n, double s);
ModuleVector random_vector(CounterRng& rng, const ModuleShape& shape);

// Generated pairs are hermitized by construction; the anticommutator norm is
// calibrated exactly (K = eta * [S, P]_+ for a fixed direction P):
//   clifford_tensor:  S = s1 (x) A, T = s2 (x) (Q + eta P), [A,Q] = 0
//   perturbed_exact:  S = s1 (x) R, T = s2 (x) Q + eta (s1 (x) P1 + s2 (x) P2)
// Both carry the grading s3 (x) I. Throws when the target is infeasible for
// the dimensions (no anticommuting direction available).
GeneratedPair gen_pair(const GeneratorSpec& spec);

// wraps externally supplied matrices (shape (n,k), hermitized within tol)
GeneratedPair pair_from_matrices(const Mat& s, const Mat& t, const ModuleShape& shape,
                                 double tol = 1e-10);

// FNV-1a over the little-endian bytes of re/im entries of S then T
std::uint64_t pair_hash(const Mat& s, const Mat& t);

}  // namespace waclab
