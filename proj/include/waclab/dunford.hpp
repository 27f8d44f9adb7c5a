#pragma once

#include <vector>

#include "waclab/algebra.hpp"

namespace waclab {

// Closed keyhole traversed counterclockwise, enclosing the positive real axis
// together with a disk of radius r at the origin and excluding the negative
// axis beyond r: inner arc at radius r from theta to 2pi-theta, ray outward at
// -theta, closing arc at r_max, ray inward at +theta. Rays are log-substituted
// Gauss-Legendre; every node keeps distance >= r sin(theta) from [0, inf).
struct ContourSpec {
  double r = 1, theta = 0, r_max = 1;
  std::vector<cplx> z, w;
};
ContourSpec keyhole_contour(double r, double theta, double r_max, int nodes);
// quadrature winding number around a; 1 inside, 0 outside, validates the contour
cplx winding_number(const ContourSpec& c, cplx a);

struct DunfordResult {
  Mat p;            // contour approximant of (S+T+i lambda)^{-1}
  Mat r_mat;        // defect R = (S+T+i lambda) P - 1
  double r_norm = 0;
  double corrected_error = 0;  // |P (1+R)^{-1} - (S+T+i lambda)^{-1}|
  double tail_ratio = 0;       // integrand norm at r_max over its inner-arc max
  int nodes = 0;
  double lambda = 0;
};
// P = (2pi i)^{-1} contour-integral of (z + lambda^2 + S^2)^{-1} (S+T-i lambda) (z - T^2)^{-1};
// lambda real >= 1 keeps the left pole family outside the keyhole
DunfordResult dunford_approximant(const SelfAdjointOp& s, const SelfAdjointOp& t, double lambda,
                                  int nodes = 400);

struct DunfordSweepRow {
  double lambda = 0;
  double r_norm = 0;
  double corrected_resolvent_error = 0;
  int nodes = 0;
};
struct DunfordSweep {
  std::vector<DunfordSweepRow> rows;
  bool any_below_one = false;   // |R| < 1 somewhere, so the Neumann correction applies
  bool corrected_ok = false;    // corrected resolvent matches the direct inverse
  bool refinement_ok = false;   // against a 4x reference, doubling nodes quarters the error
  double tail_ratio = 0;
};
DunfordSweep dunford_sweep(const SelfAdjointOp& s, const SelfAdjointOp& t,
                           const std::vector<double>& lambdas = {10, 100, 1000}, int nodes = 400);

// Sector profile of a (not necessarily normal) operator A: for each grid angle
// theta the sector is all z with |arg z| < pi - theta; M is the sampled sup of
// |lambda| |(A+lambda)^{-1}| over rays at fractions {1, 1/2, 0} of the opening.
// theta is stable when no nonzero eigenvalue of -A lies in the padded sector
// and the sample stays under the cap; the angle estimate is the smallest grid
// theta from which every larger one is stable.
struct SectorSample {
  double theta = 0;
  double m = 0;  // +inf when a sampled resolvent is singular
  bool stable = false;
};
struct SectorialProfile {
  std::vector<SectorSample> angles;
  double phi_hat = 0;  // estimated spectral angle (grid resolution limited)
  double cap = 1e8;
};
SectorialProfile spectral_angle(const Mat& a, int ray_points = 25, double cap = 1e8);

}  // namespace waclab
