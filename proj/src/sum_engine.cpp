#include "waclab/sum_engine.hpp"

#include <cmath>

namespace waclab {

namespace {

constexpr cplx kI{0.0, 1.0};

Mat inverse_or_throw(const Mat& m, const char* what) {
  Eigen::PartialPivLU<Mat> lu(m);
  Mat id = Mat::Identity(m.rows(), m.cols());
  Mat inv = lu.solve(id);
  double check = op_norm(m * inv - id);
  if (!(check <= 1e-8)) throw std::runtime_error(std::string(what) + ": matrix is numerically singular");
  return inv;
}

double lsq_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double n = static_cast<double>(xs.size());
  double sx = pairwise_sum(xs), sy = pairwise_sum(ys);
  std::vector<double> xy(xs.size()), xx(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xy[i] = xs[i] * ys[i];
    xx[i] = xs[i] * xs[i];
  }
  double sxy = pairwise_sum(xy), sxx = pairwise_sum(xx);
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

Mat a_lambda(const Mat& s, const Mat& t, cplx lambda) {
  if (lambda == cplx(0, 0)) throw std::invalid_argument("a_lambda: lambda must be nonzero");
  return s + t + (t * s) / lambda;
}

double factorization_residual(const Mat& s, const Mat& t, cplx lambda) {
  const Eigen::Index n = s.rows();
  Mat id = Mat::Identity(n, n);
  Mat lhs = a_lambda(s, t, lambda) + lambda * id;
  Mat rhs = (t + lambda * id) * (s + lambda * id) / lambda;
  return op_norm(lhs - rhs);
}

BoundSample five_bounds(const SelfAdjointOp& s, const SelfAdjointOp& t,
                        const WacCertificate& cert, cplx lambda, cplx mu) {
  if (std::abs(lambda.real()) > 1e-14 * std::abs(lambda) || std::abs(mu.real()) > 1e-14 * std::abs(mu))
    throw std::invalid_argument("five_bounds: lambda and mu must be purely imaginary");
  if (lambda.imag() * mu.imag() <= 0.0)
    throw std::invalid_argument("five_bounds: lambda and mu must lie on the same imaginary ray");
  if (!(std::abs(lambda) > std::abs(mu)))
    throw std::invalid_argument("five_bounds: requires |lambda| > |mu|");
  const Mat& sm = s.matrix();
  const Mat& tm = t.matrix();
  const Eigen::Index n = sm.rows();
  Mat id = Mat::Identity(n, n);
  Mat ainv = inverse_or_throw(a_lambda(sm, tm, lambda) + mu * id, "five_bounds");

  BoundSample b;
  b.lambda_abs = std::abs(lambda);
  b.mu_abs = std::abs(mu);
  b.inv = b.mu_abs * op_norm(ainv);
  b.s = op_norm(sm * ainv);
  b.t = op_norm(tm * ainv);
  b.ts = op_norm((tm * sm) * ainv) / b.lambda_abs;
  b.comm = op_norm(anticommutator(sm, tm) * ainv);
  b.c_mu = std::sqrt(2.0 * (cert.c0 / (b.mu_abs * b.mu_abs) + cert.c1 + cert.c2));
  const double allow = 1e-8, r2 = std::sqrt(2.0);
  b.worst_excess = std::max({b.inv - r2 - allow, b.s - r2 - allow, b.t - r2 - allow,
                             b.ts - 1.0 - allow, b.comm - b.c_mu - allow});
  b.ok = b.worst_excess <= 0.0;
  return b;
}

Mu0Report mu0_threshold(const SelfAdjointOp& s, const SelfAdjointOp& t,
                        const WacCertificate& cert) {
  Mu0Report rep;
  const char* names[] = {"mu*inv", "s*inv", "t*inv", "ts*inv", "comm*inv"};
  // per candidate 10^e: every grid mu above it and lambda one or two decades up
  for (int e = 0; e <= 6; ++e) {
    bool all_ok = true;
    for (int f = e; f <= 6 && all_ok; ++f) {
      double mu_abs = std::pow(10.0, f);
      for (int g = 1; g <= 2 && all_ok; ++g) {
        BoundSample b = five_bounds(s, t, cert, kI * (mu_abs * std::pow(10.0, g)), kI * mu_abs);
        if (e == 0) rep.samples.push_back(b);
        if (!b.ok) {
          all_ok = false;
          if (b.worst_excess > rep.worst_violation) {
            rep.worst_violation = b.worst_excess;
            double vals[] = {b.inv - std::sqrt(2.0), b.s - std::sqrt(2.0), b.t - std::sqrt(2.0),
                             b.ts - 1.0, b.comm - b.c_mu};
            int wi = 0;
            for (int i = 1; i < 5; ++i)
              if (vals[i] > vals[wi]) wi = i;
            rep.worst_bound = names[wi];
            rep.worst_mu = b.mu_abs;
            rep.worst_lambda = b.lambda_abs;
          }
        }
      }
    }
    if (all_ok) {
      rep.found = true;
      rep.mu0 = std::pow(10.0, e);
      break;
    }
  }
  return rep;
}

ConvergenceReport convergence_sweep(const SelfAdjointOp& s, const SelfAdjointOp& t, cplx mu) {
  const Mat& sm = s.matrix();
  const Mat& tm = t.matrix();
  const Eigen::Index n = sm.rows();
  Mat id = Mat::Identity(n, n);
  Mat sum_inv = inverse_or_throw(sm + tm + mu * id, "convergence_sweep");
  double sum_inv_t = op_norm(sum_inv * tm);

  ConvergenceReport rep;
  rep.mu_abs = std::abs(mu);
  Mat ts = tm * sm;
  rep.ts_zero = op_norm(ts) <= 1e-14 * std::max(1.0, s.norm() * t.norm());
  double floor = 1e-14 * op_norm(sum_inv);

  std::vector<double> lx, ly;
  rep.rate_band_ok = true;
  rep.bound_ok = true;
  double prev_resid = 0.0, prev_lam = 0.0;
  for (int g = 1; g <= 6; ++g) {
    cplx lambda = mu * std::pow(10.0, g);
    Mat ainv = inverse_or_throw(a_lambda(sm, tm, lambda) + mu * id, "convergence_sweep");
    ConvergenceRow row;
    row.lambda_abs = std::abs(lambda);
    row.inv_norm = op_norm(ainv);
    row.s_norm = op_norm(sm * ainv);
    row.t_norm = op_norm(tm * ainv);
    row.ts_norm = op_norm(ts * ainv) / row.lambda_abs;
    row.comm_norm = op_norm(anticommutator(sm, tm) * ainv);
    row.residual = op_norm(ainv - sum_inv);

    double bound = sum_inv_t * op_norm(sm * ainv) / row.lambda_abs;
    double excess = row.residual - bound * (1.0 + 1e-9) - floor;
    rep.bound_excess = std::max(rep.bound_excess, excess);
    if (excess > 0) rep.bound_ok = false;

    Mat ident = (sm + tm + mu * id) * ainv - id + (ts * ainv) / lambda;
    rep.identity_residual = std::max(rep.identity_residual, op_norm(ident));

    if (!rep.ts_zero && row.residual > floor) {
      lx.push_back(std::log10(row.lambda_abs));
      ly.push_back(std::log10(row.residual));
      if (prev_resid > floor && prev_lam > 0)
        if (row.residual > 1.2 * prev_resid * (prev_lam / row.lambda_abs) + floor)
          rep.rate_band_ok = false;
      prev_resid = row.residual;
      prev_lam = row.lambda_abs;
    }
    rep.rows.push_back(row);
  }
  if (lx.size() >= 2) rep.slope = lsq_slope(lx, ly);
  double r1 = rep.rows.front().residual, r6 = rep.rows.back().residual;
  rep.drop_ratio = r1 > 0 ? r6 / r1 : 0.0;
  return rep;
}

SmoothingReport smoothing_check(const SelfAdjointOp& s, const SelfAdjointOp& t, const Mat& x) {
  SmoothingReport rep;
  std::vector<double> l0, ls, lx0, lxs;
  for (int g = 1; g <= 5; ++g) {
    double la = std::pow(10.0, g);
    cplx lambda = kI * la;
    Mat xl = (lambda * lambda) * (t.resolvent(lambda) * (s.resolvent(lambda) * x));
    Mat d = xl - x;
    rep.lambda_abs.push_back(la);
    rep.err0.push_back(op_norm(d));
    rep.err_s.push_back(op_norm(s.matrix() * d));
    rep.err_t.push_back(op_norm(t.matrix() * d));
    if (rep.err0.back() > 0) {
      lx0.push_back(std::log10(la));
      l0.push_back(std::log10(rep.err0.back()));
    }
    if (rep.err_s.back() > 0) {
      lxs.push_back(std::log10(la));
      ls.push_back(std::log10(rep.err_s.back()));
    }
  }
  if (l0.size() >= 2) rep.slope0 = lsq_slope(lx0, l0);
  if (ls.size() >= 2) rep.slope_s = lsq_slope(lxs, ls);
  return rep;
}

}  // namespace waclab
