#include "waclab/certify.hpp"

#include <cmath>

namespace waclab {

std::string pair_sign_name(PairSign s) {
  return s == PairSign::anticommuting ? "anticommuting" : "commuting";
}

namespace {

constexpr cplx kI{0.0, 1.0};

struct Objective {
  const Mat* ktk;
  const Mat* s2;
  const Mat* t2;
  double w0, w1, w2;

  double c0_min(double c1, double c2) const {
    Mat m = *ktk - c1 * *s2 - c2 * *t2;
    return std::max(0.0, max_eig_herm(m));
  }
  double value(double c1, double c2) const { return w0 * c0_min(c1, c2) + w1 * c1 + w2 * c2; }
};

// grid [0] + scale * 10^{-6..2}, 33 log points; empty scale collapses to {0}
std::vector<double> coeff_grid(double scale) {
  std::vector<double> g{0.0};
  if (!(scale > 0.0) || !std::isfinite(scale)) return g;
  for (double v : logspace(-6.0, 2.0, 33)) g.push_back(scale * v);
  return g;
}

// golden-section refinement of a convex slice; returns the argmin
double golden(const std::function<double(double)>& f, double lo, double hi, int iters = 80) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

// one coordinate pass: grid scan then golden refinement around the best cell
double optimize_coord(const std::function<double(double)>& f, const std::vector<double>& grid,
                      double current, double fbest) {
  double best = current, fb = fbest;
  std::size_t besti = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double fv = f(grid[i]);
    if (fv < fb - 1e-14 * std::max(1.0, fb)) {
      fb = fv;
      best = grid[i];
      besti = i;
    }
  }
  if (besti < grid.size() && grid.size() > 1) {
    double lo = besti > 0 ? grid[besti - 1] : grid[besti];
    double hi = besti + 1 < grid.size() ? grid[besti + 1] : grid[besti];
    if (hi > lo) {
      double cand = golden(f, lo, hi);
      double fc = f(cand);
      if (fc < fb - 1e-14 * std::max(1.0, fb)) {
        fb = fc;
        best = cand;
      }
    }
  }
  return best;
}

double certificate_scale(const Mat& ktk, const Mat& s2, const Mat& t2, const WacCertificate& c) {
  return std::max({1.0, op_norm(ktk), c.c0 + c.c1 * op_norm(s2) + c.c2 * op_norm(t2)});
}

// C(l,m) = sqrt(max(c0/|l|^2 + c1, c2)) dominates the shifted quadratic form
double sector_constant(const WacCertificate& c, double la, double mu) {
  (void)mu;
  return std::sqrt(std::max(c.c0 / (la * la) + c.c1, c.c2));
}

}  // namespace

WacCertificate certify_wac(const SelfAdjointOp& s, const SelfAdjointOp& t, PairSign sign,
                           const CertifyOptions& opt) {
  const Mat& sm = s.matrix();
  const Mat& tm = t.matrix();
  Mat k = graded_commutator(sm, tm, pair_sign_tau(sign));
  Mat ktk = k.adjoint() * k;
  Mat s2 = sm * sm, t2 = tm * tm;
  Objective obj{&ktk, &s2, &t2, opt.w0, opt.w1, opt.w2};

  double nk = op_norm(ktk), ns = op_norm(s2), nt = op_norm(t2);
  std::vector<double> grid1 = coeff_grid(ns > 0 ? nk / ns : 0.0);
  std::vector<double> grid2 = opt.constrain_c2_zero ? std::vector<double>{0.0}
                                                    : coeff_grid(nt > 0 ? nk / nt : 0.0);

  double c1 = 0.0, c2 = 0.0;
  double fbest = obj.value(c1, c2);
  for (int round = 0; round < 6; ++round) {
    double prev = fbest;
    c1 = optimize_coord([&](double x) { return obj.value(x, c2); }, grid1, c1, fbest);
    fbest = obj.value(c1, c2);
    c2 = optimize_coord([&](double x) { return obj.value(c1, x); }, grid2, c2, fbest);
    fbest = obj.value(c1, c2);
    if (fbest >= prev - 1e-14 * std::max(1.0, prev)) break;
  }

  WacCertificate cert;
  cert.sign = sign;
  cert.c1 = c1;
  cert.c2 = c2;
  cert.c0 = obj.c0_min(c1, c2);
  cert.slack = min_eig_herm(cert.c0 * Mat::Identity(ktk.rows(), ktk.cols()) + c1 * s2 + c2 * t2 - ktk);
  cert.objective = format_double(opt.w0) + "*c0+" + format_double(opt.w1) + "*c1+" +
                   format_double(opt.w2) + "*c2";
  cert.objective_value = opt.w0 * cert.c0 + opt.w1 * cert.c1 + opt.w2 * cert.c2;

  // grid estimate of the threshold above which the derived resolvent bounds hold
  cert.lambda0 = -1;
  for (int e = 0; e <= 6; ++e) {
    double la = std::pow(10.0, e);
    double c = sector_constant(cert, la, la);
    Mat rs = s.resolvent(kI * la), rt = t.resolvent(kI * la);
    double bound = c * (2.0 / la) * (1.0 + 1e-9);
    if (op_norm(k * rs * rt) <= bound && op_norm(k * rt * rs) <= bound) {
      cert.lambda0 = la;
      break;
    }
  }
  return cert;
}

VerifyReport verify_certificate(const SelfAdjointOp& s, const SelfAdjointOp& t,
                                const WacCertificate& cert, double tol) {
  const Mat& sm = s.matrix();
  const Mat& tm = t.matrix();
  Mat k = graded_commutator(sm, tm, pair_sign_tau(cert.sign));
  Mat ktk = k.adjoint() * k;
  Mat s2 = sm * sm, t2 = tm * tm;
  const Eigen::Index n = sm.rows();
  Mat id = Mat::Identity(n, n);

  VerifyReport rep;
  rep.scale = certificate_scale(ktk, s2, t2, cert);
  rep.slack = min_eig_herm(cert.c0 * id + cert.c1 * s2 + cert.c2 * t2 - ktk);
  rep.quadratic_ok = rep.slack >= -tol * rep.scale;

  double base = std::max(1.0, std::sqrt(std::max(op_norm(k), 1.0)));
  rep.norm_vs_form_ratio = 1.0;
  bool first = true;
  for (double la : {base, 10.0 * base}) {
    for (double mu : {base, 10.0 * base}) {
      double c = sector_constant(cert, la, mu);
      // quadratic-form constant of K against the shifted pair
      Mat denom = s2 + la * la * id + t2 + mu * mu * id;
      double form = pencil_sup_sqrt(ktk, denom);
      rep.pencil_worst_excess = std::max(rep.pencil_worst_excess, form - c * (1.0 + 1e-9));
      // resolvent-product bounds in both orders
      Mat rs = s.resolvent(kI * la), rt = t.resolvent(kI * mu);
      double bound = c * (1.0 / la + 1.0 / mu);
      double ex1 = op_norm(k * rs * rt) - bound * (1.0 + 1e-9);
      double ex2 = op_norm(k * rt * rs) - bound * (1.0 + 1e-9);
      rep.derived_worst_excess = std::max({rep.derived_worst_excess, ex1, ex2});
      if (first) {
        // norm-form comparison at the first grid point; the two sup constants
        // can differ by at most sqrt(2), equivalence is an open point upstream
        rep.form_constant = form;
        Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(ktk, denom);
        Mat vecs = ges.eigenvectors();
        Eigen::VectorXcd top = vecs.col(vecs.cols() - 1);
        Mat sl = sm + kI * la * id, tl = tm + kI * mu * id;
        double best = 0.0;
        CounterRng rng(7);
        for (int probe = 0; probe < 64; ++probe) {
          Eigen::VectorXcd x(n);
          if (probe == 0)
            x = top;
          else
            for (Eigen::Index i = 0; i < n; ++i) x(i) = rng.cnormal();
          double d = (sl * x).norm() + (tl * x).norm();
          if (d > 0) best = std::max(best, (k * x).norm() / d);
        }
        rep.norm_constant_sampled = best;
        rep.norm_vs_form_ratio = best > 0 ? form / best : 1.0;
        first = false;
      }
    }
  }
  rep.pencil_ok = rep.pencil_worst_excess <= tol * std::max(1.0, rep.form_constant);
  rep.derived_ok = rep.derived_worst_excess <= tol;
  rep.ok = rep.quadratic_ok && rep.pencil_ok && rep.derived_ok;
  return rep;
}

GraphNormReport graph_norm_constant(const SelfAdjointOp& s, const SelfAdjointOp& t) {
  const Mat& sm = s.matrix();
  const Mat& tm = t.matrix();
  const Eigen::Index n = sm.rows();
  Mat id = Mat::Identity(n, n);
  Mat sum = sm + tm;
  Mat lhs = id + sm * sm + tm * tm;
  Mat rhs = id + sum * sum;
  RVec g = pencil_eigenvalues(lhs, rhs);
  GraphNormReport rep;
  rep.pencil_min = g.minCoeff();
  rep.pencil_max = g.maxCoeff();
  rep.c = std::max(rep.pencil_max, 1.0 / rep.pencil_min);
  double scale = std::max(op_norm(lhs), op_norm(rhs));
  rep.slack_upper = min_eig_herm(rep.c * rhs - lhs) / scale;
  rep.slack_lower = min_eig_herm(rep.c * lhs - rhs) / scale;
  rep.easy_slack = min_eig_herm(2.0 * (sm * sm + tm * tm) - sum * sum) / scale;
  return rep;
}

RelativeGapReport relative_gap(const SelfAdjointOp& a, const SelfAdjointOp& b) {
  const Mat& am = a.matrix();
  const Mat& bm = b.matrix();
  Mat d = am - bm;
  Mat denom = am * am + bm * bm;
  RelativeGapReport rep;
  rep.epsilon = pencil_sup_sqrt(d.adjoint() * d, denom);
  Mat binv = b.resolvent(0.0);
  rep.rho = op_norm(d * binv);
  rep.hypothesis_met = rep.epsilon < 1.0 / 3.0;
  if (rep.hypothesis_met) {
    rep.bound = 2.0 * rep.epsilon / (1.0 - rep.epsilon);
    rep.conclusion_ok = rep.rho <= rep.bound * (1.0 + 1e-9);
  }
  return rep;
}

SmallnessReport commuting_smallness(const SelfAdjointOp& s, const SelfAdjointOp& t,
                                    const WacCertificate& cert) {
  Mat k = graded_commutator(s.matrix(), t.matrix(), pair_sign_tau(cert.sign));
  SmallnessReport rep;
  for (int e = 2; e <= 4; ++e) {
    double la = std::pow(10.0, e), mu = la;
    SmallnessSample smp;
    smp.lambda_abs = la;
    smp.mu_abs = mu;
    Mat rs = s.resolvent(kI * la), rt = t.resolvent(kI * mu);
    smp.observed = std::max(op_norm(k * rt * rs), op_norm(k * rs * rt));
    double c = sector_constant(cert, la, mu);
    smp.absorbing = c < std::min(la, mu);
    if (smp.absorbing) {
      smp.predicted = c / (1.0 - c / std::min(la, mu)) * (1.0 / la + 1.0 / mu);
      smp.ok = smp.observed <= smp.predicted * (1.0 + 1e-9);
    } else {
      smp.predicted = std::numeric_limits<double>::infinity();
    }
    rep.samples.push_back(smp);
    rep.ok = rep.ok && smp.ok;
  }
  rep.decays = rep.samples[1].observed <= rep.samples[0].observed * (1.0 + 1e-12);
  return rep;
}

LegacyReport legacy_wac_check(const SelfAdjointOp& s, const SelfAdjointOp& t,
                              const std::vector<double>& lambda_grid) {
  Mat k = anticommutator(s.matrix(), t.matrix());
  LegacyReport rep;
  double la_min = lambda_grid.empty() ? 1.0 : lambda_grid.front();
  for (double la : lambda_grid) {
    la_min = std::min(la_min, la);
    rep.sup_norm = std::max(rep.sup_norm, op_norm(k * s.resolvent(kI * la)));
  }
  rep.c1_implied = rep.sup_norm * rep.sup_norm;
  rep.c0_implied = rep.c1_implied * la_min * la_min;
  CertifyOptions free_opt, con_opt;
  con_opt.constrain_c2_zero = true;
  rep.free_objective = certify_wac(s, t, PairSign::anticommuting, free_opt).objective_value;
  rep.constrained_objective = certify_wac(s, t, PairSign::anticommuting, con_opt).objective_value;
  rep.legacy_holds = rep.constrained_objective <= 10.0 * std::max(rep.free_objective, 1e-300);
  return rep;
}

}  // namespace waclab
