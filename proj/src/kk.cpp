#include "waclab/kk.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "waclab/clifford.hpp"

namespace waclab {

namespace {

constexpr double kPi = std::numbers::pi;

// composite Gauss-Legendre on [0,1]; when the operator norm exceeds 4 the
// integrand's pole at i/|D| crowds the origin, so the panel splits at 4/|D|
Quadrature unit_quadrature(int n, double norm) {
  if (n < 2) n = 2;
  if (!(norm > 4.0)) return gauss_legendre(n, 0.0, 1.0);
  double b = 4.0 / norm;
  int half = std::max(n / 2, 4);
  Quadrature lo = gauss_legendre(half, 0.0, b);
  Quadrature hi = gauss_legendre(half, b, 1.0);
  lo.x.insert(lo.x.end(), hi.x.begin(), hi.x.end());
  lo.w.insert(lo.w.end(), hi.w.begin(), hi.w.end());
  return lo;
}

// weighted pairwise accumulation of quadrature terms
Mat quad_sum(std::vector<Mat>& terms) {
  return terms.empty() ? Mat() : pairwise_sum(terms.data(), terms.size());
}

struct DoubledCtx {
  Mat shat, that, w, bhat;  // lifts, volume element, lifted [S,T]_+
  SelfAdjointOp dp, dm;
  DoubledCtx(const SelfAdjointOp& s, const SelfAdjointOp& t)
      : shat(doubled(s.matrix())),
        that(doubled(t.matrix())),
        w(volume_element(s.dim())),
        bhat(doubled(anticommutator(s.matrix(), t.matrix()))),
        dp(d_plus(s.matrix(), t.matrix())),
        dm(d_minus(s.matrix(), t.matrix())) {}
};

Mat resolvent_g(const SelfAdjointOp& d, double mu) {
  return d.real_func([mu](double x) { return 1.0 / (1.0 + mu * mu * x * x); });
}

KMuReport k_mu_from_ctx(const DoubledCtx& c, double mu) {
  Mat gp = resolvent_g(c.dp, mu);
  Mat gm = resolvent_g(c.dm, mu);
  Mat k_def = gm - gp;
  Mat wb = c.w * c.bhat;
  Mat first = 2.0 * mu * mu * gp * wb * gm;
  Mat second = 2.0 * mu * mu * gm * wb * gp;
  KMuReport r;
  r.res_def_first = op_norm(k_def - first);
  r.res_def_second = op_norm(k_def - second);
  r.res_forms = op_norm(first - second);
  r.norm_k = op_norm(k_def);
  r.norm_dplus_k = op_norm(c.dp.matrix() * k_def);
  r.norm_dminus_k = op_norm(c.dm.matrix() * k_def);
  r.scale = 1.0 + mu * mu * op_norm(c.bhat);
  return r;
}

// w R_mu product form G+ B G- + mu D- G+ B G- mu D-
Mat wr_product_form(const DoubledCtx& c, double mu) {
  Mat gp = resolvent_g(c.dp, mu);
  Mat gm = resolvent_g(c.dm, mu);
  Mat core = gp * c.bhat * gm;
  return core + mu * mu * c.dm.matrix() * core * c.dm.matrix();
}

Mat r_mu_from_ctx(const DoubledCtx& c, double mu) {
  Mat g = resolvent_g(c.dp, mu);
  Mat wt = c.w * c.that;
  return wt * g * c.shat + c.shat * g * wt;
}

}  // namespace

Mat volume_element(Eigen::Index m) {
  return kron(sigma3(), Mat::Identity(m, m));
}

Mat d_plus(const Mat& s, const Mat& t) {
  return doubled(s) + volume_element(s.rows()) * doubled(t);
}

Mat d_minus(const Mat& s, const Mat& t) {
  return doubled(s) - volume_element(s.rows()) * doubled(t);
}

Mat chi_eig(const SelfAdjointOp& d) {
  return d.real_func([](double x) { return 2.0 / kPi * std::atan(x); });
}

Mat chi_quadrature(const SelfAdjointOp& d, int n) {
  if (n < 8) throw std::invalid_argument("chi_quadrature: need at least 8 nodes");
  Quadrature q = unit_quadrature(n, d.norm());
  return d.real_func([&q](double x) {
    std::vector<double> terms(q.x.size());
    for (std::size_t i = 0; i < q.x.size(); ++i) {
      double mu = q.x[i];
      terms[i] = q.w[i] * x / (1.0 + mu * mu * x * x);
    }
    return 2.0 / kPi * pairwise_sum(terms.data(), terms.size());
  });
}

double arctan_quadrature_max(const SelfAdjointOp& d, int n) {
  Quadrature q = unit_quadrature(n, d.norm());
  double best = 0.0;
  for (Eigen::Index j = 0; j < d.eigenvalues().size(); ++j) {
    double x = std::abs(d.eigenvalues()[j]);
    std::vector<double> terms(q.x.size());
    for (std::size_t i = 0; i < q.x.size(); ++i) {
      double mu = q.x[i];
      terms[i] = q.w[i] * x / (1.0 + mu * mu * x * x);
    }
    best = std::max(best, pairwise_sum(terms.data(), terms.size()));
  }
  return best;
}

KMuReport k_mu_identities(const SelfAdjointOp& s, const SelfAdjointOp& t, double mu) {
  if (!(mu > 0)) throw std::invalid_argument("k_mu_identities: mu must be positive");
  DoubledCtx c(s, t);
  return k_mu_from_ctx(c, mu);
}

KMuSweep k_mu_sweep(const SelfAdjointOp& s, const SelfAdjointOp& t, int points) {
  DoubledCtx c(s, t);
  KMuSweep sweep;
  sweep.mu = logspace(-2.0, 2.0, points);
  for (double mu : sweep.mu) {
    KMuReport r = k_mu_from_ctx(c, mu);
    sweep.norm_k.push_back(r.norm_k);
    sweep.norm_dk.push_back(std::max(r.norm_dplus_k, r.norm_dminus_k));
    sweep.sup_k = std::max(sweep.sup_k, r.norm_k);
    sweep.sup_dk = std::max(sweep.sup_dk, sweep.norm_dk.back());
    double worst = std::max({r.res_def_first, r.res_def_second, r.res_forms});
    sweep.worst_residual = std::max(sweep.worst_residual, worst / r.scale);
    sweep.scale = std::max(sweep.scale, r.scale);
  }
  return sweep;
}

Mat r_mu_matrix(const SelfAdjointOp& s, const SelfAdjointOp& t, double mu) {
  DoubledCtx c(s, t);
  return r_mu_from_ctx(c, mu);
}

RMuReport r_mu_identity(const SelfAdjointOp& s, const SelfAdjointOp& t, double mu) {
  if (!(mu > 0)) throw std::invalid_argument("r_mu_identity: mu must be positive");
  DoubledCtx c(s, t);
  Mat r = r_mu_from_ctx(c, mu);
  RMuReport rep;
  rep.residual = op_norm(c.w * r - wr_product_form(c, mu));
  SelfAdjointOp smu(Mat(mu * s.matrix()));
  SelfAdjointOp tmu(Mat(mu * t.matrix()));
  DoubledCtx cmu(smu, tmu);
  rep.residual_scaling = op_norm(r_mu_from_ctx(cmu, 1.0) - mu * mu * r);
  rep.norm_r = op_norm(r);
  rep.scale = (1.0 + s.norm()) * (1.0 + t.norm()) * (1.0 + mu * mu);
  return rep;
}

Mat pert_mu_matrix(const SelfAdjointOp& s, const SelfAdjointOp& t, double mu) {
  DoubledCtx c(s, t);
  Mat gp = resolvent_g(c.dp, mu);
  Mat gm = resolvent_g(c.dm, mu);
  Mat kmu = gm - gp;
  Mat core = kmu * c.bhat * gm;
  return c.w * Mat(-core - mu * mu * c.dm.matrix() * core * c.dm.matrix());
}

Kk2Report kk2_bound(const SelfAdjointOp& s, const SelfAdjointOp& t, double tol) {
  Mat k = anticommutator(s.matrix(), t.matrix());
  SelfAdjointOp d(Mat(s.matrix() + t.matrix()));
  Kk2Report r;
  r.p0_norm = interpolation_p0_norm(s, t);
  Mat weight = r.p0_norm * d.real_func([](double x) { return 1.0 + std::abs(x); });
  r.slack_plus = min_eig_herm(weight - k);
  r.slack_minus = min_eig_herm(weight + k);
  r.scale = std::max(1.0, op_norm(k));
  r.ok = r.slack_plus >= -tol * r.scale && r.slack_minus >= -tol * r.scale;
  return r;
}

Kk3Report kk3_bound(const SelfAdjointOp& s, const SelfAdjointOp& t,
                    const std::vector<double>& mus, double tol) {
  Mat k = anticommutator(s.matrix(), t.matrix());
  SelfAdjointOp d(Mat(s.matrix() + t.matrix()));
  Kk3Report rep;
  rep.p0_norm = interpolation_p0_norm(s, t);
  rep.scale = std::max(1.0, op_norm(k));
  rep.worst_slack = std::numeric_limits<double>::infinity();
  for (double mu : mus) {
    Mat g = resolvent_g(d, mu);
    Mat lhs = g * k * g;
    double c = rep.p0_norm;
    Mat rhs = d.real_func([mu, c](double x) {
      double gm = 1.0 / (1.0 + mu * mu * x * x);
      return c * (1.0 + std::abs(x)) * gm * gm;
    });
    Kk3Row row;
    row.mu = mu;
    row.slack_plus = min_eig_herm(rhs - lhs);
    row.slack_minus = min_eig_herm(rhs + lhs);
    rep.worst_slack = std::min({rep.worst_slack, row.slack_plus, row.slack_minus});
    rep.rows.push_back(row);
  }
  SelfAdjointOp s10 = s.scaled(0.1);
  SelfAdjointOp t10 = t.scaled(0.1);
  rep.p0_tenth = interpolation_p0_norm(s10, t10);
  rep.scaling_ok = rep.p0_tenth <= 0.1 * rep.p0_norm * (1.0 + 1e-12);
  rep.ok = rep.worst_slack >= -tol * rep.scale && rep.scaling_ok;
  return rep;
}

namespace {

// max over the two diagonal blocks of the doubled P0 at scale u:
// |u^2 K (1 + |u(S+T)|)^{-1}| and |u^2 K (1 + |u(S-T)|)^{-1}|
double doubled_p0(const Mat& k, const Mat& sum, const Mat& diff, double u) {
  auto block = [&](const Mat& a) {
    SelfAdjointOp d(Mat(u * a));
    Mat weight = d.real_func([](double x) { return 1.0 / (1.0 + std::abs(x)); });
    return op_norm(u * u * k * weight);
  };
  return std::max(block(sum), block(diff));
}

// Pert integrated against the chi kernels: both integrals factor because the
// mu-dependence sits entirely inside Pert and the lambda kernels commute with S
Mat pert_total(const Mat& ms, const Mat& mt, int nodes) {
  SelfAdjointOp s(ms), t(mt);
  DoubledCtx c(s, t);
  SelfAdjointOp shat(c.shat);

  Quadrature qmu = unit_quadrature(nodes, std::max(c.dp.norm(), c.dm.norm()));
  std::vector<Mat> mu_terms;
  for (std::size_t i = 0; i < qmu.x.size(); ++i) {
    double mu = qmu.x[i];
    Mat gp = resolvent_g(c.dp, mu);
    Mat gm = resolvent_g(c.dm, mu);
    Mat core = (gm - gp) * c.bhat * gm;
    Mat pert = c.w * Mat(-core - mu * mu * c.dm.matrix() * core * c.dm.matrix());
    mu_terms.push_back(qmu.w[i] * pert);
  }
  Mat mbar = quad_sum(mu_terms);

  Quadrature qlam = unit_quadrature(nodes, shat.norm());
  std::vector<Mat> lam_terms;
  for (std::size_t i = 0; i < qlam.x.size(); ++i) {
    double lam = qlam.x[i];
    Mat p = shat.real_func([lam](double x) { return 1.0 / (1.0 + lam * lam * x * x); });
    Mat q = shat.real_func([lam](double x) { return lam * x / (1.0 + lam * lam * x * x); });
    lam_terms.push_back(qlam.w[i] * Mat(p * mbar * p + q * mbar * q));
  }
  return 4.0 / (kPi * kPi) * quad_sum(lam_terms);
}

}  // namespace

RescaleReport rescale_for_kappa(const SelfAdjointOp& s, const SelfAdjointOp& t, double kappa,
                                int quad_nodes) {
  if (!(kappa > 0)) throw std::invalid_argument("rescale_for_kappa: kappa must be positive");
  RescaleReport rep;
  rep.kappa = kappa;
  rep.epsilon_used = 2.0 * kappa / (kPi * kPi * kPi);

  Mat k = anticommutator(s.matrix(), t.matrix());
  Mat sum = s.matrix() + t.matrix();
  Mat diff = s.matrix() - t.matrix();
  double p0_full = doubled_p0(k, sum, diff, 1.0);
  if (p0_full <= rep.epsilon_used) {
    rep.t_star = 1.0;
    rep.p0_at_t = p0_full;
    rep.bisection_ok = true;
  } else {
    // p0(u) <= u * p0(1), so lo starts inside the feasible set
    double lo = 0.999 * rep.epsilon_used / p0_full;
    double hi = 1.0;
    for (int i = 0; i < 60; ++i) {
      double mid = 0.5 * (lo + hi);
      (doubled_p0(k, sum, diff, mid) <= rep.epsilon_used ? lo : hi) = mid;
    }
    rep.t_star = lo;
    rep.p0_at_t = doubled_p0(k, sum, diff, lo);
    rep.bisection_ok = rep.p0_at_t <= rep.epsilon_used;
  }

  Mat ms = rep.t_star * s.matrix();
  Mat mt = rep.t_star * t.matrix();
  SelfAdjointOp dp(d_plus(ms, mt));
  SelfAdjointOp shat(doubled(ms));
  Mat chid = chi_eig(dp);
  Mat chis = chi_eig(shat);
  Mat anti = chid * chis + chis * chid;
  rep.lambda_min = min_eig_herm(anti);
  rep.lambda_min_adjusted = min_eig_herm(anti - hermitian_part(pert_total(ms, mt, quad_nodes)));
  rep.success = rep.bisection_ok && rep.lambda_min >= -kappa;
  return rep;
}

double chi_decomposition_residual(const SelfAdjointOp& s, const SelfAdjointOp& t, int nodes) {
  DoubledCtx c(s, t);
  SelfAdjointOp shat(c.shat);
  Mat lhs = chi_eig(c.dp) * chi_eig(shat) + chi_eig(shat) * chi_eig(c.dp);

  Quadrature qmu = unit_quadrature(nodes, c.dp.norm());
  std::vector<Mat> g_terms, r_terms;
  for (std::size_t i = 0; i < qmu.x.size(); ++i) {
    double mu = qmu.x[i];
    Mat g = resolvent_g(c.dp, mu);
    g_terms.push_back(qmu.w[i] * g);
    r_terms.push_back(qmu.w[i] * Mat(c.w * c.that * g * c.shat + c.shat * g * c.w * c.that));
  }
  Mat m1 = quad_sum(g_terms);
  Mat m2 = quad_sum(r_terms);

  Quadrature qlam = unit_quadrature(nodes, shat.norm());
  std::vector<Mat> lam_terms;
  Mat sm1s = c.shat * m1 * c.shat;
  Mat s2m1s2 = c.shat * sm1s * c.shat;
  Mat sm2s = c.shat * m2 * c.shat;
  for (std::size_t i = 0; i < qlam.x.size(); ++i) {
    double lam = qlam.x[i];
    Mat p = shat.real_func([lam](double x) { return 1.0 / (1.0 + lam * lam * x * x); });
    Mat inner = 2.0 * sm1s + (2.0 * lam * lam) * s2m1s2 + m2 + (lam * lam) * sm2s;
    lam_terms.push_back(qlam.w[i] * Mat(p * inner * p));
  }
  Mat rhs = 4.0 / (kPi * kPi) * quad_sum(lam_terms);
  return op_norm(lhs - rhs);
}

GradedModule make_graded_module(const ModuleShape& shape, const Mat& grading) {
  if (grading.rows() != shape.dim() || grading.cols() != shape.dim())
    throw std::invalid_argument("make_graded_module: grading does not match the shape");
  double n = std::max(1.0, op_norm(grading));
  if (op_norm(grading - grading.adjoint()) > 1e-13 * n)
    throw std::invalid_argument("make_graded_module: grading is not self-adjoint");
  if (op_norm(grading * grading - Mat::Identity(grading.rows(), grading.cols())) > 1e-13 * n * n)
    throw std::invalid_argument("make_graded_module: grading does not square to the identity");
  return GradedModule{shape, grading};
}

KasparovTriple make_triple(const GradedModule& m,
                           std::vector<std::pair<std::string, Mat>> representation,
                           const SelfAdjointOp& d, double tol) {
  if (d.dim() != m.grading.rows())
    throw std::invalid_argument("make_triple: operator does not match the module");
  KasparovTriple triple{m, std::move(representation), d, 0.0, {}};
  triple.oddness_residual = op_norm(m.grading * d.matrix() + d.matrix() * m.grading);
  if (triple.oddness_residual > tol * std::max(1.0, d.norm()))
    throw std::invalid_argument("make_triple: operator is not odd for the grading");
  for (const auto& [name, a] : triple.representation) {
    if (a.rows() != d.dim() || a.cols() != d.dim())
      throw std::invalid_argument("make_triple: representative does not match the module");
    triple.commutator_norms.emplace_back(name, op_norm(commutator(d.matrix(), a)));
  }
  return triple;
}

KasparovTriple triple_from_pair(const GeneratedPair& pair) {
  if (!pair.grading) throw std::invalid_argument("triple_from_pair: pair carries no grading");
  ModuleShape shape{2 * pair.shape.n, pair.shape.k};
  GradedModule m = make_graded_module(shape, doubled(*pair.grading));
  Mat ms = pair.s.matrix();
  Mat mt = pair.t.matrix();
  std::vector<std::pair<std::string, Mat>> reps;
  reps.emplace_back("s_sq", doubled(Mat(ms * ms)));
  reps.emplace_back("t_sq", doubled(Mat(mt * mt)));
  reps.emplace_back("anticommutator", doubled(anticommutator(ms, mt)));
  return make_triple(m, std::move(reps), SelfAdjointOp(d_plus(ms, mt)));
}

namespace {

Mat matrix_unit(int n, int r, int c) {
  Mat e = Mat::Zero(n, n);
  e(r, c) = 1.0;
  return e;
}

}  // namespace

InteriorTensor interior_tensor(const ModuleShape& x_shape, const ModuleShape& y_shape,
                               const LeftAction& rho, const Mat& gamma_x, const Mat& gamma_y,
                               double cutoff_rel) {
  InteriorTensor e;
  e.x_shape = x_shape;
  e.y_shape = y_shape;
  int k = x_shape.k;
  int kc = y_shape.k;
  int xrows = x_shape.dim();
  int yrows = y_shape.dim();
  e.nx_coeff = xrows * k;
  e.ny_coeff = yrows * kc;
  if (gamma_x.rows() != xrows || gamma_y.rows() != yrows)
    throw std::invalid_argument("interior_tensor: grading does not match a factor shape");

  // rho(E_cc') tabulated once; output dimension fixes the coefficient match
  std::vector<Mat> rho_units(static_cast<std::size_t>(k) * k);
  for (int c = 0; c < k; ++c)
    for (int c2 = 0; c2 < k; ++c2) {
      Mat r = rho(matrix_unit(k, c, c2));
      if (r.rows() != yrows || r.cols() != yrows)
        throw std::invalid_argument("interior_tensor: coefficient algebras do not match");
      rho_units[static_cast<std::size_t>(c) * k + c2] = r;
    }

  int n = e.nx_coeff * e.ny_coeff;
  Mat g = Mat::Zero(n, n);
  for (int u = 0; u < xrows; ++u)
    for (int c = 0; c < k; ++c)
      for (int v = 0; v < yrows; ++v)
        for (int d = 0; d < kc; ++d) {
          int row = ((u * k + c) * yrows + v) * kc + d;
          for (int c2 = 0; c2 < k; ++c2) {
            const Mat& ru = rho_units[static_cast<std::size_t>(c) * k + c2];
            for (int v2 = 0; v2 < yrows; ++v2) {
              int col = ((u * k + c2) * yrows + v2) * kc + d;
              g(row, col) = ru(v, v2);
            }
          }
        }
  e.gram = hermitian_part(g);

  Eigen::SelfAdjointEigenSolver<Mat> eig(e.gram);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("interior_tensor: gram eigendecomposition failed");
  e.gram_eigenvalues = eig.eigenvalues();
  double lmax = std::max(0.0, e.gram_eigenvalues.maxCoeff());
  if (e.gram_eigenvalues.minCoeff() < -1e-10 * std::max(1.0, lmax))
    throw std::invalid_argument("interior_tensor: gram form is not positive");
  e.cutoff = cutoff_rel * lmax;

  if ((e.gram - Mat::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-13) {
    // free case: the quotient is the algebraic tensor space itself
    e.rank = n;
    e.quotient_basis = Mat::Identity(n, n);
  } else {
    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
      if (e.gram_eigenvalues[i] > e.cutoff) keep.push_back(i);
    e.rank = static_cast<int>(keep.size());
    e.quotient_basis = Mat::Zero(n, e.rank);
    for (int j = 0; j < e.rank; ++j)
      e.quotient_basis.col(j) =
          eig.eigenvectors().col(keep[j]) / std::sqrt(e.gram_eigenvalues[keep[j]]);
  }

  Mat gamma_coeff = x_coefficient_action(e, gamma_x) * y_coefficient_action(e, gamma_y);
  e.grading = project_to_quotient(e, gamma_coeff);
  return e;
}

Mat x_coefficient_action(const InteriorTensor& e, const Mat& op_on_x) {
  if (op_on_x.rows() != e.x_shape.dim())
    throw std::invalid_argument("x_coefficient_action: operator does not match the factor");
  Mat coeff = kron(op_on_x, Mat::Identity(e.x_shape.k, e.x_shape.k));
  return kron(coeff, Mat::Identity(e.ny_coeff, e.ny_coeff));
}

Mat y_coefficient_action(const InteriorTensor& e, const Mat& op_on_y) {
  if (op_on_y.rows() != e.y_shape.dim())
    throw std::invalid_argument("y_coefficient_action: operator does not match the factor");
  Mat coeff = kron(op_on_y, Mat::Identity(e.y_shape.k, e.y_shape.k));
  return kron(Mat::Identity(e.nx_coeff, e.nx_coeff), coeff);
}

Mat project_to_quotient(const InteriorTensor& e, const Mat& coeff_action, double tol) {
  int n = e.nx_coeff * e.ny_coeff;
  if (coeff_action.rows() != n || coeff_action.cols() != n)
    throw std::invalid_argument("project_to_quotient: operator does not match the tensor space");
  if (e.rank < n) {
    Eigen::SelfAdjointEigenSolver<Mat> eig(e.gram);
    Mat null_basis = Mat::Zero(n, n - e.rank);
    int j = 0;
    for (int i = 0; i < n; ++i)
      if (eig.eigenvalues()[i] <= e.cutoff) null_basis.col(j++) = eig.eigenvectors().col(i);
    double denom = std::max(1e-300, op_norm(e.gram) * op_norm(coeff_action));
    if (op_norm(e.gram * coeff_action * null_basis) / denom > tol)
      throw std::invalid_argument("project_to_quotient: lift does not preserve the null space");
  }
  return e.quotient_basis.adjoint() * e.gram * coeff_action * e.quotient_basis;
}

Mat lift_s(const InteriorTensor& e, const Mat& s_x, double tol) {
  return project_to_quotient(e, x_coefficient_action(e, s_x), tol);
}

Mat coefficient_gram(const InteriorTensor& e, const Mat& vectors) {
  if (vectors.rows() != e.gram.rows())
    throw std::invalid_argument("coefficient_gram: vectors do not match the tensor space");
  return vectors.adjoint() * e.gram * vectors;
}

ConnesSkandalisReport connes_skandalis_check(
    const InteriorTensor& e, const Mat& t_full_coeff, const Mat& t_y,
    const std::vector<HomogeneousVector>& xs, const SelfAdjointOp& s, const SelfAdjointOp& d,
    const std::vector<std::pair<std::string, Mat>>& algebra, double kappa) {
  int n = e.nx_coeff * e.ny_coeff;
  if (t_full_coeff.rows() != n || t_full_coeff.cols() != n)
    throw std::invalid_argument("connes_skandalis_check: connection does not match the tensor");
  if (t_y.rows() != e.y_shape.dim())
    throw std::invalid_argument("connes_skandalis_check: operator does not match the factor");
  Mat ty_coeff = kron(t_y, Mat::Identity(e.y_shape.k, e.y_shape.k));

  ConnesSkandalisReport rep;
  rep.kappa = kappa;
  rep.kappa_admissible = kappa >= 0.0 && kappa < 2.0;

  for (const auto& hx : xs) {
    if (hx.x_coeff.size() != e.nx_coeff)
      throw std::invalid_argument("connes_skandalis_check: x vector does not match the factor");
    Mat w = Mat::Zero(n, e.ny_coeff);
    for (int j = 0; j < e.ny_coeff; ++j) {
      Eigen::VectorXcd tensor = Eigen::VectorXcd::Zero(n);
      for (int i = 0; i < e.nx_coeff; ++i) tensor[i * e.ny_coeff + j] = hx.x_coeff[i];
      Eigen::VectorXcd graded = Eigen::VectorXcd::Zero(n);
      for (int i = 0; i < e.nx_coeff; ++i)
        for (int v = 0; v < e.ny_coeff; ++v)
          graded[i * e.ny_coeff + v] += hx.x_coeff[i] * static_cast<double>(hx.sign) * ty_coeff(v, j);
      w.col(j) = t_full_coeff * tensor - graded;
    }
    Mat in_quotient = e.quotient_basis.adjoint() * e.gram * w;
    rep.condition_i_max = std::max(rep.condition_i_max, op_norm(in_quotient));
  }

  if (s.dim() != d.dim())
    throw std::invalid_argument("connes_skandalis_check: operator dimensions differ");
  Mat chis = chi_eig(s);
  Mat chid = chi_eig(d);
  Mat anti = chis * chid + chid * chis;
  rep.identity_lambda_min = min_eig_herm(anti);
  bool all_ok = true;
  for (const auto& [name, a] : algebra) {
    if (a.rows() != s.dim() || a.cols() != s.dim())
      throw std::invalid_argument("connes_skandalis_check: algebra element dimension mismatch");
    Mat m = a.adjoint() * anti * a + kappa * a.adjoint() * a;
    double lmin = min_eig_herm(hermitian_part(m));
    rep.condition_ii.emplace_back(name, lmin);
    double scale = std::max(1.0, op_norm(a));
    all_ok = all_ok && lmin >= -1e-10 * scale * scale;
  }
  rep.ok = rep.kappa_admissible && all_ok;
  return rep;
}

}  // namespace waclab
