#include "glmmc/analysis.hpp"

#include <cmath>
#include <limits>

#include "glmmc/errors.hpp"
#include "glmmc/stats.hpp"

namespace glmmc {

double preconditioned_condition_number(const Eigen::MatrixXd& x,
                                       const Eigen::MatrixXd& q) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eq(q);
  if (eq.info() != Eigen::Success || eq.eigenvalues().minCoeff() <= 0)
    throw SingularQ("preconditioner must be positive definite");
  const Eigen::MatrixXd qinvhalf =
      eq.eigenvectors() *
      eq.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
      eq.eigenvectors().transpose();
  const Eigen::MatrixXd m = qinvhalf * (x.transpose() * x) * qinvhalf;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> em(0.5 * (m + m.transpose()));
  return 1.0 + em.eigenvalues().maxCoeff() / 4.0;
}

namespace {

double min_eigenvalue(const Eigen::MatrixXd& w) {
  const int d = static_cast<int>(w.rows());
  if (d <= 64) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w);
    return es.eigenvalues().minCoeff();
  }
  // power iteration on c I - W (Gershgorin shift) for the extreme eigenpair
  double c = 0;
  for (int i = 0; i < d; ++i) c = std::max(c, w.row(i).cwiseAbs().sum());
  Eigen::VectorXd v = Eigen::VectorXd::Ones(d).normalized();
  for (int it = 0; it < 200; ++it) {
    Eigen::VectorXd bv = c * v - w * v;
    const double norm = bv.norm();
    if (norm == 0) break;
    v = bv / norm;
  }
  return c - v.dot(c * v - w * v);
}

}  // namespace

double curvature_constant(double lambda_min) {
  const double beta1 = normal_cdf(2.0) - normal_cdf(-2.0);
  const double beta2 = 2.0 * normal_cdf(-2.0 / 3.0);
  const double w2 = 4.0 * lambda_min / 9.0;
  return (0.95 * beta1 + 0.95 * beta2 - 1.0) * w2;
}

CurvatureProfile local_min_curvature(const GlmFamily& family,
                                     const Eigen::MatrixXd& x,
                                     const Eigen::VectorXd& center,
                                     double radius, int probes,
                                     const SigmaStats& sigma, Rng& rng) {
  CurvatureProfile out;
  out.center = center;
  out.radius = radius;
  out.probes = probes;

  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < probes; ++k) {
    Eigen::VectorXd dir(d);
    for (int i = 0; i < d; ++i) dir[i] = rng.normal();
    dir.normalize();
    const double rr = radius * std::pow(rng.uniform(), 1.0 / d);
    const Eigen::VectorXd theta = center + rr * dir;
    const Eigen::VectorXd p = x * theta;
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w[i] = family.a2(p[i]);
    const Eigen::MatrixXd h = x.transpose() * w.asDiagonal() * x;
    best = std::min(best, min_eigenvalue(0.5 * (h + h.transpose())));
  }
  out.empirical_min_eig = best;

  const double w1 = 4.0 * sigma.lambda_max;
  const double rhat = (center.norm() + radius) * std::sqrt(w1);
  out.theory_lower_bound =
      curvature_constant(sigma.lambda_min) * n * family.a2_inf_ball(rhat);
  return out;
}

SmoothnessBound smoothness_bound(const GlmFamily& family,
                                 const Eigen::MatrixXd& x,
                                 const SigmaStats& sigma) {
  const double ca = family.a2_sup();
  if (!std::isfinite(ca))
    throw UnboundedAprime2(
        "unclipped Poisson has unbounded A''; set a clip radius");
  const int n = static_cast<int>(x.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x.transpose() * x);
  SmoothnessBound out;
  out.empirical = es.eigenvalues().maxCoeff() * ca;
  const double root =
      2.0 * std::sqrt(n * sigma.lambda_max) + std::sqrt(sigma.trace);
  out.theory = ca * root * root;
  out.holds = out.empirical <= out.theory;
  return out;
}

double score_norm(const GlmFamily& family, const Eigen::VectorXd& theta_star,
                  const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const Eigen::VectorXd p = x * theta_star;
  Eigen::VectorXd resid(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i)
    resid[i] = y[i] - family.a1(p[i]);
  return (x.transpose() * resid).norm();
}

double residual_level_linear(double sigma, double eps) {
  const double s2 = sigma * sigma;
  return 2.0 * s2 *
         std::log(std::max(2.0, std::sqrt(2.0 * s2 / std::numbers::pi)) / eps);
}

double residual_level_poisson(double eps, double theta_norm2_lambda_max) {
  const double eps_star =
      eps * eps / std::pow(2.0 + 2.0 * std::exp(theta_norm2_lambda_max), 2);
  const double level = std::log(2.0 / eps_star);
  return std::max(
      std::exp(2.0) * std::exp(std::sqrt(2.0 * theta_norm2_lambda_max * level)),
      level);
}

double score_exponent(double a, double lambda_max, double y_star) {
  const double s = a / std::sqrt(lambda_max);
  return s * std::min(std::min(s, 15.0) / (30.0 * y_star * y_star), 0.25);
}

double tail_mass_bound(const TailBoundInput& in) {
  if (in.r * std::sqrt(in.c / in.d) < 3.0)
    throw PreconditionViolated("tail bound needs r sqrt(c/d) >= 3");
  const double base = in.prior_ratio *
                      std::exp(-3.0 * in.c * in.r * in.r / 8.0) *
                      std::pow(2.0, in.d + 1);
  return base *
         std::pow(6.0 * in.r * (1.0 + static_cast<double>(in.moment) / in.d),
                  in.moment);
}

double quadratic_linear_potential(double c, double r, double s) {
  const double a = std::abs(s);
  if (a <= r) return 0.5 * c * a * a;
  return 0.5 * c * r * r + c * r * (a - r);
}

namespace {

double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                            double b, double tol, int depth, double fa,
                            double fm, double fb, double whole) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth > 60) throw QuadratureDivergence("adaptive Simpson too deep");
  if (depth > 3 && std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_rec(f, a, m, 0.5 * tol, depth + 1, fa, flm, fm,
                              left) +
         adaptive_simpson_rec(f, m, b, 0.5 * tol, depth + 1, fm, frm, fb,
                              right);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(f, a, b, tol, 0, fa, fm, fb, whole);
}

}  // namespace

double tail_mass_oracle(const std::function<double(const Eigen::VectorXd&)>& u,
                        int d, double r, int moment, double rel_tol) {
  if (d != 1 && d != 2)
    throw PreconditionViolated("tail oracle supports d in {1,2} only");

  if (d == 1) {
    auto pot = [&](double t) {
      Eigen::VectorXd v(1);
      v[0] = t;
      return u(v);
    };
    // reference level and truncation by expansion
    double uref = std::numeric_limits<double>::infinity();
    for (int i = -32; i <= 32; ++i)
      uref = std::min(uref, pot((r + 1.0) * i / 32.0));
    if (!std::isfinite(uref))
      throw QuadratureDivergence("potential non-finite near origin");
    double cut = std::max(2.0 * r, 2.0);
    for (int k = 0;; ++k) {
      if (pot(cut) - uref >= 80.0 && pot(-cut) - uref >= 80.0) break;
      cut *= 2.0;
      if (k >= 200)
        throw QuadratureDivergence("potential not coercive on the line");
    }
    auto w = [&](double t) {
      const double v = pot(t) - uref;
      return std::isfinite(v) ? std::exp(-v) : 0.0;
    };
    auto wm = [&](double t) { return std::pow(std::abs(t), moment) * w(t); };
    const double z = integrate(w, -cut, cut, rel_tol * 1e-2);
    const double num = integrate(wm, -cut, -r, rel_tol * 1e-2) +
                       integrate(wm, r, cut, rel_tol * 1e-2);
    if (!(z > 0)) throw QuadratureDivergence("vanishing normalizer");
    return num / z;
  }

  // d == 2 in polar coordinates
  auto pot = [&](double s, double phi) {
    Eigen::VectorXd v(2);
    v[0] = s * std::cos(phi);
    v[1] = s * std::sin(phi);
    return u(v);
  };
  double uref = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 16; ++a)
    for (int i = 0; i <= 16; ++i)
      uref = std::min(uref, pot((r + 1.0) * i / 16.0,
                                2.0 * std::numbers::pi * a / 16.0));
  if (!std::isfinite(uref))
    throw QuadratureDivergence("potential non-finite near origin");
  double cut = std::max(2.0 * r, 2.0);
  for (int k = 0;; ++k) {
    bool ok = true;
    for (int a = 0; a < 16 && ok; ++a)
      ok = pot(cut, 2.0 * std::numbers::pi * a / 16.0) - uref >= 80.0;
    if (ok) break;
    cut *= 2.0;
    if (k >= 200)
      throw QuadratureDivergence("potential not coercive in the plane");
  }

  auto radial = [&](double phi, double lo, double hi, int mom) {
    auto f = [&](double s) {
      const double v = pot(s, phi) - uref;
      const double w = std::isfinite(v) ? std::exp(-v) : 0.0;
      return std::pow(s, mom + 1) * w;  // Jacobian s
    };
    return integrate(f, lo, hi, rel_tol * 1e-3);
  };
  auto z_angular = [&](double phi) { return radial(phi, 0.0, cut, 0); };
  auto num_angular = [&](double phi) { return radial(phi, r, cut, moment); };
  const double z =
      integrate(z_angular, 0.0, 2.0 * std::numbers::pi, rel_tol * 1e-2);
  const double num =
      integrate(num_angular, 0.0, 2.0 * std::numbers::pi, rel_tol * 1e-2);
  if (!(z > 0)) throw QuadratureDivergence("vanishing normalizer");
  return num / z;
}

PoissonLevels poisson_radius(double eps, double delta, int n,
                             double theta_star_norm, const SigmaStats& sigma,
                             double c_pi, int d, long iterations) {
  PoissonLevels out;
  const double energy =
      theta_star_norm * theta_star_norm * sigma.lambda_max;
  out.y_star = residual_level_poisson(eps, energy);

  auto y_level = [&](double e) {
    // response tail level at probability e (e in (0,2))
    const double l = std::log(2.0 / e);
    return std::max(std::exp(2.0) * std::exp(std::sqrt(2.0 * energy * l)), l);
  };
  auto r_star = [&](double e, double dl) {
    const double amp = theta_star_norm * std::sqrt(sigma.lambda_max) + 2.0;
    return std::max(
        {4.0 * std::log(2.0 * y_level(dl / (5.0 * n))),
         amp * std::sqrt(2.0 * std::log(15.0 * n / (e * dl))),
         amp * std::sqrt(8.0 * std::log(20.0 / dl))});
  };
  out.r_star = r_star(eps, delta);
  out.big_r = theta_star_norm + 2.0 / std::sqrt(sigma.lambda_max);

  const double k = static_cast<double>(iterations);
  const double r_run = r_star(eps / (4.0 + k), delta * eps / 4.0);
  const double root =
      2.0 * std::sqrt(n * sigma.lambda_max) + std::sqrt(sigma.trace);
  out.l_bar = 2.0 * c_pi * d +
              (n / 7.0) * sigma.lambda_min *
                  std::exp(-2.0 * out.big_r * std::sqrt(2.0 * sigma.lambda_max)) +
              std::exp(r_run) * root * root;
  return out;
}

}  // namespace glmmc
