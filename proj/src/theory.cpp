#include "glmmc/theory.hpp"

#include <stdexcept>

namespace glmmc {

TheoryConstants theory_constants(const GlmFamily& family,
                                 const ProblemStats& stats, double c_star) {
  TheoryConstants tc;
  tc.c_star = c_star;
  const double n = static_cast<double>(stats.n);
  const double d = static_cast<double>(stats.d);
  const double phi_inv = 1.0 / stats.phi;

  tc.l_sc = (d / n) * stats.c_pi / stats.sigma.lambda_max + 9.0 * phi_inv;

  // working interval for the curvature floor of A''
  const double ball = 2.0 * std::sqrt(c_star) + 4.0;
  tc.a2_inf = family.a2_inf_ball(ball);
  tc.c_bar = 7.0 * tc.l_sc / tc.a2_inf;

  tc.smoothness = tc.l_sc * stats.sigma.lambda_max * n;
  tc.curvature_m0 = tc.a2_inf * phi_inv * n * stats.sigma.lambda_min / 6.0;
  tc.curvature_m = (6.0 / 7.0) * tc.curvature_m0;

  // local condition numbers; the curvature profiles implied by the GLM
  // results are constant on the relevant balls
  tc.kappa_loc.kappa = tc.smoothness / tc.curvature_m;
  tc.kappa_loc.kappa0 = tc.smoothness / tc.curvature_m0;
  tc.kappa_loc.kappa_bar = tc.smoothness / tc.curvature_m;
  return tc;
}

HmcParams hmc_params_from_theory(const TheoryConstants& tc,
                                 const ProblemStats& stats, double eps,
                                 int integrator) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("eps must lie in (0,1)");
  const double n = static_cast<double>(stats.n);
  const double kap = stats.sigma.kappa();

  HmcParams prm;
  prm.integrator = integrator;
  prm.iterations = static_cast<long>(
      std::ceil(21.0 * tc.c_bar * kap * std::log(178.0 * n / eps)));

  const double steps_real = 8.0 * std::sqrt(2.0) *
                            std::cbrt(n / (eps * eps)) *
                            std::pow(1.0 + 21.0 * tc.c_bar * kap, 2.0 / 3.0);
  prm.ceiling_arg = static_cast<long>(std::ceil(steps_real));

  const double total = 1.0 / std::sqrt(8.0 * tc.l_sc *
                                       stats.sigma.lambda_max * n);  // T + h
  prm.step = total / static_cast<double>(prm.ceiling_arg);
  prm.time = total - prm.step;
  if (prm.ceiling_arg < 2) {
    // desk-scale corner: the schedule would give T <= 0
    prm.step = 0.5 * total;
    prm.time = prm.step;
    prm.time_clamped = true;
  }
  prm.init_radius = 1.0 / std::sqrt(tc.l_sc * stats.sigma.lambda_max);
  prm.smoothness = tc.smoothness;
  return prm;
}

GibbsParams gibbs_params_from_theory(const TheoryConstants& tc,
                                     const ProblemStats& stats, double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("eps must lie in (0,1)");
  const double n = static_cast<double>(stats.n);
  const double d = static_cast<double>(stats.d);
  const double kap = stats.sigma.kappa();

  GibbsParams prm;
  const double inner = 5.0 * tc.c_star * tc.l_sc * n + 1.0 +
                       d * std::log(6.0 * d * tc.c_bar * kap);
  prm.iterations = static_cast<long>(std::ceil(
      6.0 * tc.c_bar * d * kap * (std::log(3.0 / eps) + std::log(inner))));
  prm.init_precision = 3.0 * tc.l_sc * stats.sigma.lambda_max * n;
  return prm;
}

GibbsParams poisson_gibbs_params(const ProblemStats& stats, double eps,
                                 double delta, double calibration_c) {
  if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("eps and delta must lie in (0,1)");
  if (calibration_c < 1.0)
    throw std::invalid_argument("calibration constant must be >= 1");
  const double n = static_cast<double>(stats.n);
  const double d = static_cast<double>(stats.d);
  const double kap = stats.sigma.kappa();
  const double c = calibration_c;

  GibbsParams prm;
  prm.iterations = static_cast<long>(std::ceil(
      c * kap * d *
      std::exp(c * std::sqrt(std::log(kap * d * n / (delta * eps))))));
  const double nn = static_cast<double>(prm.iterations);
  prm.init_precision = c *
                       std::exp(c * std::sqrt(std::log(n * nn / (eps * delta)))) *
                       n * stats.sigma.lambda_max;
  return prm;
}

}  // namespace glmmc
