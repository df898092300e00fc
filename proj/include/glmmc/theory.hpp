#pragma once

// Theory-derived sampler schedules: scale constants, Gibbs and HMC iteration
// counts, step sizes, and feasible-start precisions, evaluated verbatim from
// their defining formulas.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>

#include "glmmc/family.hpp"
#include "glmmc/rng.hpp"
#include "glmmc/synth.hpp"

namespace glmmc {

struct ProblemStats {
  int n = 0;
  int d = 0;
  SigmaStats sigma;
  double c_pi = 0;
  double phi = 1;
};

struct LocalConditionNumbers {
  double kappa = 0;
  double kappa0 = 0;
  double kappa_bar = 0;
};

struct TheoryConstants {
  double l_sc = 0;      // (d/n) C_pi / lambda_max + 9 / phi
  double c_bar = 0;     // (inf A'' on the working interval)^{-1} * 7 l_sc
  double c_star = 1;    // assumed bound on |theta*|^2 lambda_max, C_pi/lambda_max
  double a2_inf = 0;    // inf of A'' over the working interval
  double smoothness = 0;        // L = l_sc * lambda_max * n
  double curvature_m0 = 0;      // local curvature of the likelihood part
  double curvature_m = 0;       // local curvature including prior slack
  LocalConditionNumbers kappa_loc;
};

struct HmcParams {
  long iterations = 0;      // N
  double step = 0;          // h
  double time = 0;          // T, with T/h integral
  int integrator = 1;       // u: 0 Verlet, 1 randomized midpoint
  double init_radius = 0;   // |theta_0 - theta_map| bound
  double smoothness = 0;    // recorded L for the L(T+h)^2 <= 1/8 check
  long ceiling_arg = 0;     // the step-count ceiling defining h
  bool time_clamped = false;

  long steps_per_iteration() const {
    return std::lround(time / step);
  }
};

struct GibbsParams {
  long iterations = 0;       // N
  double init_precision = 0; // feasible-start Gaussian precision
};

TheoryConstants theory_constants(const GlmFamily& family,
                                 const ProblemStats& stats,
                                 double c_star = 1.0);

HmcParams hmc_params_from_theory(const TheoryConstants& tc,
                                 const ProblemStats& stats, double eps,
                                 int integrator = 1);

GibbsParams gibbs_params_from_theory(const TheoryConstants& tc,
                                     const ProblemStats& stats, double eps);

// Poisson schedule with the paper's unspecified absolute constant exposed as
// a calibration knob (default 1).
GibbsParams poisson_gibbs_params(const ProblemStats& stats, double eps,
                                 double delta, double calibration_c = 1.0);

// theta_map + N(0, precision^{-1} I) draw
inline Eigen::VectorXd feasible_init(const Eigen::VectorXd& theta_map,
                                     double precision, Rng& rng) {
  const double sd = 1.0 / std::sqrt(precision);
  Eigen::VectorXd out(theta_map.size());
  for (Eigen::Index i = 0; i < out.size(); ++i)
    out[i] = theta_map[i] + sd * rng.normal();
  return out;
}

// uniform draw in the ball of `radius` about theta_map (HMC feasible start)
inline Eigen::VectorXd feasible_init_ball(const Eigen::VectorXd& theta_map,
                                          double radius, Rng& rng) {
  Eigen::VectorXd dir(theta_map.size());
  for (Eigen::Index i = 0; i < dir.size(); ++i) dir[i] = rng.normal();
  dir.normalize();
  const double r =
      radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(dir.size()));
  return theta_map + r * dir;
}

}  // namespace glmmc
