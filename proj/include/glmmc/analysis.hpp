#pragma once

// Structural verifiers: condition-number identity, local curvature profiles,
// smoothness envelopes, score concentration, and tail-mass bounds with a
// quadrature oracle.

#include <Eigen/Dense>
#include <functional>

#include "glmmc/family.hpp"
#include "glmmc/rng.hpp"
#include "glmmc/synth.hpp"

namespace glmmc {

// kappa of the prior-preconditioned logistic potential:
// 1 + lambda_max(Q^{-1/2} X^T X Q^{-1/2}) / 4, exact via symmetric
// eigen-solves. Throws SingularQ unless Q is positive definite.
double preconditioned_condition_number(const Eigen::MatrixXd& x,
                                       const Eigen::MatrixXd& q);

struct CurvatureProfile {
  Eigen::VectorXd center;
  double radius = 0;
  double empirical_min_eig = 0;  // min over probes; upper-bounds the ball inf
  double theory_lower_bound = 0;
  int probes = 0;
};

// Minimum eigenvalue of sum_i A''(theta.X_i) X_i X_i^T over random probe
// points of the ball, against the Gaussian-design lower bound with the
// explicit constants w1 = 4 lambda_max, beta1 = Phi(2)-Phi(-2),
// w2 = 4 lambda_min / 9, beta2 = 2 Phi(-2/3), cbar = 19/20.
CurvatureProfile local_min_curvature(const GlmFamily& family,
                                     const Eigen::MatrixXd& x,
                                     const Eigen::VectorXd& center,
                                     double radius, int probes,
                                     const SigmaStats& sigma, Rng& rng);

// The constant (19/20 beta1 + 19/20 beta2 - 1) w2 appearing in the curvature
// lower bound, for a given lambda_min.
double curvature_constant(double lambda_min);

struct SmoothnessBound {
  double empirical = 0;  // lambda_max(X^T X) * sup A''
  double theory = 0;     // sup A'' * (2 sqrt(n lambda_max) + sqrt(tr))^2
  bool holds = false;
};

// Throws UnboundedAprime2 for unclipped Poisson.
SmoothnessBound smoothness_bound(const GlmFamily& family,
                                 const Eigen::MatrixXd& x,
                                 const SigmaStats& sigma);

// Euclidean norm of the likelihood score at theta*.
double score_norm(const GlmFamily& family, const Eigen::VectorXd& theta_star,
                  const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

// Residual truncation levels y* per family (the linear case takes sigma and
// eps; Poisson additionally the true-parameter energy |theta*|^2 lambda_max).
double residual_level_linear(double sigma, double eps);
inline double residual_level_logistic() { return 2.0; }
double residual_level_poisson(double eps, double theta_norm2_lambda_max);

// Score-concentration exponent t* as a function of the threshold a.
double score_exponent(double a, double lambda_max, double y_star);

struct TailBoundInput {
  double c = 0;            // curvature
  double r = 0;            // radius
  int d = 1;               // dimension
  int moment = 0;          // i
  double prior_ratio = 1;  // sup/inf of e^{-U0} outside/inside the ball
};

// Closed-form tail bound: prior_ratio * e^{-3 c r^2 / 8} * 2^{d+1}
// * (6 r (1 + i/d))^i. Requires r sqrt(c/d) >= 3.
double tail_mass_bound(const TailBoundInput& in);

// Quadrature oracle for the tail moment integral
// int_{|x|>r} |x|^i e^{-U} / int e^{-U}, d in {1, 2}.
double tail_mass_oracle(const std::function<double(const Eigen::VectorXd&)>& u,
                        int d, double r, int moment = 0,
                        double rel_tol = 1e-8);

// The comparison potential of the tail lemma: c|x|^2/2 inside the ball,
// linear continuation outside.
double quadratic_linear_potential(double c, double r, double norm_x);

struct PoissonLevels {
  double y_star = 0;   // response tail level
  double r_star = 0;   // projection radius r*(eps, delta)
  double big_r = 0;    // R = |theta*| + 2 lambda_max^{-1/2}
  double l_bar = 0;    // smoothness level of the truncated potential
};

PoissonLevels poisson_radius(double eps, double delta, int n,
                             double theta_star_norm, const SigmaStats& sigma,
                             double c_pi, int d, long iterations);

}  // namespace glmmc
