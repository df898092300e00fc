#pragma once

// Damped Newton solver for the posterior critical point, with Armijo
// backtracking on the potential and a gradient-step fallback when the Hessian
// solve fails.

#include <Eigen/Dense>

#include "glmmc/posterior.hpp"

namespace glmmc {

struct MapResult {
  Eigen::VectorXd theta_map;
  double grad_norm = 0;
  int iterations = 0;
  bool converged = false;
  double distance_to_truth = -1;  // |theta_map - theta*| when theta* is known
};

struct MapOptions {
  double tol = 1e-10;     // relative: |grad| <= tol * (1 + |grad(init)|)
  int max_iter = 200;
  double armijo = 1e-4;
  int max_halvings = 50;
};

// Scale-aware default tolerance.
inline double default_map_tol(int n, double lambda_max_sigma) {
  return 1e-8 * static_cast<double>(n) * lambda_max_sigma;
}

MapResult find_map(const Posterior& post, const Eigen::VectorXd& theta_init,
                   const MapOptions& opts = {});

inline MapResult find_map(const Posterior& post, const MapOptions& opts = {}) {
  return find_map(post, Eigen::VectorXd::Zero(post.dim()), opts);
}

// |theta_map - theta*| <= lambda_max(Sigma)^{-1/2}
inline bool check_map_radius(const MapResult& res,
                             const Eigen::VectorXd& theta_star,
                             double lambda_max_sigma) {
  return (res.theta_map - theta_star).norm() <=
         1.0 / std::sqrt(lambda_max_sigma);
}

}  // namespace glmmc
