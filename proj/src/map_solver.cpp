#include "glmmc/map_solver.hpp"

#include <cmath>

namespace glmmc {

namespace {

// Backtracking line search along `dir` from `theta`; returns the accepted
// point and updates `fval`. Descent is guaranteed for any direction with
// grad.dot(dir) < 0.
bool armijo_step(const Posterior& post, Eigen::VectorXd& theta, double& fval,
                 const Eigen::VectorXd& grad, const Eigen::VectorXd& dir,
                 const MapOptions& opts) {
  const double slope = grad.dot(dir);
  double step = 1.0;
  for (int k = 0; k < opts.max_halvings; ++k) {
    const Eigen::VectorXd cand = theta + step * dir;
    const double fcand = post.potential(cand);
    if (std::isfinite(fcand) && fcand <= fval + opts.armijo * step * slope) {
      theta = cand;
      fval = fcand;
      return true;
    }
    step *= 0.5;
  }
  return false;
}

}  // namespace

MapResult find_map(const Posterior& post, const Eigen::VectorXd& theta_init,
                   const MapOptions& opts) {
  MapResult res;
  Eigen::VectorXd theta = theta_init;
  double fval = post.potential(theta);
  Eigen::VectorXd grad = post.grad(theta);
  const double gref = 1.0 + grad.norm();

  for (int it = 0; it < opts.max_iter; ++it) {
    res.grad_norm = grad.norm();
    if (res.grad_norm <= opts.tol * gref) {
      res.theta_map = theta;
      res.iterations = it;
      res.converged = true;
      return res;
    }

    const Eigen::MatrixXd h = post.hess(theta);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
    Eigen::VectorXd dir;
    bool newton_ok = ldlt.info() == Eigen::Success;
    if (newton_ok) {
      dir = ldlt.solve(-grad);
      // reject non-descent or non-finite directions
      newton_ok = dir.allFinite() && grad.dot(dir) < 0;
    }
    if (!newton_ok) dir = -grad;  // fallback: plain gradient step

    if (!armijo_step(post, theta, fval, grad, dir, opts)) {
      if (!newton_ok || !armijo_step(post, theta, fval, grad, dir = -grad,
                                     opts)) {
        break;  // no further descent possible at this scale
      }
    }
    grad = post.grad(theta);
  }

  res.theta_map = theta;
  res.grad_norm = grad.norm();
  res.iterations = opts.max_iter;
  res.converged = res.grad_norm <= opts.tol * gref;
  return res;
}

}  // namespace glmmc
