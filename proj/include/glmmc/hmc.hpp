#pragma once

// Unadjusted HMC with either a Verlet integrator (u = 0) or a randomized
// midpoint integrator (u = 1).
//
// One inner step from (q, p):
//   u = 0:  q' = q + h p - (h^2/2) grad U(q)
//           p' = p - (h/2)(grad U(q) + grad U(q'))
//   u = 1:  q' = q + h p - (h^2/2) grad U(q + s p),  s ~ Unif(0, h)
//           p' = p - h grad U(q + s p)
// An outer iteration refreshes p ~ N(0, I) and runs T/h inner steps. For
// Verlet the gradient at q' is kept and reused as the next step's gradient at
// q, and across outer iterations (momentum refresh does not move q), so each
// inner step costs one fresh gradient for both integrators.

#include <Eigen/Dense>
#include <utility>

#include "glmmc/errors.hpp"
#include "glmmc/rng.hpp"
#include "glmmc/theory.hpp"

namespace glmmc {

struct HmcState {
  Eigen::VectorXd theta;
  Eigen::VectorXd grad_cache;  // grad U(theta); empty until first use (u = 0)
  long iter = 0;
  long grad_evals = 0;
};

// Single inner step. `grad_q` must hold grad U(q) on entry when u = 0 and is
// left holding grad U(q') on exit; it is ignored for u = 1. Returns the
// number of fresh gradient evaluations.
template <class GradFn>
inline int hmc_inner_step(Eigen::VectorXd& q, Eigen::VectorXd& p,
                          GradFn&& grad_u, double h, int u, double u_mid,
                          Eigen::VectorXd& grad_q,
                          Eigen::VectorXd& scratch) {
  if (u == 0) {
    q.noalias() += h * p - (0.5 * h * h) * grad_q;
    scratch = grad_u(q);
    if (!scratch.allFinite())
      throw NonFiniteGradient("HMC Verlet step hit a non-finite gradient");
    p.noalias() -= (0.5 * h) * (grad_q + scratch);
    grad_q.swap(scratch);
    return 1;
  }
  scratch = q + u_mid * p;
  const Eigen::VectorXd g = grad_u(scratch);
  if (!g.allFinite())
    throw NonFiniteGradient("HMC midpoint step hit a non-finite gradient");
  q.noalias() += h * p - (0.5 * h * h) * g;
  p.noalias() -= h * g;
  return 1;
}

// One outer iteration. `mid` is called once per inner step when u = 1 and
// must return a value in [0, h]; pass an Rng-backed callable for the standard
// algorithm or a fixed-value callable in tests.
template <class GradFn, class MidFn>
void hmc_iterate(HmcState& st, const HmcParams& prm, GradFn&& grad_u,
                 Rng& momentum_rng, MidFn&& mid) {
  const long steps = prm.steps_per_iteration();
  Eigen::VectorXd p(st.theta.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = momentum_rng.normal();

  Eigen::VectorXd scratch(st.theta.size());
  if (prm.integrator == 0 && st.grad_cache.size() != st.theta.size()) {
    st.grad_cache = grad_u(st.theta);
    ++st.grad_evals;
  }
  for (long i = 0; i < steps; ++i) {
    const double s = prm.integrator == 1 ? mid() : 0.0;
    st.grad_evals += hmc_inner_step(st.theta, p, grad_u, prm.step,
                                    prm.integrator, s, st.grad_cache, scratch);
  }
  ++st.iter;
}

template <class GradFn>
void hmc_iterate(HmcState& st, const HmcParams& prm, GradFn&& grad_u,
                 Rng& momentum_rng, Rng& midpoint_rng) {
  hmc_iterate(st, prm, std::forward<GradFn>(grad_u), momentum_rng,
              [&] { return midpoint_rng.uniform(0.0, prm.step); });
}

// Synchronously coupled pair: both chains consume the same momentum draw and
// the same midpoint draws.
template <class GradFn, class MidFn>
void hmc_iterate_coupled(HmcState& a, HmcState& b, const HmcParams& prm,
                         GradFn&& grad_u, Rng& momentum_rng, MidFn&& mid) {
  const long steps = prm.steps_per_iteration();
  Eigen::VectorXd v(a.theta.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = momentum_rng.normal();
  Eigen::VectorXd pa = v;
  Eigen::VectorXd pb = v;

  Eigen::VectorXd scratch(a.theta.size());
  if (prm.integrator == 0) {
    if (a.grad_cache.size() != a.theta.size()) {
      a.grad_cache = grad_u(a.theta);
      ++a.grad_evals;
    }
    if (b.grad_cache.size() != b.theta.size()) {
      b.grad_cache = grad_u(b.theta);
      ++b.grad_evals;
    }
  }
  for (long i = 0; i < steps; ++i) {
    const double s = prm.integrator == 1 ? mid() : 0.0;
    a.grad_evals += hmc_inner_step(a.theta, pa, grad_u, prm.step,
                                   prm.integrator, s, a.grad_cache, scratch);
    b.grad_evals += hmc_inner_step(b.theta, pb, grad_u, prm.step,
                                   prm.integrator, s, b.grad_cache, scratch);
  }
  ++a.iter;
  ++b.iter;
}

template <class GradFn>
void hmc_iterate_coupled(HmcState& a, HmcState& b, const HmcParams& prm,
                         GradFn&& grad_u, Rng& momentum_rng,
                         Rng& midpoint_rng) {
  hmc_iterate_coupled(a, b, prm, std::forward<GradFn>(grad_u), momentum_rng,
                      [&] { return midpoint_rng.uniform(0.0, prm.step); });
}

}  // namespace glmmc
