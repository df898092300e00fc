#pragma once

// Synthetic data under the paper-standard generating model: rows of the
// design are i.i.d. N(0, Sigma) and responses follow the canonical family at
// a true parameter theta*. Pure functions of (config, seed).

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>

#include "glmmc/family.hpp"
#include "glmmc/rng.hpp"

namespace glmmc {

struct SigmaStats {
  double lambda_max = 1;
  double lambda_min = 1;
  double trace = 1;
  double kappa() const { return lambda_max / lambda_min; }
};

struct SynthConfig {
  int n = 0;
  int d = 0;
  Eigen::MatrixXd sigma_chol;  // lower-triangular factor of Sigma
  Eigen::VectorXd theta_star;
  GlmFamily family;
  std::uint64_t seed = 0;

  static SynthConfig identity(int n, int d, Eigen::VectorXd theta_star,
                              GlmFamily family, std::uint64_t seed) {
    return {n, d, Eigen::MatrixXd::Identity(d, d), std::move(theta_star),
            family, seed};
  }

  Eigen::MatrixXd sigma() const { return sigma_chol * sigma_chol.transpose(); }

  SigmaStats sigma_stats() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma());
    return {es.eigenvalues().maxCoeff(), es.eigenvalues().minCoeff(),
            es.eigenvalues().sum()};
  }
};

// n x d matrix with rows i.i.d. N(0, Sigma); deterministic given cfg.seed
inline Eigen::MatrixXd sample_design(const SynthConfig& cfg, Rng& rng) {
  Eigen::MatrixXd z(cfg.n, cfg.d);
  for (int i = 0; i < cfg.n; ++i)
    for (int j = 0; j < cfg.d; ++j) z(i, j) = rng.normal();
  return z * cfg.sigma_chol.transpose();
}

inline Eigen::MatrixXd sample_design(const SynthConfig& cfg) {
  Rng rng(cfg.seed, 0, Stream::Design);
  return sample_design(cfg, rng);
}

// Y_i | X_i per family: Gaussian mean theta*.X_i (linear), Bernoulli with
// sigmoid link (logistic), Poisson with exp link. Rates above 1e12 are capped
// (overflow guard; never reached under the shipped configs).
inline Eigen::VectorXd sample_responses(const GlmFamily& family,
                                        const Eigen::VectorXd& theta_star,
                                        const Eigen::MatrixXd& x, Rng& rng,
                                        long* rate_cap_hits = nullptr) {
  const Eigen::VectorXd eta = x * theta_star;
  Eigen::VectorXd y(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    switch (family.kind) {
      case FamilyKind::Linear:
        y[i] = eta[i] + std::sqrt(family.dispersion) * rng.normal();
        break;
      case FamilyKind::Logistic:
        y[i] = rng.uniform() < sigmoid(eta[i]) ? 1.0 : 0.0;
        break;
      case FamilyKind::Poisson: {
        double rate = std::exp(eta[i]);
        if (rate > 1e12) {
          rate = 1e12;
          if (rate_cap_hits) ++*rate_cap_hits;
        }
        y[i] = static_cast<double>(rng.poisson(rate));
        break;
      }
    }
  }
  return y;
}

struct SynthData {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  long rate_cap_hits = 0;
};

inline SynthData generate(const SynthConfig& cfg) {
  SynthData out;
  Rng design_rng(cfg.seed, 0, Stream::Design);
  Rng response_rng(cfg.seed, 0, Stream::Response);
  out.x = sample_design(cfg, design_rng);
  out.y = sample_responses(cfg.family, cfg.theta_star, out.x, response_rng,
                           &out.rate_cap_hits);
  return out;
}

}  // namespace glmmc
