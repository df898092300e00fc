#pragma once

// Distances between sample sets and references, coupling contraction
// statistics, and effective sample size.

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "glmmc/hmc.hpp"
#include "glmmc/rng.hpp"

namespace glmmc {

// Exact 1-D Wasserstein-2 between two empirical measures (quantile coupling;
// sizes may differ).
double w2_1d(std::vector<double> a, std::vector<double> b);

// Exact 1-D Wasserstein-2 between an empirical measure and a continuous
// distribution given by its quantile function.
double w2_1d_vs_quantile(std::vector<double> a,
                         const std::function<double(double)>& quantile);

// Sliced W2: average over n_proj random unit directions of the exact 1-D W2
// between the projected samples. Rows are samples. Deterministic given rng.
double sliced_w2(const Eigen::MatrixXd& samples_a,
                 const Eigen::MatrixXd& samples_b, int n_proj, Rng& rng);

// Sliced W2 against N(0, I): every projection of the reference is exactly
// standard normal, so the 1-D reference quantile is closed-form.
double sliced_w2_vs_std_normal(const Eigen::MatrixXd& samples, int n_proj,
                               Rng& rng);

struct TvEstimate {
  double tv = 0;  // half L1 distance between histogram and reference mass
  double ks = 0;  // Kolmogorov-Smirnov statistic
};

// Histogram TV with Freedman-Diaconis bin width against an exact CDF,
// reported with the KS statistic.
TvEstimate marginal_tv(std::vector<double> samples,
                       const std::function<double(double)>& cdf);

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);

// Effective sample size via Geyer's initial positive sequence; >= 1.
double ess(const std::vector<double>& series);

struct ContractionStats {
  double max_ratio = 0;
  double mean_ratio = 0;
  int trials = 0;
};

// Runs `trials` synchronously coupled pairs one HMC iteration each and
// reports the per-step squared-distance ratios |dtheta'|^2 / |dtheta|^2.
// Zero initial distance counts as ratio 0.
ContractionStats coupled_contraction(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad_u,
    int dim, const HmcParams& params, int trials, Rng& rng,
    double init_spread = 1.0);

}  // namespace glmmc
