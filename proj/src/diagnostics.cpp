#include "glmmc/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "glmmc/errors.hpp"
#include "glmmc/stats.hpp"

namespace glmmc {

double w2_1d(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw EmptySamples("w2_1d: empty sample set");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const size_t na = a.size(), nb = b.size();
  // integrate (F_a^{-1}(t) - F_b^{-1}(t))^2 over the merged quantile grid
  double acc = 0;
  size_t i = 0, j = 0;
  double t = 0;
  while (i < na && j < nb) {
    const double ta = static_cast<double>(i + 1) / na;
    const double tb = static_cast<double>(j + 1) / nb;
    const double tn = std::min(ta, tb);
    const double diff = a[i] - b[j];
    acc += diff * diff * (tn - t);
    t = tn;
    if (ta <= tn + 1e-18) ++i;
    if (tb <= tn + 1e-18) ++j;
  }
  return std::sqrt(std::max(acc, 0.0));
}

double w2_1d_vs_quantile(std::vector<double> a,
                         const std::function<double(double)>& quantile) {
  if (a.empty()) throw EmptySamples("w2_1d_vs_quantile: empty sample set");
  std::sort(a.begin(), a.end());
  const size_t n = a.size();
  // 7-point Gauss-Legendre on each quantile cell [i/n, (i+1)/n]
  static const double gl_x[7] = {-0.9491079123427585, -0.7415311855993945,
                                 -0.4058451513773972, 0.0,
                                 0.4058451513773972,  0.7415311855993945,
                                 0.9491079123427585};
  static const double gl_w[7] = {0.1294849661688697, 0.2797053914892766,
                                 0.3818300505051189, 0.4179591836734694,
                                 0.3818300505051189, 0.2797053914892766,
                                 0.1294849661688697};
  double acc = 0;
  const double width = 1.0 / static_cast<double>(n);
  for (size_t i = 0; i < n; ++i) {
    const double lo = i * width;
    double cell = 0;
    for (int k = 0; k < 7; ++k) {
      const double t = lo + 0.5 * width * (1.0 + gl_x[k]);
      const double diff = a[i] - quantile(t);
      cell += gl_w[k] * diff * diff;
    }
    acc += 0.5 * width * cell;
  }
  return std::sqrt(std::max(acc, 0.0));
}

namespace {

Eigen::VectorXd random_direction(int d, Rng& rng) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v[i] = rng.normal();
  v.normalize();
  return v;
}

}  // namespace

double sliced_w2(const Eigen::MatrixXd& samples_a,
                 const Eigen::MatrixXd& samples_b, int n_proj, Rng& rng) {
  if (samples_a.rows() == 0 || samples_b.rows() == 0)
    throw EmptySamples("sliced_w2: empty sample set");
  if (samples_a.cols() != samples_b.cols())
    throw DimensionMismatch("sliced_w2: sample dimensions differ");
  const int d = static_cast<int>(samples_a.cols());
  double acc = 0;
  for (int k = 0; k < n_proj; ++k) {
    const Eigen::VectorXd v = random_direction(d, rng);
    const Eigen::VectorXd pa = samples_a * v;
    const Eigen::VectorXd pb = samples_b * v;
    acc += w2_1d(std::vector<double>(pa.data(), pa.data() + pa.size()),
                 std::vector<double>(pb.data(), pb.data() + pb.size()));
  }
  return acc / n_proj;
}

double sliced_w2_vs_std_normal(const Eigen::MatrixXd& samples, int n_proj,
                               Rng& rng) {
  if (samples.rows() == 0) throw EmptySamples("sliced_w2: empty sample set");
  const int d = static_cast<int>(samples.cols());
  double acc = 0;
  for (int k = 0; k < n_proj; ++k) {
    const Eigen::VectorXd v = random_direction(d, rng);
    const Eigen::VectorXd p = samples * v;
    acc += w2_1d_vs_quantile(std::vector<double>(p.data(), p.data() + p.size()),
                             [](double t) { return normal_quantile(t); });
  }
  return acc / n_proj;
}

TvEstimate marginal_tv(std::vector<double> samples,
                       const std::function<double(double)>& cdf) {
  if (samples.empty()) throw EmptySamples("marginal_tv: empty sample set");
  std::sort(samples.begin(), samples.end());
  const size_t n = samples.size();

  TvEstimate out;
  // KS on the sorted sample
  for (size_t i = 0; i < n; ++i) {
    const double F = cdf(samples[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    out.ks = std::max(out.ks, std::max(std::abs(F - lo), std::abs(F - hi)));
  }

  // Freedman-Diaconis width
  const double q1 = samples[static_cast<size_t>(0.25 * (n - 1))];
  const double q3 = samples[static_cast<size_t>(0.75 * (n - 1))];
  double width = 2.0 * (q3 - q1) / std::cbrt(static_cast<double>(n));
  if (!(width > 0)) width = 1e-3 * (1.0 + std::abs(samples.back()));
  const double lo = samples.front(), hi = samples.back();
  const int bins =
      std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));

  std::vector<double> counts(bins, 0.0);
  for (double s : samples) {
    int b = static_cast<int>((s - lo) / width);
    b = std::clamp(b, 0, bins - 1);
    counts[b] += 1.0;
  }
  double l1 = 0;
  for (int b = 0; b < bins; ++b) {
    const double edge_lo = lo + b * width;
    const double edge_hi = std::min(lo + (b + 1) * width, hi);
    const double q = cdf(edge_hi) - cdf(edge_lo);
    l1 += std::abs(counts[b] / static_cast<double>(n) - q);
  }
  l1 += cdf(lo) + (1.0 - cdf(hi));  // reference mass outside the sample range
  out.tv = 0.5 * l1;
  return out;
}

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
  return marginal_tv(std::move(samples), cdf).ks;
}

double ess(const std::vector<double>& series) {
  const size_t n = series.size();
  if (n < 10) throw EmptySamples("ess: need at least 10 points");
  double mean = 0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  double var = 0;
  for (double v : series) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  if (!(var > 0)) return 1.0;  // constant series

  auto gamma = [&](size_t lag) {
    double acc = 0;
    for (size_t i = 0; i + lag < n; ++i)
      acc += (series[i] - mean) * (series[i + lag] - mean);
    return acc / static_cast<double>(n);
  };

  // Geyer initial positive sequence on paired autocovariances
  double tau = 1.0;
  for (size_t k = 1; 2 * k + 1 < n; ++k) {
    const double pair = gamma(2 * k - 1) + gamma(2 * k);
    if (pair <= 0) break;
    tau += 2.0 * pair / var;
  }
  const double e = static_cast<double>(n) / tau;
  return std::max(1.0, e);
}

ContractionStats coupled_contraction(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad_u,
    int dim, const HmcParams& params, int trials, Rng& rng,
    double init_spread) {
  ContractionStats st;
  st.trials = trials;
  double sum = 0;
  for (int t = 0; t < trials; ++t) {
    HmcState a, b;
    a.theta = Eigen::VectorXd(dim);
    for (int i = 0; i < dim; ++i) a.theta[i] = init_spread * rng.normal();
    Eigen::VectorXd dir(dim);
    for (int i = 0; i < dim; ++i) dir[i] = rng.normal();
    if (dir.norm() > 0) dir.normalize();
    b.theta = a.theta + init_spread * dir;

    const double before = (a.theta - b.theta).squaredNorm();
    hmc_iterate_coupled(a, b, params, grad_u, rng, rng);
    const double after = (a.theta - b.theta).squaredNorm();
    const double ratio = before > 0 ? after / before : 0.0;  // 0/0 -> 0
    st.max_ratio = std::max(st.max_ratio, ratio);
    sum += ratio;
  }
  st.mean_ratio = trials > 0 ? sum / trials : 0.0;
  return st;
}

}  // namespace glmmc
