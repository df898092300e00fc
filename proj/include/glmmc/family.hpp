#pragma once

// Canonical-link GLM families: the log-partition A with its first two
// derivatives, the dispersion, and (for Poisson) an optional clipping radius
// past which A is replaced by its second-order Taylor extension, making A''
// bounded.

#include <cmath>
#include <limits>
#include <stdexcept>

namespace glmmc {

enum class FamilyKind { Linear, Logistic, Poisson };

struct FamilyEval {
  double a;        // A(z)
  double a1;       // A'(z)
  double a2;       // A''(z)
};

// Numerically stable sigmoid.
inline double sigmoid(double z) {
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

struct GlmFamily {
  FamilyKind kind = FamilyKind::Logistic;
  double dispersion = 1.0;  // sigma^2 for linear, 1 otherwise
  double clip_radius = std::numeric_limits<double>::infinity();  // Poisson only

  static GlmFamily linear(double sigma) {
    return {FamilyKind::Linear, sigma * sigma,
            std::numeric_limits<double>::infinity()};
  }
  static GlmFamily logistic() { return {FamilyKind::Logistic, 1.0,
            std::numeric_limits<double>::infinity()}; }
  static GlmFamily poisson(
      double clip = std::numeric_limits<double>::infinity()) {
    return {FamilyKind::Poisson, 1.0, clip};
  }

  bool clipped() const {
    return kind == FamilyKind::Poisson && std::isfinite(clip_radius);
  }

  FamilyEval eval(double z) const {
    switch (kind) {
      case FamilyKind::Linear:
        return {0.5 * z * z, z, 1.0};
      case FamilyKind::Logistic: {
        // A(z) = ln(1+e^z) = max(z,0) + log1p(e^{-|z|}); overflow-safe
        const double a = std::fmax(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
        const double s = sigmoid(z);
        return {a, s, s * (1.0 - s)};
      }
      case FamilyKind::Poisson: {
        if (z < clip_radius) {
          const double e = std::exp(z);
          return {e, e, e};
        }
        // quadratic extension beyond the clip radius
        const double er = std::exp(clip_radius);
        const double t = z - clip_radius;
        return {er * (1.0 + t + 0.5 * t * t), er * (1.0 + t), er};
      }
    }
    throw std::logic_error("unreachable family kind");
  }

  double a(double z) const { return eval(z).a; }
  double a1(double z) const { return eval(z).a1; }
  double a2(double z) const { return eval(z).a2; }

  // sup_z A''(z); infinite for unclipped Poisson
  double a2_sup() const {
    switch (kind) {
      case FamilyKind::Linear: return 1.0;
      case FamilyKind::Logistic: return 0.25;
      case FamilyKind::Poisson:
        return clipped() ? std::exp(clip_radius)
                         : std::numeric_limits<double>::infinity();
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

  // inf of A'' over the centered interval [-r, r]
  double a2_inf_ball(double r) const {
    switch (kind) {
      case FamilyKind::Linear: return 1.0;
      case FamilyKind::Logistic: return eval(r).a2;  // symmetric, min at |z|=r
      case FamilyKind::Poisson: return std::exp(-r);
    }
    return std::numeric_limits<double>::quiet_NaN();
  }
};

}  // namespace glmmc
