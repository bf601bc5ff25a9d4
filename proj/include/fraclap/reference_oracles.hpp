#pragma once

#include <cstddef>

namespace fraclap {

struct HypergeometricResult {
    double value = 0.0;
    std::size_t terms_used = 0;
    bool converged = false;
};

/// Euler Gamma. Throws PoleError at nonpositive integers.
double gamma_fn(double x);

/// 1 / Gamma(x), equal to 0 at the poles.
double rgamma_fn(double x);

/// Confluent 1F1(a; b; z) for b > 0 and z <= 0.
///
/// Summed as e^z 1F1(b - a; b; -z) for -z <= kHyp1f1SwitchPoint and by the
/// large-argument expansion beyond it. A terminating Kummer series is summed
/// directly for any z.
HypergeometricResult hyp1f1(double a, double b, double z);

inline constexpr double kHyp1f1SwitchPoint = 50.0;

/// Gauss 2F1(a, b; c; z) for c > 0 and z <= 0.
///
/// z is mapped to w = z / (z - 1) in [0, 1). For w > 1/2 the series is
/// re-expanded about w = 1, which needs b - a outside the integers.
HypergeometricResult hyp2f1(double a, double b, double c, double z);

/// (-Delta)^s exp(-|x|^2) at |x|^2 = r2 in n dimensions.
double exact_fraclap_gaussian(double s, int n, double r2);

/// (-Delta)^s (1 + |x|^2)^(-r) at |x|^2 = r2 in n dimensions.
double exact_fraclap_algebraic(double s, double r, int n, double r2);

struct QuadratureCheck {
    double numeric = 0.0;
    double closed = 0.0;
    /// |Q(m) - Q(m/2)| between the working and half-resolution rules.
    double error_estimate = 0.0;
};

/// int_0^inf mu t^(s-1) / (t - mu) dt against -pi csc(pi s) (-mu)^s.
QuadratureCheck lemma_I1_oracle(double mu, double s);

/// int_0^inf (e^(mu t) - 1) / t^(1+s) dt against Gamma(-s) (-mu)^s.
QuadratureCheck lemma_I2_oracle(double mu, double s);

namespace detail {

HypergeometricResult hyp1f1_kummer_series(double a, double b, double x);
HypergeometricResult hyp1f1_asymptotic(double a, double b, double x);
HypergeometricResult hyp2f1_series(double a, double b, double c, double w);

/// Panels per dyadic band in the graded midpoint rule of the lemma oracles.
inline constexpr std::size_t kPanelsPerBand = 2048;
inline constexpr std::size_t kBands = 64;

}  // namespace detail

}  // namespace fraclap
