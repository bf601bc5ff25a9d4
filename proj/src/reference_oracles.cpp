#include "fraclap/reference_oracles.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

constexpr std::size_t kMaxTerms = 200000;
constexpr double kTermStop = 1e-17;
constexpr double kConvergedBound = 1e-15;
constexpr double kIntegerTolerance = 1e-12;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::nearbyint(x); }

bool near_integer(double x) { return std::abs(x - std::nearbyint(x)) < kIntegerTolerance; }

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw ParameterError(std::string(what) + " must be finite");
}

double pow2(double e) { return std::exp2(e); }

template <typename F>
double graded_midpoint(F&& f, double alpha, std::size_t bands, std::size_t panels) {
    // Dyadic bands (2^-(k+1), 2^-k] of the unit interval, each split into
    // equal midpoint panels; the piece below 2^-bands uses f ~ C y^alpha.
    double total = 0.0;
    double hi = 1.0;
    for (std::size_t k = 0; k < bands; ++k) {
        const double lo = 0.5 * hi;
        const double h = (hi - lo) / static_cast<double>(panels);
        double band = 0.0;
        for (std::size_t i = 0; i < panels; ++i) {
            band += f(lo + (static_cast<double>(i) + 0.5) * h);
        }
        total += band * h;
        hi = lo;
    }
    return total + f(hi) * hi / (alpha + 1.0);
}

void require_lemma_args(double mu, double s) {
    if (!(mu < 0.0) || !std::isfinite(mu)) throw ParameterError("mu must be negative and finite");
    if (!(s > 0.0 && s < 1.0)) throw ParameterError("s must lie in (0,1)");
}

QuadratureCheck finish(double fine, double coarse, double closed) {
    if (!std::isfinite(fine) || !std::isfinite(coarse)) {
        throw NumericalError(NumericalError::Kind::NoConvergence, "lemma quadrature produced a non-finite value");
    }
    return {fine, closed, std::abs(fine - coarse)};
}

// e^x - 1 - x without cancellation for small |x|.
double expm1_minus_linear(double x) {
    if (std::abs(x) >= 0.1) return std::expm1(x) - x;
    double term = 0.5 * x * x;
    double sum = term;
    for (int k = 3; k < 40 && std::abs(term) > 1e-18 * std::abs(sum); ++k) {
        term *= x / k;
        sum += term;
    }
    return sum;
}

}  // namespace

double gamma_fn(double x) {
    require_finite(x, "Gamma argument");
    if (is_nonpositive_integer(x)) {
        throw NumericalError(NumericalError::Kind::PoleError, "Gamma has a pole at " + std::to_string(x));
    }
    return std::tgamma(x);
}

double rgamma_fn(double x) {
    if (is_nonpositive_integer(x)) return 0.0;
    return 1.0 / std::tgamma(x);
}

namespace detail {

HypergeometricResult hyp1f1_kummer_series(double a, double b, double x) {
    // e^-x * sum (b-a)_k / (b)_k x^k / k!
    const double c = b - a;
    double term = 1.0;
    double sum = 1.0;
    std::size_t k = 0;
    for (; k < kMaxTerms; ++k) {
        term *= (c + static_cast<double>(k)) / ((b + static_cast<double>(k)) * static_cast<double>(k + 1)) * x;
        sum += term;
        if (term == 0.0) break;
        if (static_cast<double>(k) > x && std::abs(term) <= kTermStop * std::abs(sum)) break;
    }
    HypergeometricResult r;
    r.terms_used = k + 1;
    r.converged = std::abs(term) <= kConvergedBound * std::abs(sum) && std::isfinite(sum);
    r.value = std::exp(-x) * sum;
    return r;
}

HypergeometricResult hyp1f1_asymptotic(double a, double b, double x) {
    // Gamma(b)/Gamma(b-a) x^-a sum (a)_k (a-b+1)_k / k! x^-k, truncated at
    // the smallest term.
    const double d = a - b + 1.0;
    double term = 1.0;
    double sum = 1.0;
    double last = 1.0;
    std::size_t k = 0;
    for (; k < kMaxTerms; ++k) {
        const double next =
            term * (a + static_cast<double>(k)) * (d + static_cast<double>(k)) / (static_cast<double>(k + 1) * x);
        if (next == 0.0) {
            last = 0.0;
            break;
        }
        if (std::abs(next) > std::abs(term)) break;
        term = next;
        sum += term;
        last = term;
        if (std::abs(term) <= kTermStop * std::abs(sum)) break;
    }
    HypergeometricResult r;
    r.terms_used = k + 1;
    r.converged = std::abs(last) <= kConvergedBound * std::abs(sum) && std::isfinite(sum);
    r.value = std::tgamma(b) * rgamma_fn(b - a) * std::pow(x, -a) * sum;
    return r;
}

HypergeometricResult hyp2f1_series(double a, double b, double c, double w) {
    double term = 1.0;
    double sum = 1.0;
    std::size_t k = 0;
    for (; k < kMaxTerms; ++k) {
        const double kk = static_cast<double>(k);
        const double ratio = (a + kk) * (b + kk) / ((c + kk) * (kk + 1.0)) * w;
        term *= ratio;
        sum += term;
        if (term == 0.0) break;
        if (std::abs(ratio) < 1.0 && std::abs(term) <= kTermStop * std::abs(sum)) break;
    }
    HypergeometricResult r;
    r.terms_used = k + 1;
    r.converged = std::abs(term) <= kConvergedBound * std::abs(sum) && std::isfinite(sum);
    r.value = sum;
    return r;
}

}  // namespace detail

HypergeometricResult hyp1f1(double a, double b, double z) {
    require_finite(a, "a");
    require_finite(z, "z");
    if (!(b > 0.0)) throw ParameterError("1F1 needs b > 0");
    if (z > 0.0) throw ParameterError("1F1 is implemented for z <= 0 only");
    if (z == 0.0) return {1.0, 0, true};
    const double x = -z;
    const bool terminating = is_nonpositive_integer(b - a);
    const bool series_first = terminating || x <= kHyp1f1SwitchPoint;

    HypergeometricResult r =
        series_first ? detail::hyp1f1_kummer_series(a, b, x) : detail::hyp1f1_asymptotic(a, b, x);
    if (r.converged) return r;
    HypergeometricResult alt =
        series_first ? detail::hyp1f1_asymptotic(a, b, x) : detail::hyp1f1_kummer_series(a, b, x);
    if (alt.converged && !terminating) return alt;
    throw NumericalError(NumericalError::Kind::NoConvergence,
                         "1F1(" + std::to_string(a) + "; " + std::to_string(b) + "; " + std::to_string(z) +
                             ") did not converge on either branch");
}

HypergeometricResult hyp2f1(double a, double b, double c, double z) {
    require_finite(a, "a");
    require_finite(b, "b");
    require_finite(z, "z");
    if (!(c > 0.0)) throw ParameterError("2F1 needs c > 0");
    if (z > 0.0) throw ParameterError("2F1 is implemented for z <= 0 only");
    if (z == 0.0) return {1.0, 0, true};

    // Pfaff: F(a,b;c;z) = (1-z)^-a F(a, c-b; c; w), w = z/(z-1) in (0,1).
    const double bp = c - b;
    const double w = z / (z - 1.0);
    const double one_minus_w = 1.0 / (1.0 - z);
    const double pref = std::pow(1.0 - z, -a);

    HypergeometricResult r;
    if (w <= 0.5 || is_nonpositive_integer(a) || is_nonpositive_integer(bp)) {
        r = detail::hyp2f1_series(a, bp, c, w);
        r.value *= pref;
    } else {
        const double d = c - a - bp;
        if (near_integer(d)) {
            throw NumericalError(NumericalError::Kind::NoConvergence,
                                 "2F1 degenerate parameters: b - a = " + std::to_string(d) + " is an integer");
        }
        const HypergeometricResult f1 = detail::hyp2f1_series(a, bp, 1.0 - d, one_minus_w);
        const HypergeometricResult f2 = detail::hyp2f1_series(c - a, c - bp, d + 1.0, one_minus_w);
        const double gc = std::tgamma(c);
        const double t1 = gc * std::tgamma(d) * rgamma_fn(c - a) * rgamma_fn(c - bp) * f1.value;
        const double t2 = std::pow(one_minus_w, d) * gc * std::tgamma(-d) * rgamma_fn(a) * rgamma_fn(bp) * f2.value;
        r.value = pref * (t1 + t2);
        r.terms_used = f1.terms_used + f2.terms_used;
        r.converged = f1.converged && f2.converged && std::isfinite(r.value);
    }
    if (!r.converged) {
        throw NumericalError(NumericalError::Kind::NoConvergence,
                             "2F1(" + std::to_string(a) + ", " + std::to_string(b) + "; " + std::to_string(c) +
                                 "; " + std::to_string(z) + ") did not converge");
    }
    return r;
}

double exact_fraclap_gaussian(double s, int n, double r2) {
    if (!(s >= 0.0) || n < 1 || !(r2 >= 0.0)) throw ParameterError("need s >= 0, n >= 1, r2 >= 0");
    const double h = 0.5 * n;
    return pow2(2.0 * s) * gamma_fn(s + h) / gamma_fn(h) * hyp1f1(s + h, h, -r2).value;
}

double exact_fraclap_algebraic(double s, double r, int n, double r2) {
    if (!(s >= 0.0) || !(r > 0.0) || n < 1 || !(r2 >= 0.0)) {
        throw ParameterError("need s >= 0, r > 0, n >= 1, r2 >= 0");
    }
    const double h = 0.5 * n;
    const double pref = pow2(2.0 * s) * gamma_fn(s + r) * gamma_fn(s + h) / (gamma_fn(r) * gamma_fn(h));
    return pref * hyp2f1(s + r, s + h, h, -r2).value;
}

QuadratureCheck lemma_I1_oracle(double mu, double s) {
    require_lemma_args(mu, s);
    const auto integrand = [mu, s](double t, double jac) { return mu * std::pow(t, s - 1.0) / (t - mu) * jac; };
    // x = t/(1+t) maps (0, inf) to (0, 1); each half is integrated in the
    // distance y to its singular endpoint, rescaled to (0, 1].
    const auto near_zero = [&](double u) {
        const double y = 0.5 * u;
        const double om = 1.0 - y;
        return 0.5 * integrand(y / om, 1.0 / (om * om));
    };
    const auto near_one = [&](double u) {
        const double y = 0.5 * u;
        return 0.5 * integrand((1.0 - y) / y, 1.0 / (y * y));
    };
    auto rule = [&](std::size_t m) {
        return graded_midpoint(near_zero, s - 1.0, detail::kBands, m) +
               graded_midpoint(near_one, -s, detail::kBands, m);
    };
    const double closed = -std::numbers::pi / std::sin(std::numbers::pi * s) * std::pow(-mu, s);
    return finish(rule(detail::kPanelsPerBand), rule(detail::kPanelsPerBand / 2), closed);
}

QuadratureCheck lemma_I2_oracle(double mu, double s) {
    require_lemma_args(mu, s);
    // (0,1]: the linear part of e^(mu t) - 1 integrates to mu / (1 - s).
    const auto inner = [mu, s](double t) { return expm1_minus_linear(mu * t) / std::pow(t, 1.0 + s); };
    // [1,inf): t = 1/y.
    const auto outer = [mu, s](double y) { return std::expm1(mu / y) * std::pow(y, s - 1.0); };
    auto rule = [&](std::size_t m) {
        return graded_midpoint(inner, 1.0 - s, detail::kBands, m) + mu / (1.0 - s) +
               graded_midpoint(outer, s - 1.0, detail::kBands, m);
    };
    const double closed = gamma_fn(-s) * std::pow(-mu, s);
    return finish(rule(detail::kPanelsPerBand), rule(detail::kPanelsPerBand / 2), closed);
}

}  // namespace fraclap
