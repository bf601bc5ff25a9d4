#include "fraclap/validation.hpp"

#include <cmath>
#include <numbers>

#include "fraclap/errors.hpp"
#include "fraclap/reference_oracles.hpp"

namespace fraclap {

namespace {

ValidationRow row(std::string name, double deviation, double tolerance) {
    return {std::move(name), deviation, tolerance, deviation <= tolerance};
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

long double series_2f1(long double a, long double b, long double c, long double w) {
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int k = 0; k < 5000; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * w;
        sum += term;
        if (std::abs(term) < 1e-22L * std::abs(sum)) break;
    }
    return sum;
}

std::vector<ValidationRow> gamma_suite() {
    std::vector<ValidationRow> rows;
    rows.push_back(row("Gamma(1/2) = sqrt(pi)", rel(gamma_fn(0.5), std::sqrt(std::numbers::pi)), 1e-13));
    rows.push_back(row("Gamma(5) = 24", rel(gamma_fn(5.0), 24.0), 1e-13));
    rows.push_back(row("Gamma(-1/2) = -2 sqrt(pi)", rel(gamma_fn(-0.5), -2.0 * std::sqrt(std::numbers::pi)), 1e-13));
    double worst = 0.0;
    for (int k = 1; k <= 9; ++k) {
        const double x = 0.1 * k;
        worst = std::max(worst, std::abs(gamma_fn(x) * gamma_fn(1.0 - x) * std::sin(std::numbers::pi * x) /
                                             std::numbers::pi - 1.0));
    }
    rows.push_back(row("reflection x in {0.1..0.9}", worst, 1e-12));
    return rows;
}

std::vector<ValidationRow> hyp_suite() {
    std::vector<ValidationRow> rows;
    rows.push_back(row("1F1(1;1;-1) = e^-1", rel(hyp1f1(1.0, 1.0, -1.0).value, std::exp(-1.0)), 1e-14));
    rows.push_back(row("1F1(0.63;0.5;-4) vs Maclaurin",
                       rel(hyp1f1(0.63, 0.5, -4.0).value, hyp1f1_taylor(0.63, 0.5, -4.0, 200)), 1e-10));
    double worst = 0.0;
    for (int n = 1; n <= 4; ++n) {
        for (double s : {0.13, 0.4, 0.5, 0.67, 0.8}) {
            const double a = s + 0.5 * n;
            const double b = 0.5 * n;
            const double x = kHyp1f1SwitchPoint;
            worst = std::max(worst, rel(detail::hyp1f1_asymptotic(a, b, x).value,
                                        detail::hyp1f1_kummer_series(a, b, x).value));
        }
    }
    rows.push_back(row("1F1 branch overlap at the switch point", worst, 1e-9));
    rows.push_back(row("2F1(1,1;2;-1) = ln 2", rel(hyp2f1(1.0, 1.0, 2.0, -1.0).value, std::numbers::ln2), 1e-14));
    rows.push_back(row("2F1(1.5,1.1;0.5;-9) vs 1/z route",
                       rel(hyp2f1(1.5, 1.1, 0.5, -9.0).value, hyp2f1_inverse_route(1.5, 1.1, 0.5, -9.0)), 1e-10));
    return rows;
}

std::vector<ValidationRow> lemma_suite() {
    std::vector<ValidationRow> rows;
    double chain = 0.0;
    for (double mu : {-0.5, -1.0, -4.0}) {
        for (double s : {0.2, 0.5, 0.8}) {
            const QuadratureCheck i1 = lemma_I1_oracle(mu, s);
            const QuadratureCheck i2 = lemma_I2_oracle(mu, s);
            const std::string tag = "(mu=" + std::to_string(mu) + ", s=" + std::to_string(s) + ")";
            rows.push_back(row("I1 " + tag, rel(i1.numeric, i1.closed), 1e-6));
            rows.push_back(row("I2 " + tag, rel(i2.numeric, i2.closed), 1e-6));
            chain = std::max(chain, rel(i2.closed, i1.closed / gamma_fn(1.0 + s)));
        }
    }
    rows.push_back(row("I2 = I1 / Gamma(1+s)", chain, 1e-12));
    return rows;
}

}  // namespace

double hyp2f1_inverse_route(double a, double b, double c, double z) {
    if (!(z < -1.0)) throw ParameterError("inverse route needs z < -1");
    if (std::abs(a - b - std::nearbyint(a - b)) < 1e-12) throw ParameterError("inverse route needs a - b non-integer");
    using ld = long double;
    const auto g = [](ld x) { return std::tgamma(x); };
    const auto rg = [](ld x) { return x <= 0 && x == std::nearbyint(x) ? 0.0L : 1.0L / std::tgamma(x); };
    const ld A = a, B = b, C = c;
    const ld w = 1.0L / z;
    const ld mz = -static_cast<ld>(z);
    const ld t1 = g(C) * g(B - A) * rg(B) * rg(C - A) * std::pow(mz, -A) * series_2f1(A, A - C + 1.0L, A - B + 1.0L, w);
    const ld t2 = g(C) * g(A - B) * rg(A) * rg(C - B) * std::pow(mz, -B) * series_2f1(B, B - C + 1.0L, B - A + 1.0L, w);
    return static_cast<double>(t1 + t2);
}

double hyp1f1_taylor(double a, double b, double z, int terms) {
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int k = 0; k < terms; ++k) {
        term *= (static_cast<long double>(a) + k) / ((static_cast<long double>(b) + k) * (k + 1)) * z;
        sum += term;
    }
    return static_cast<double>(sum);
}

std::vector<ValidationRow> run_validation_suite(const std::string& suite) {
    if (suite == "gamma") return gamma_suite();
    if (suite == "hyp") return hyp_suite();
    if (suite == "lemmas") return lemma_suite();
    throw ParameterError("unknown suite '" + suite + "' (expected lemmas, hyp or gamma)");
}

}  // namespace fraclap
