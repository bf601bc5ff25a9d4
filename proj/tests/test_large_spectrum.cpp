#include <gtest/gtest.h>

#include <cmath>

#include "fraclap/eigen_factor.hpp"
#include "fraclap/fields.hpp"
#include "fraclap/frac_laplacian.hpp"
#include "fraclap/frac_p_laplacian.hpp"

using namespace fraclap;

namespace {

constexpr std::size_t kN = 5000;

const FactorPtr& large_factor() {
    static const FactorPtr f = make_factor(kN);
    return f;
}

}  // namespace

TEST(LargeSpectrum, ConditionNumberOfEigenvectors) {
    const double kappa = condition_number(large_factor()->P);
    RecordProperty("kappa", std::to_string(kappa));
    // Expected near 448.75; the roundoff in P depends on the eigensolver.
    EXPECT_NEAR(kappa, 448.75, 5e-3 * 448.75);
}

TEST(LargeSpectrum, ExtremeEigenvalues) {
    const SpectralFactor& f = *large_factor();
    EXPECT_NEAR(f.lambda(0), -2.4826e7, 1e-4 * 2.4826e7);
    EXPECT_EQ(f.lambda(kN - 1), 0.0);
    EXPECT_LT(f.lambda(kN - 2), 0.0);
    EXPECT_LE(std::abs(f.raw_zero_lambda), 1e-8);
}

TEST(LargeSpectrum, OneDimensionalPLaplacianAtPEqualsTwo) {
    const std::size_t dims[] = {kN};
    const double scales[] = {490.0};
    const auto grids = make_grids(dims, scales);
    const FracPOperator op = build_fracplap({large_factor()}, {490.0}, 0.4, 2.0);
    const NdArray U = make_field(FieldSpec{}, grids);
    const NdArray exact = exact_fraclap_field(FieldSpec{}, 0.4, grids);
    const NdArray batch = apply_plap_batched(op, U);
    const double err = max_abs_diff(batch, exact);
    RecordProperty("batch_error", std::to_string(err));
    // Expected near 1e-12 for both evaluation modes.
    EXPECT_LE(err, 1e-11);
    const NdArray loop = apply_plap_pointwise(op, U);
    EXPECT_LE(max_abs_diff(loop, batch), 1e-13);
}
