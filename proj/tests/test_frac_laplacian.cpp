#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "fraclap/errors.hpp"
#include "fraclap/fields.hpp"
#include "fraclap/frac_laplacian.hpp"

using namespace fraclap;

namespace {

FactorPtr diagonal_factor(std::initializer_list<double> lambda) {
    auto f = std::make_shared<SpectralFactor>();
    f->N = lambda.size();
    f->lambda = Eigen::Map<const Vector>(std::data(lambda), static_cast<Eigen::Index>(lambda.size()));
    const auto n = static_cast<Eigen::Index>(f->N);
    f->P = Matrix::Identity(n, n);
    f->Pinv = Matrix::Identity(n, n);
    f->zero_index = f->N - 1;
    return f;
}

NdArray random_field(const Shape& shape, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    NdArray a(shape);
    for (std::size_t k = 0; k < a.size(); ++k) a[k] = dist(rng);
    return a;
}

double rel_max(const NdArray& a, const NdArray& b) { return max_abs_diff(a, b) / std::max(a.max_abs(), b.max_abs()); }

}  // namespace

TEST(BuildFracLap, PowTensorExamples) {
    const FracLapOperator a = build_fraclap({diagonal_factor({-1.0, 0.0})}, {1.0}, 0.5);
    EXPECT_EQ(a.pow_tensor[0], 1.0);
    EXPECT_EQ(a.pow_tensor[1], 0.0);
    const FracLapOperator b = build_fraclap({diagonal_factor({-4.0, 0.0})}, {2.0}, 0.5);
    EXPECT_EQ(b.pow_tensor[0], 1.0);
    EXPECT_EQ(b.pow_tensor[1], 0.0);
}

TEST(BuildFracLap, RejectsBoundaryOrders) {
    const auto f = diagonal_factor({-2.0, 0.0});
    EXPECT_THROW(build_fraclap({f, f}, {1.0, 1.0}, 1.0), ParameterError);
    EXPECT_THROW(build_fraclap({f, f}, {1.0, 1.0}, 0.0), ParameterError);
    EXPECT_THROW(build_fraclap({f, f}, {1.0}, 0.5), ParameterError);
}

TEST(BuildFracLap, PowTensorHasOneZero) {
    const FracLapOperator op = build_fraclap({make_factor(11), make_factor(8)}, {2.0, 3.0}, 0.37);
    std::size_t zeros = 0;
    for (std::size_t k = 0; k < op.pow_tensor.size(); ++k) {
        EXPECT_GE(op.pow_tensor[k], 0.0);
        zeros += op.pow_tensor[k] == 0.0;
    }
    EXPECT_EQ(zeros, 1u);
}

TEST(ApplyFracLap, ConstantsAreAnnihilated) {
    const FracLapOperator op = build_fraclap({make_factor(20), make_factor(17)}, {1.0, 4.0}, 0.6);
    const NdArray ones(op.shape(), 1.0);
    EXPECT_LE(apply_fraclap(op, ones).max_abs(), 1e-8);
}

TEST(ApplyFracLap, Linearity) {
    std::mt19937 rng(11);
    const FracLapOperator op = build_fraclap({make_factor(12), make_factor(9)}, {2.0, 1.5}, 0.3);
    for (int trial = 0; trial < 5; ++trial) {
        const NdArray U = random_field(op.shape(), rng);
        const NdArray V = random_field(op.shape(), rng);
        const double a = 1.7;
        const double b = -0.4;
        NdArray mix(op.shape());
        for (std::size_t k = 0; k < mix.size(); ++k) mix[k] = a * U[k] + b * V[k];
        const NdArray lhs = apply_fraclap(op, mix);
        const NdArray fu = apply_fraclap(op, U);
        const NdArray fv = apply_fraclap(op, V);
        NdArray rhs(op.shape());
        for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] = a * fu[k] + b * fv[k];
        EXPECT_LE(rel_max(lhs, rhs), 1e-12);
    }
}

TEST(ApplyFracLap, EvenFieldsStayEven) {
    const std::size_t dims[] = {21, 16};
    const double scales[] = {3.0, 2.5};
    const auto grids = make_grids(dims, scales);
    const FracLapOperator op = build_fraclap({make_factor(21), make_factor(16)}, {3.0, 2.5}, 0.45);
    const NdArray U = make_field(FieldSpec{FieldSpec::Kind::Lorentzian, 1.5}, grids);
    const NdArray R = apply_fraclap(op, U);
    for (std::size_t i = 1; i <= 21; ++i) {
        for (std::size_t j = 1; j <= 16; ++j) {
            EXPECT_LE(std::abs(R.at({i, j}) - R.at({22 - i, 17 - j})), 1e-10 * R.max_abs());
            EXPECT_LE(std::abs(R.at({i, j}) - R.at({22 - i, j})), 1e-10 * R.max_abs());
        }
    }
}

TEST(ApplyFracLap, NearUnitOrderApproachesMinusLaplacian) {
    const std::size_t N = 64;
    const double L = 3.0;
    for (std::size_t n : {1u, 2u}) {
        const std::vector<std::size_t> dims(n, N);
        const std::vector<double> scales(n, L);
        const auto grids = make_grids(dims, scales);
        const NdArray U = make_field(FieldSpec{}, grids);
        const FracLapOperator op = build_fraclap(std::vector<FactorPtr>(n, make_factor(N)), scales, 1.0 - 1e-6);
        const NdArray frac = apply_fraclap(op, U);
        const Matrix Dxx = build_diff_matrices(grids[0]).Dxx / (L * L);
        NdArray minus_lap(U.shape());
        for (std::size_t j = 0; j < n; ++j) {
            const NdArray d = mode_product(Dxx, U, j);
            for (std::size_t k = 0; k < d.size(); ++k) minus_lap[k] -= d[k];
        }
        EXPECT_LE(max_abs_diff(frac, minus_lap) / minus_lap.max_abs(), 1e-3) << "n=" << n;
    }
}

TEST(ApplyFracLap, MatchesKroneckerMatrixFunction) {
    // vec(P_2 []_2 P_1 []_1 X) = (P_2 kron P_1) vec(X) with first-index-fastest vec.
    const FactorPtr f1 = make_factor(6);
    const FactorPtr f2 = make_factor(5);
    const FracLapOperator op = build_fraclap({f1, f2}, {1.3, 0.8}, 0.55);
    const Matrix P = Eigen::kroneckerProduct(f2->P, f1->P).eval();
    Vector mu(30);
    for (Eigen::Index b = 0; b < 5; ++b) {
        for (Eigen::Index a = 0; a < 6; ++a) mu(a + 6 * b) = f1->lambda(a) / (1.3 * 1.3) + f2->lambda(b) / (0.8 * 0.8);
    }
    const Vector powers = (-mu.array()).max(0.0).pow(0.55).matrix();
    const Matrix full = P * powers.asDiagonal() * P.inverse();
    std::mt19937 rng(5);
    const NdArray U = random_field({6, 5}, rng);
    const Vector expect = full * Eigen::Map<const Vector>(U.data().data(), 30);
    const NdArray got = apply_fraclap(op, U);
    for (Eigen::Index k = 0; k < 30; ++k) EXPECT_NEAR(got[static_cast<std::size_t>(k)], expect(k), 1e-11 * expect.cwiseAbs().maxCoeff());
}

TEST(ApplyFracLap, GaussianAgainstClosedForm) {
    const std::size_t dims[] = {128};
    const double scales[] = {3.5};
    const auto grids = make_grids(dims, scales);
    const FracLapOperator op = build_fraclap({make_factor(128)}, {3.5}, 0.5);
    const NdArray err_field = apply_fraclap(op, make_field(FieldSpec{}, grids));
    EXPECT_LE(max_abs_diff(err_field, exact_fraclap_field(FieldSpec{}, 0.5, grids)), 1e-10);
}

TEST(ApplyFracLap, RejectsShapeMismatch) {
    const FracLapOperator op = build_fraclap({make_factor(6)}, {1.0}, 0.5);
    EXPECT_THROW(apply_fraclap(op, NdArray({5})), ParameterError);
    EXPECT_THROW(apply_fraclap(op, NdArray({6, 1})), ParameterError);
}
