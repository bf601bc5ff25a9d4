#include "fraclap/eigen_factor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <lapacke.h>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

struct RawEigen {
    Vector re;
    Vector im;
    Matrix vr;
};

RawEigen general_eigen(const Matrix& A) {
    const auto n = static_cast<lapack_int>(A.rows());
    Matrix work = A;
    RawEigen out{Vector(n), Vector(n), Matrix(n, n)};
    double vl_dummy = 0.0;
    const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'V', n, work.data(), n, out.re.data(),
                                          out.im.data(), &vl_dummy, 1, out.vr.data(), n);
    if (info != 0) {
        throw NumericalError(NumericalError::Kind::NonRealSpectrum,
                             "dgeev failed to converge (info=" + std::to_string(info) + ")");
    }
    return out;
}

}  // namespace

SpectralFactor factorize(const Matrix& Dxx) {
    if (Dxx.rows() != Dxx.cols() || Dxx.rows() < 2) {
        throw ParameterError("factorize expects a square matrix of order >= 2");
    }
    const Eigen::Index n = Dxx.rows();
    RawEigen raw = general_eigen(Dxx);

    const double max_mod = std::sqrt((raw.re.array().square() + raw.im.array().square()).maxCoeff());
    const double max_imag = raw.im.cwiseAbs().maxCoeff();
    if (max_imag > kImagTolerance * max_mod) {
        throw NumericalError(NumericalError::Kind::NonRealSpectrum,
                             "max |Im lambda| = " + std::to_string(max_imag) + " exceeds " +
                                 std::to_string(kImagTolerance) + " * max |lambda|");
    }

    // dgeev stores a conjugate pair as (Re v, Im v) in consecutive columns.
    // Within tolerance both columns span the invariant subspace, so each is
    // kept as a real basis vector with unit length.
    Matrix P = raw.vr;
    for (Eigen::Index k = 0; k < n; ++k) {
        if (raw.im(k) != 0.0) {
            for (Eigen::Index c : {k, k + 1}) {
                const double nrm = P.col(c).norm();
                if (nrm > 0.0) P.col(c) /= nrm;
            }
            ++k;
        }
    }
    Vector lambda = raw.re;

    Eigen::Index zero = 0;
    lambda.cwiseAbs().minCoeff(&zero);
    SpectralFactor f;
    f.N = static_cast<std::size_t>(n);
    f.raw_zero_lambda = lambda(zero);
    lambda(zero) = 0.0;
    P.col(zero).setConstant(1.0 / std::sqrt(static_cast<double>(n)));

    for (Eigen::Index k = 0; k < n; ++k) {
        if (lambda(k) > 0.0) {
            throw NumericalError(NumericalError::Kind::PositiveEigenvalue,
                                 "eigenvalue " + std::to_string(lambda(k)) + " at index " + std::to_string(k) +
                                     " is positive after zero-mode repair");
        }
    }

    // Ascending order; the stable sort on (value, original index) keeps the
    // result reproducible for identical inputs.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return lambda(a) < lambda(b); });
    f.lambda.resize(n);
    f.P.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        f.lambda(k) = lambda(src);
        f.P.col(k) = P.col(src);
        if (src == zero) f.zero_index = static_cast<std::size_t>(k);
    }

    Eigen::PartialPivLU<Matrix> lu(f.P);
    const double rcond = lu.rcond();
    if (!(rcond > std::numeric_limits<double>::epsilon())) {
        throw NumericalError(NumericalError::Kind::SingularEigenvectors,
                             "eigenvector matrix is numerically singular (rcond=" + std::to_string(rcond) + ")");
    }
    f.Pinv = lu.inverse();
    if (!f.Pinv.allFinite()) {
        throw NumericalError(NumericalError::Kind::SingularEigenvectors, "inverse of P has non-finite entries");
    }
    return f;
}

double condition_number(const Matrix& P) {
    if (P.rows() != P.cols() || P.rows() == 0) {
        throw ParameterError("condition_number expects a non-empty square matrix");
    }
    const auto n = static_cast<lapack_int>(P.rows());
    Matrix work = P;
    Vector sv(n);
    double dummy = 0.0;
    const lapack_int info =
        LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', n, n, work.data(), n, sv.data(), &dummy, 1, &dummy, 1);
    if (info != 0) {
        throw NumericalError(NumericalError::Kind::SingularMatrix,
                             "singular value decomposition failed (info=" + std::to_string(info) + ")");
    }
    const double smax = sv.maxCoeff();
    const double smin = sv.minCoeff();
    if (!(smin > 0.0)) {
        throw NumericalError(NumericalError::Kind::SingularMatrix, "smallest singular value is zero");
    }
    return smax / smin;
}

}  // namespace fraclap
