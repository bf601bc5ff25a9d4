#pragma once

#include <cstddef>

#include "fraclap/grid_diff.hpp"

namespace fraclap {

/// Diagonalization Dxx = P diag(lambda) P^-1 with the theoretically zero
/// eigenvalue repaired.
///
/// Eigenvalues are sorted ascending, so the repaired zero mode sits in the
/// last slot (zero_index == N - 1) and its eigenvector column is the constant
/// N^-1/2 vector. Immutable after construction.
struct SpectralFactor {
    std::size_t N = 0;
    Matrix P;
    Matrix Pinv;
    Vector lambda;
    std::size_t zero_index = 0;
    /// Eigenvalue of smallest modulus as returned by the solver, before repair.
    double raw_zero_lambda = 0.0;
};

/// Relative tolerance on imaginary parts of the computed spectrum.
inline constexpr double kImagTolerance = 1e-6;

SpectralFactor factorize(const Matrix& Dxx);

/// Spectral-norm condition number sigma_max / sigma_min.
double condition_number(const Matrix& P);

}  // namespace fraclap
