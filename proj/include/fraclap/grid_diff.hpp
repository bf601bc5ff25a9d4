#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace fraclap {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Mapped first-kind Chebyshev nodes for one coordinate.
///
/// The angles xi_j = pi (2j - 1) / (2N) are equispaced in (0, pi) and the
/// physical nodes are x_j = L cot(xi_j), so x is strictly decreasing and
/// antisymmetric about the middle index.
struct Grid1D {
    std::size_t N = 0;
    double L = 0.0;
    Vector xi;
    Vector x;
};

/// Behavior imposed on U(xi) = u(L cot xi) across xi = pi.
enum class ExtensionKind { Even, Odd, Periodic };

/// Unscaled differentiation matrices: Dx approximates L d/dx and Dxx
/// approximates L^2 d^2/dx^2 at the grid nodes.
struct DiffMatrices {
    Matrix Dx;
    Matrix Dxx;
    ExtensionKind extension = ExtensionKind::Even;
};

Grid1D make_grid(std::size_t N, double L);

/// First row of the periodic first-derivative matrix on 2N points, extended
/// to length 3N with c[2N + j] = c[j]. Entry k of the result is c_{k+1}.
Vector first_row_dxi(std::size_t N);

/// Same layout as first_row_dxi, for the second-derivative matrix.
Vector first_row_dxixi(std::size_t N);

/// First ceil(N/2) rows of C * Itilde for a Toeplitz block C whose first
/// row (extended to length 3N) is `c`.
Matrix folded_rows(const Vector& c, ExtensionKind extension, std::size_t N);

DiffMatrices build_diff_matrices(const Grid1D& grid, ExtensionKind extension = ExtensionKind::Even);

/// Scaled derivatives (1/L) Dx u and (1/L^2) Dxx u.
std::pair<Vector, Vector> differentiate(const DiffMatrices& dm, std::span<const double> samples, double L);

namespace detail {

/// Every angle handed to cot or sin^-2 while filling the first-row vectors.
std::vector<double> first_row_angles(std::size_t N);

/// All N rows of C * Itilde using the same index recipe as folded_rows.
Matrix folded_rows_full(const Vector& c, ExtensionKind extension, std::size_t N);

}  // namespace detail

}  // namespace fraclap
