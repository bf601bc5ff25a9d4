#include "fraclap/grid_diff.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

void require_order(std::size_t N) {
    if (N < 2) {
        throw ParameterError("grid needs at least 2 nodes, got N=" + std::to_string(N));
    }
}

double sign_pow(std::size_t j) { return (j % 2 == 0) ? 1.0 : -1.0; }

// Angle pi (j - 1) / (2N) for 2 <= j <= N; always inside (0, pi/2).
double row_angle(std::size_t j, std::size_t N) {
    return std::numbers::pi * static_cast<double>(j - 1) / static_cast<double>(2 * N);
}

// c is stored 0-based: c(k) holds c_{k+1}.
template <typename Entry>
Vector fill_first_row(std::size_t N, Entry&& interior, double at_1, double at_n1, double mirror_sign) {
    require_order(N);
    Vector c = Vector::Zero(static_cast<Eigen::Index>(3 * N));
    auto at = [&](std::size_t j) -> double& { return c(static_cast<Eigen::Index>(j - 1)); };
    at(1) = at_1;
    at(N + 1) = at_n1;
    for (std::size_t j = 2; j <= N; ++j) {
        at(j) = interior(j);
    }
    for (std::size_t j = N + 2; j <= 2 * N; ++j) {
        at(j) = mirror_sign * at(2 * N - j + 2);
    }
    for (std::size_t j = 2 * N + 1; j <= 3 * N; ++j) {
        at(j) = at(j - 2 * N);
    }
    return c;
}

Matrix fold(const Vector& c, ExtensionKind extension, std::size_t N, std::size_t rows) {
    if (static_cast<std::size_t>(c.size()) != 3 * N) {
        throw ParameterError("first-row vector must have length 3N=" + std::to_string(3 * N) + ", got " +
                             std::to_string(c.size()));
    }
    Matrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(N));
    const double sigma = extension == ExtensionKind::Odd ? -1.0 : 1.0;
    // 1-based recipe: index1 = 2N+1+j-i, index2 = 2N-j-i (Even/Odd) or N+1+j-i
    // (Periodic), with 0-based i, j here.
    for (std::size_t j = 0; j < N; ++j) {
        for (std::size_t i = 0; i < rows; ++i) {
            const std::size_t index1 = 2 * N + 1 + j - i;
            const std::size_t index2 = extension == ExtensionKind::Periodic ? N + 1 + j - i : 2 * N - j - i;
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                c(static_cast<Eigen::Index>(index1 - 1)) + sigma * c(static_cast<Eigen::Index>(index2 - 1));
        }
    }
    return out;
}

}  // namespace

Grid1D make_grid(std::size_t N, double L) {
    require_order(N);
    if (!(L > 0.0) || !std::isfinite(L)) {
        throw ParameterError("map scale L must be positive and finite, got " + std::to_string(L));
    }
    Grid1D g;
    g.N = N;
    g.L = L;
    g.xi.resize(static_cast<Eigen::Index>(N));
    g.x.resize(static_cast<Eigen::Index>(N));
    for (std::size_t j = 1; j <= N; ++j) {
        const double xi = std::numbers::pi * static_cast<double>(2 * j - 1) / static_cast<double>(2 * N);
        g.xi(static_cast<Eigen::Index>(j - 1)) = xi;
    }
    // Fill the upper half and mirror, so x_{N+1-j} = -x_j holds exactly and
    // the middle node of an odd grid is exactly zero.
    for (std::size_t j = 1; j <= N / 2; ++j) {
        const double x = L / std::tan(g.xi(static_cast<Eigen::Index>(j - 1)));
        g.x(static_cast<Eigen::Index>(j - 1)) = x;
        g.x(static_cast<Eigen::Index>(N - j)) = -x;
    }
    if (N % 2 == 1) {
        g.x(static_cast<Eigen::Index>(N / 2)) = 0.0;
    }
    return g;
}

Vector first_row_dxi(std::size_t N) {
    auto interior = [N](std::size_t j) { return 0.5 * sign_pow(j) / std::tan(row_angle(j, N)); };
    return fill_first_row(N, interior, 0.0, 0.0, -1.0);
}

Vector first_row_dxixi(std::size_t N) {
    auto interior = [N](std::size_t j) {
        const double s = std::sin(row_angle(j, N));
        return 0.5 * sign_pow(j) / (s * s);
    };
    const double n = static_cast<double>(N);
    return fill_first_row(N, interior, -(2.0 * n * n + 1.0) / 6.0, -0.5 * sign_pow(N), 1.0);
}

Matrix folded_rows(const Vector& c, ExtensionKind extension, std::size_t N) {
    require_order(N);
    return fold(c, extension, N, (N + 1) / 2);
}

DiffMatrices build_diff_matrices(const Grid1D& grid, ExtensionKind extension) {
    const std::size_t N = grid.N;
    require_order(N);
    if (static_cast<std::size_t>(grid.xi.size()) != N) {
        throw ParameterError("grid angle vector does not match N");
    }
    const bool even = extension == ExtensionKind::Even;
    // Odd and Periodic extensions do not enjoy the centro-symmetry used to
    // fill the bottom half, so all rows are folded directly for them.
    const std::size_t rows = even ? (N + 1) / 2 : N;
    const Matrix f1 = fold(first_row_dxi(N), extension, N, rows);
    const Matrix f2 = fold(first_row_dxixi(N), extension, N, rows);

    const auto n = static_cast<Eigen::Index>(N);
    DiffMatrices dm;
    dm.extension = extension;
    dm.Dx.resize(n, n);
    dm.Dxx.resize(n, n);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(rows); ++i) {
        const double s = std::sin(grid.xi(i));
        const double s2 = s * s;
        const double sin2xi = std::sin(2.0 * grid.xi(i));
        dm.Dx.row(i) = -s2 * f1.row(i);
        dm.Dxx.row(i) = (s2 * s2) * f2.row(i) - sin2xi * dm.Dx.row(i);
    }
    if (even) {
        for (Eigen::Index i = static_cast<Eigen::Index>(rows); i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                dm.Dx(i, j) = -dm.Dx(n - 1 - i, n - 1 - j);
                dm.Dxx(i, j) = dm.Dxx(n - 1 - i, n - 1 - j);
            }
        }
    }
    return dm;
}

std::pair<Vector, Vector> differentiate(const DiffMatrices& dm, std::span<const double> samples, double L) {
    if (static_cast<Eigen::Index>(samples.size()) != dm.Dx.cols()) {
        throw ParameterError("sample vector length " + std::to_string(samples.size()) + " does not match N=" +
                             std::to_string(dm.Dx.cols()));
    }
    if (!(L > 0.0)) {
        throw ParameterError("map scale L must be positive");
    }
    const Eigen::Map<const Vector> u(samples.data(), static_cast<Eigen::Index>(samples.size()));
    Vector ux = dm.Dx * u / L;
    Vector uxx = dm.Dxx * u / (L * L);
    return {std::move(ux), std::move(uxx)};
}

namespace detail {

std::vector<double> first_row_angles(std::size_t N) {
    require_order(N);
    std::vector<double> out;
    out.reserve(N - 1);
    for (std::size_t j = 2; j <= N; ++j) {
        out.push_back(row_angle(j, N));
    }
    return out;
}

Matrix folded_rows_full(const Vector& c, ExtensionKind extension, std::size_t N) {
    require_order(N);
    return fold(c, extension, N, N);
}

}  // namespace detail

}  // namespace fraclap
