#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "fraclap/grid_diff.hpp"

namespace fraclap {

using Shape = std::vector<std::size_t>;

/// 1-based index tuple (i_1, ..., i_n).
using IndexTuple = std::vector<std::size_t>;

/// Dense real n-dimensional array with the first dimension varying fastest:
/// flat = (i_1 - 1) + N_1 (i_2 - 1) + N_1 N_2 (i_3 - 1) + ...
///
/// For rank 2 the buffer is exactly a column-major N_1 x N_2 matrix.
class NdArray {
public:
    NdArray() = default;
    explicit NdArray(Shape shape, double fill = 0.0);
    NdArray(Shape shape, std::vector<double> data);

    const Shape& shape() const noexcept { return shape_; }
    std::size_t rank() const noexcept { return shape_.size(); }
    std::size_t size() const noexcept { return data_.size(); }
    std::size_t extent(std::size_t axis) const { return shape_.at(axis); }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    double& operator[](std::size_t flat) noexcept { return data_[flat]; }
    double operator[](std::size_t flat) const noexcept { return data_[flat]; }

    /// Access by 1-based tuple.
    double at(const IndexTuple& tuple) const;
    double& at(const IndexTuple& tuple);

    double max_abs() const noexcept;

private:
    Shape shape_;
    std::vector<double> data_;
};

std::size_t shape_product(const Shape& shape);

/// 1-based flat index of a 1-based tuple (fastest-first).
std::size_t flat_index(const Shape& shape, const IndexTuple& tuple);

/// Inverse of flat_index.
IndexTuple decode_flat(const Shape& shape, std::size_t flat);

/// Sequential tuple generator: starts at (N_1, ..., N_n) with flat index
/// prod N_j and counts down to (1, ..., 1) with flat index 1, decrementing
/// the first coordinate that is still above 1 and resetting the ones before.
class TupleWalker {
public:
    explicit TupleWalker(Shape shape);

    bool done() const noexcept { return flat_ == 0; }
    const IndexTuple& tuple() const noexcept { return tuple_; }
    std::size_t flat() const noexcept { return flat_; }
    void advance();

private:
    Shape shape_;
    IndexTuple tuple_;
    std::size_t flat_;
};

/// Every (tuple, flat index) pair in TupleWalker order.
std::vector<std::pair<IndexTuple, std::size_t>> tuple_iter(const Shape& shape);

/// Mode product A []_axis U: contracts the columns of A against dimension
/// `axis` (0-based) of U. The output replaces N_axis by A.rows().
///
/// Implemented as batched GEMMs over a (prefix, N_axis, suffix) view; the
/// batch loop runs under OpenMP when the suffix is large enough.
NdArray mode_product(const Matrix& A, const NdArray& U, std::size_t axis);

/// Applies mats[0] along axis 0, then mats[1] along axis 1, and so on.
NdArray mode_product_chain(std::span<const Matrix* const> mats, const NdArray& U);

/// Entry (i_1..i_n) = sum_j lambda_j[i_j] / L_j^2.
NdArray eigen_sum_tensor(std::span<const Vector> lambdas, std::span<const double> scales);

/// Entrywise (-T)^e for T <= 0, with 0^e = 0.
NdArray hadamard_pow_neg(const NdArray& T, double e);

inline constexpr double kPositiveEntryTolerance = 1e-12;

NdArray hadamard_product(const NdArray& a, const NdArray& b);

namespace reference {

/// Literal triple-sum mode product, serial. Kept as the oracle for the
/// blocked kernel.
NdArray mode_product(const Matrix& A, const NdArray& U, std::size_t axis);

}  // namespace reference

}  // namespace fraclap
