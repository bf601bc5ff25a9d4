#include "fraclap/ndarray.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

void require_valid_shape(const Shape& shape) {
    if (shape.empty()) {
        throw ParameterError("shape must have at least one dimension");
    }
    for (std::size_t n : shape) {
        if (n == 0) throw ParameterError("shape extents must be positive");
    }
}

struct AxisSplit {
    std::size_t prefix = 1;
    std::size_t extent = 1;
    std::size_t suffix = 1;
};

AxisSplit split_axis(const Shape& shape, std::size_t axis) {
    AxisSplit s;
    for (std::size_t k = 0; k < axis; ++k) s.prefix *= shape[k];
    s.extent = shape[axis];
    for (std::size_t k = axis + 1; k < shape.size(); ++k) s.suffix *= shape[k];
    return s;
}

void check_mode_args(const Matrix& A, const NdArray& U, std::size_t axis) {
    if (axis >= U.rank()) {
        throw ParameterError("mode product axis " + std::to_string(axis) + " out of range for rank " +
                             std::to_string(U.rank()));
    }
    if (static_cast<std::size_t>(A.cols()) != U.extent(axis)) {
        throw ParameterError("matrix has " + std::to_string(A.cols()) + " columns but dimension " +
                             std::to_string(axis) + " has extent " + std::to_string(U.extent(axis)));
    }
    if (A.rows() == 0) {
        throw ParameterError("mode product matrix has no rows");
    }
}

}  // namespace

NdArray::NdArray(Shape shape, double fill) : shape_(std::move(shape)) {
    require_valid_shape(shape_);
    data_.assign(shape_product(shape_), fill);
}

NdArray::NdArray(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
    require_valid_shape(shape_);
    if (data_.size() != shape_product(shape_)) {
        throw ParameterError("data length " + std::to_string(data_.size()) + " does not match shape product " +
                             std::to_string(shape_product(shape_)));
    }
}

double NdArray::at(const IndexTuple& tuple) const { return data_[flat_index(shape_, tuple) - 1]; }

double& NdArray::at(const IndexTuple& tuple) { return data_[flat_index(shape_, tuple) - 1]; }

double NdArray::max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

std::size_t shape_product(const Shape& shape) {
    std::size_t p = 1;
    for (std::size_t n : shape) p *= n;
    return p;
}

std::size_t flat_index(const Shape& shape, const IndexTuple& tuple) {
    if (tuple.size() != shape.size()) {
        throw ParameterError("tuple rank does not match shape rank");
    }
    std::size_t flat = 0;
    std::size_t stride = 1;
    for (std::size_t k = 0; k < shape.size(); ++k) {
        if (tuple[k] < 1 || tuple[k] > shape[k]) {
            throw ParameterError("tuple index " + std::to_string(tuple[k]) + " out of range in dimension " +
                                 std::to_string(k + 1));
        }
        flat += (tuple[k] - 1) * stride;
        stride *= shape[k];
    }
    return flat + 1;
}

IndexTuple decode_flat(const Shape& shape, std::size_t flat) {
    if (flat < 1 || flat > shape_product(shape)) {
        throw ParameterError("flat index out of range");
    }
    IndexTuple t(shape.size());
    std::size_t rem = flat - 1;
    for (std::size_t k = 0; k < shape.size(); ++k) {
        t[k] = rem % shape[k] + 1;
        rem /= shape[k];
    }
    return t;
}

TupleWalker::TupleWalker(Shape shape) : shape_(std::move(shape)), tuple_(shape_), flat_(shape_product(shape_)) {
    require_valid_shape(shape_);
}

void TupleWalker::advance() {
    if (flat_ == 0) return;
    --flat_;
    for (std::size_t k = 0; k < shape_.size(); ++k) {
        if (tuple_[k] > 1) {
            --tuple_[k];
            return;
        }
        tuple_[k] = shape_[k];
    }
}

std::vector<std::pair<IndexTuple, std::size_t>> tuple_iter(const Shape& shape) {
    std::vector<std::pair<IndexTuple, std::size_t>> out;
    out.reserve(shape_product(shape));
    for (TupleWalker w(shape); !w.done(); w.advance()) {
        out.emplace_back(w.tuple(), w.flat());
    }
    return out;
}

NdArray mode_product(const Matrix& A, const NdArray& U, std::size_t axis) {
    check_mode_args(A, U, axis);
    const AxisSplit sp = split_axis(U.shape(), axis);
    const auto m = static_cast<std::size_t>(A.rows());
    Shape out_shape = U.shape();
    out_shape[axis] = m;
    NdArray out(out_shape);

    const double* in = U.data().data();
    double* dst = out.data().data();
    const auto prefix = static_cast<Eigen::Index>(sp.prefix);
    const auto extent = static_cast<Eigen::Index>(sp.extent);
    const auto rows = static_cast<Eigen::Index>(m);

    if (sp.prefix == 1) {
        // Contracted dimension is the fastest one: a single (m x N) * (N x suffix).
        Eigen::Map<const Matrix> src(in, extent, static_cast<Eigen::Index>(sp.suffix));
        Eigen::Map<Matrix> res(dst, rows, static_cast<Eigen::Index>(sp.suffix));
        res.noalias() = A * src;
        return out;
    }
    if (sp.suffix == 1) {
        Eigen::Map<const Matrix> src(in, prefix, extent);
        Eigen::Map<Matrix> res(dst, prefix, rows);
        res.noalias() = src * A.transpose();
        return out;
    }
    const Matrix At = A.transpose();
    const auto batches = static_cast<std::ptrdiff_t>(sp.suffix);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < batches; ++b) {
        Eigen::Map<const Matrix> src(in + b * prefix * extent, prefix, extent);
        Eigen::Map<Matrix> res(dst + b * prefix * rows, prefix, rows);
        res.noalias() = src * At;
    }
    return out;
}

NdArray mode_product_chain(std::span<const Matrix* const> mats, const NdArray& U) {
    if (mats.size() != U.rank()) {
        throw ParameterError("mode product chain needs one matrix per dimension");
    }
    NdArray cur = U;
    for (std::size_t j = 0; j < mats.size(); ++j) {
        cur = mode_product(*mats[j], cur, j);
    }
    return cur;
}

NdArray eigen_sum_tensor(std::span<const Vector> lambdas, std::span<const double> scales) {
    if (lambdas.empty() || lambdas.size() != scales.size()) {
        throw ParameterError("eigen_sum_tensor needs one scale per eigenvalue vector");
    }
    Shape shape;
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
        if (!(scales[j] > 0.0)) throw ParameterError("scales must be positive");
        if (lambdas[j].size() == 0) throw ParameterError("eigenvalue vectors must be non-empty");
        shape.push_back(static_cast<std::size_t>(lambdas[j].size()));
    }
    NdArray out(shape);
    // Accumulate one dimension at a time over the fastest-first layout.
    std::size_t stride = 1;
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
        const double inv_l2 = 1.0 / (scales[j] * scales[j]);
        const std::size_t n = shape[j];
        for (std::size_t flat = 0; flat < out.size(); ++flat) {
            const std::size_t i = (flat / stride) % n;
            out[flat] += lambdas[j](static_cast<Eigen::Index>(i)) * inv_l2;
        }
        stride *= n;
    }
    return out;
}

NdArray hadamard_pow_neg(const NdArray& T, double e) {
    if (!(e > 0.0)) throw ParameterError("Hadamard power exponent must be positive");
    const double tol = kPositiveEntryTolerance * T.max_abs();
    NdArray out(T.shape());
    for (std::size_t k = 0; k < T.size(); ++k) {
        const double v = T[k];
        if (v > tol) {
            throw NumericalError(NumericalError::Kind::PositiveEntry,
                                 "entry " + std::to_string(k + 1) + " equals " + std::to_string(v) + " > 0");
        }
        out[k] = v < 0.0 ? std::pow(-v, e) : 0.0;
    }
    return out;
}

NdArray hadamard_product(const NdArray& a, const NdArray& b) {
    if (a.shape() != b.shape()) throw ParameterError("Hadamard product needs equal shapes");
    NdArray out(a.shape());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * b[k];
    return out;
}

namespace reference {

NdArray mode_product(const Matrix& A, const NdArray& U, std::size_t axis) {
    check_mode_args(A, U, axis);
    const AxisSplit sp = split_axis(U.shape(), axis);
    const std::size_t m = static_cast<std::size_t>(A.rows());
    Shape out_shape = U.shape();
    out_shape[axis] = m;
    NdArray out(out_shape);
    for (std::size_t b = 0; b < sp.suffix; ++b) {
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t a = 0; a < sp.prefix; ++a) {
                double acc = 0.0;
                for (std::size_t k = 0; k < sp.extent; ++k) {
                    acc += A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) *
                           U[a + sp.prefix * (k + sp.extent * b)];
                }
                out[a + sp.prefix * (i + m * b)] = acc;
            }
        }
    }
    return out;
}

}  // namespace reference

}  // namespace fraclap
