#include "fraclap/frac_p_laplacian.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fraclap/errors.hpp"
#include "fraclap/reference_oracles.hpp"

namespace fraclap {

namespace {

constexpr double kPoleTolerance = 1e-12;

void require_field(const FracPOperator& op, const NdArray& U) {
    if (U.shape() != op.shape()) {
        throw ParameterError("field shape does not match the operator grid");
    }
}

// Value at `tuple` (1-based) of P_n []_n ... P_1 []_1 V, contracting each
// dimension with one row of P_j. `work` is scratch of at least V's size.
double synthesize_at(const std::vector<FactorPtr>& factors, const IndexTuple& tuple, const double* v,
                     std::size_t total, std::vector<double>& work) {
    const double* src = v;
    std::size_t len = total;
    work.resize(total);
    double* dst = work.data();
    for (std::size_t j = 0; j < factors.size(); ++j) {
        const auto nj = static_cast<Eigen::Index>(factors[j]->N);
        const auto rest = static_cast<Eigen::Index>(len) / nj;
        // Current layout is (N_j, rest) column-major; the row of P_j
        // contracts the leading dimension.
        Eigen::Map<const Matrix> block(src, nj, rest);
        Eigen::Map<Vector> out(dst, rest);
        out.noalias() = block.transpose() * factors[j]->P.row(static_cast<Eigen::Index>(tuple[j] - 1)).transpose();
        src = dst;
        len = static_cast<std::size_t>(rest);
        dst += rest;
    }
    return *src;
}

}  // namespace

double phi_p(double t, double p) {
    if (t == 0.0) return 0.0;
    if (p == 2.0) return t;
    const double m = std::pow(std::abs(t), p - 1.0);
    return t > 0.0 ? m : -m;
}

double constant_C(int n, double s, double p) {
    if (n < 1) throw ParameterError("dimension must be positive");
    if (!(s > 0.0 && s < 1.0)) throw ParameterError("s must lie in (0,1), got " + std::to_string(s));
    if (!(p >= 1.0) || !std::isfinite(p)) throw ParameterError("p must be >= 1, got " + std::to_string(p));
    const double half = 0.5 * s * p;
    const double nearest = std::nearbyint(half);
    if (nearest >= 1.0 && std::abs(half - nearest) <= kPoleTolerance) {
        throw NumericalError(NumericalError::Kind::PoleError, "sp/2 is a positive integer");
    }
    const double num = std::sqrt(std::numbers::pi) * std::exp2(2.0 * s - s * p - 1.0) * gamma_fn(1.0 - half);
    return -num / (gamma_fn(0.5 * (p + 1.0)) * gamma_fn(1.0 - s));
}

Shape FracPOperator::shape() const { return pow_tensor.shape(); }

FracPOperator build_fracplap(std::vector<FactorPtr> factors, std::vector<double> scales, double s, double p) {
    FracPOperator op;
    op.c_const = constant_C(static_cast<int>(factors.size()), s, p);
    op.pow_tensor = scaled_pow_tensor(factors, scales, 0.5 * s * p);
    op.factors = std::move(factors);
    op.scales = std::move(scales);
    op.s = s;
    op.p = p;
    return op;
}

NdArray apply_plap_pointwise(const FracPOperator& op, const NdArray& U) {
    require_field(op, U);
    const Shape shape = op.shape();
    const std::size_t total = U.size();
    NdArray result(shape);
    const auto points = static_cast<std::ptrdiff_t>(total);

#pragma omp parallel
    {
        NdArray w(shape);
        std::vector<double> work;
#pragma omp for schedule(dynamic, 16)
        for (std::ptrdiff_t f = 0; f < points; ++f) {
            const double center = U[static_cast<std::size_t>(f)];
            for (std::size_t k = 0; k < total; ++k) w[k] = phi_p(center - U[k], op.p);
            NdArray modal = to_modal(op.factors, w);
            for (std::size_t k = 0; k < total; ++k) modal[k] *= op.pow_tensor[k];
            const IndexTuple tuple = decode_flat(shape, static_cast<std::size_t>(f) + 1);
            result[static_cast<std::size_t>(f)] =
                op.c_const * synthesize_at(op.factors, tuple, modal.data().data(), total, work);
        }
    }
    return result;
}

std::size_t batched_table_bytes(const FracPOperator& op) {
    const std::size_t total = op.total_points();
    return total * total * sizeof(double);
}

NdArray apply_plap_batched(const FracPOperator& op, const NdArray& U, std::size_t byte_budget) {
    require_field(op, U);
    const std::size_t bytes = batched_table_bytes(op);
    if (bytes > byte_budget) {
        throw NumericalError(NumericalError::Kind::MemoryGuard,
                             "difference table needs " + std::to_string(bytes) + " bytes, budget is " +
                                 std::to_string(byte_budget));
    }
    const Shape shape = op.shape();
    const std::size_t total = U.size();

    // Column c holds Phi_p(U[c] - U[k]) over k, viewed as an (n+1)-way array
    // whose last dimension indexes the centre point.
    Shape table_shape = shape;
    table_shape.push_back(total);
    NdArray table(table_shape);
    for (std::size_t c = 0; c < total; ++c) {
        const double center = U[c];
        double* col = table.data().data() + c * total;
        for (std::size_t k = 0; k < total; ++k) col[k] = phi_p(center - U[k], op.p);
    }
    for (std::size_t j = 0; j < op.factors.size(); ++j) table = mode_product(op.factors[j]->Pinv, table, j);
    for (std::size_t c = 0; c < total; ++c) {
        double* col = table.data().data() + c * total;
        for (std::size_t k = 0; k < total; ++k) col[k] *= op.pow_tensor[k];
    }

    // Only the diagonal of the synthesized table is needed: entry c of
    // column c.
    NdArray result(shape);
    std::vector<double> work;
    for (TupleWalker walker(shape); !walker.done(); walker.advance()) {
        const std::size_t c = walker.flat() - 1;
        result[c] = op.c_const * synthesize_at(op.factors, walker.tuple(), table.data().data() + c * total, total, work);
    }
    return result;
}

namespace reference {

NdArray apply_plap_pointwise(const FracPOperator& op, const NdArray& U) {
    require_field(op, U);
    const Shape shape = op.shape();
    const std::size_t total = U.size();
    NdArray result(shape);
    for (const auto& [tuple, flat] : tuple_iter(shape)) {
        const double center = U[flat - 1];
        NdArray w(shape);
        for (std::size_t k = 0; k < total; ++k) w[k] = phi_p(center - U[k], op.p);
        for (std::size_t j = 0; j < op.factors.size(); ++j) w = reference::mode_product(op.factors[j]->Pinv, w, j);
        for (std::size_t k = 0; k < total; ++k) w[k] *= op.pow_tensor[k];
        for (std::size_t j = 0; j < op.factors.size(); ++j) {
            const Matrix row = op.factors[j]->P.row(static_cast<Eigen::Index>(tuple[j] - 1));
            w = reference::mode_product(row, w, j);
        }
        result[flat - 1] = op.c_const * w[0];
    }
    return result;
}

}  // namespace reference

}  // namespace fraclap
