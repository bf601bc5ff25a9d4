#include "fraclap/frac_laplacian.hpp"

#include <string>

#include "fraclap/errors.hpp"
#include "fraclap/grid_diff.hpp"

namespace fraclap {

namespace {

void require_shape(std::span<const FactorPtr> factors, const NdArray& U) {
    if (U.rank() != factors.size()) {
        throw ParameterError("field has rank " + std::to_string(U.rank()) + " but the operator has " +
                             std::to_string(factors.size()) + " dimensions");
    }
    for (std::size_t j = 0; j < factors.size(); ++j) {
        if (U.extent(j) != factors[j]->N) {
            throw ParameterError("field extent " + std::to_string(U.extent(j)) + " in dimension " +
                                 std::to_string(j + 1) + " does not match N=" + std::to_string(factors[j]->N));
        }
    }
}

}  // namespace

Shape FracLapOperator::shape() const {
    Shape out;
    for (const auto& f : factors) out.push_back(f->N);
    return out;
}

NdArray scaled_pow_tensor(std::span<const FactorPtr> factors, std::span<const double> scales, double e) {
    if (factors.empty()) throw ParameterError("operator needs at least one dimension");
    if (factors.size() != scales.size()) {
        throw ParameterError("one scale per dimension is required");
    }
    std::vector<Vector> lambdas;
    lambdas.reserve(factors.size());
    for (const auto& f : factors) {
        if (!f) throw ParameterError("null spectral factor");
        lambdas.push_back(f->lambda);
    }
    return hadamard_pow_neg(eigen_sum_tensor(lambdas, scales), e);
}

FracLapOperator build_fraclap(std::vector<FactorPtr> factors, std::vector<double> scales, double s) {
    if (!(s > 0.0 && s < 1.0)) {
        throw ParameterError("fractional order s must lie in (0,1), got " + std::to_string(s));
    }
    FracLapOperator op;
    op.pow_tensor = scaled_pow_tensor(factors, scales, s);
    op.factors = std::move(factors);
    op.scales = std::move(scales);
    op.s = s;
    return op;
}

NdArray to_modal(std::span<const FactorPtr> factors, const NdArray& U) {
    require_shape(factors, U);
    NdArray cur = U;
    for (std::size_t j = 0; j < factors.size(); ++j) cur = mode_product(factors[j]->Pinv, cur, j);
    return cur;
}

NdArray from_modal(std::span<const FactorPtr> factors, const NdArray& V) {
    require_shape(factors, V);
    NdArray cur = V;
    for (std::size_t j = 0; j < factors.size(); ++j) cur = mode_product(factors[j]->P, cur, j);
    return cur;
}

NdArray apply_fraclap(const FracLapOperator& op, const NdArray& U) {
    NdArray modal = to_modal(op.factors, U);
    for (std::size_t k = 0; k < modal.size(); ++k) modal[k] *= op.pow_tensor[k];
    return from_modal(op.factors, modal);
}

FactorPtr make_factor(std::size_t N) {
    const Grid1D g = make_grid(N, 1.0);
    const DiffMatrices dm = build_diff_matrices(g, ExtensionKind::Even);
    return std::make_shared<const SpectralFactor>(factorize(dm.Dxx));
}

}  // namespace fraclap
