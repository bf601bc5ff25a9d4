#pragma once

#include <memory>
#include <vector>

#include "fraclap/eigen_factor.hpp"
#include "fraclap/ndarray.hpp"

namespace fraclap {

using FactorPtr = std::shared_ptr<const SpectralFactor>;

/// Linear fractional Laplacian (-Delta)^s on a tensor grid, reduced to an
/// entrywise power of the scaled eigenvalue-sum tensor.
///
/// pow_tensor = (-Lambda)^s with Lambda[i_1..i_n] = sum_j lambda_j[i_j] / L_j^2.
/// Its single zero entry is the all-zero-modes tuple.
struct FracLapOperator {
    std::vector<FactorPtr> factors;
    std::vector<double> scales;
    double s = 0.0;
    NdArray pow_tensor;

    Shape shape() const;
};

FracLapOperator build_fraclap(std::vector<FactorPtr> factors, std::vector<double> scales, double s);

NdArray apply_fraclap(const FracLapOperator& op, const NdArray& U);

/// U -> P_n^-1 []_n ... P_1^-1 []_1 U.
NdArray to_modal(std::span<const FactorPtr> factors, const NdArray& U);

/// V -> P_n []_n ... P_1 []_1 V.
NdArray from_modal(std::span<const FactorPtr> factors, const NdArray& V);

/// Factor the even-extension Dxx of an N-node grid. The result does not
/// depend on the map scale.
FactorPtr make_factor(std::size_t N);

/// Scaled eigenvalue-sum power tensor shared by the linear and nonlinear
/// operators; validates factors and scales.
NdArray scaled_pow_tensor(std::span<const FactorPtr> factors, std::span<const double> scales, double e);

}  // namespace fraclap
