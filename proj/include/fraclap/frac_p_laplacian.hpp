#pragma once

#include <cstddef>
#include <vector>

#include "fraclap/frac_laplacian.hpp"

namespace fraclap {

/// sgn(t) |t|^(p-1), with sgn(0) = 0.
double phi_p(double t, double p);

/// Normalizing constant relating the order-sp/2 fractional Laplacian of the
/// pointwise differences to (-Delta)^s_p. Independent of n; equals -1 at p = 2.
double constant_C(int n, double s, double p);

/// Nonlinear fractional p-Laplacian on a tensor grid.
///
/// pow_tensor caches (-Lambda)^(sp/2). sp/2 is never a positive integer.
struct FracPOperator {
    std::vector<FactorPtr> factors;
    std::vector<double> scales;
    double s = 0.0;
    double p = 2.0;
    NdArray pow_tensor;
    double c_const = -1.0;

    Shape shape() const;
    std::size_t total_points() const { return pow_tensor.size(); }
};

FracPOperator build_fracplap(std::vector<FactorPtr> factors, std::vector<double> scales, double s, double p);

/// One fractional Laplacian per grid point, parallel over points.
NdArray apply_plap_pointwise(const FracPOperator& op, const NdArray& U);

inline constexpr std::size_t kDefaultByteBudget = std::size_t{2} << 30;

/// Bytes of the square difference table used by apply_plap_batched.
std::size_t batched_table_bytes(const FracPOperator& op);

/// All points at once through a (prod N_j) x (prod N_j) difference table.
/// Throws MemoryGuard when the table would exceed byte_budget.
NdArray apply_plap_batched(const FracPOperator& op, const NdArray& U,
                           std::size_t byte_budget = kDefaultByteBudget);

namespace reference {

/// Serial pointwise evaluation with the literal mode-product kernel.
NdArray apply_plap_pointwise(const FracPOperator& op, const NdArray& U);

}  // namespace reference

}  // namespace fraclap
