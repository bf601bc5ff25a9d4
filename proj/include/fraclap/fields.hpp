#pragma once

#include <span>
#include <string>
#include <vector>

#include "fraclap/grid_diff.hpp"
#include "fraclap/ndarray.hpp"

namespace fraclap {

/// Built-in sample fields: exp(-|x|^2) or (1 + |x|^2)^-r.
struct FieldSpec {
    enum class Kind { Gaussian, Lorentzian };
    Kind kind = Kind::Gaussian;
    double r = 1.0;

    /// Accepts "gaussian" or "lorentzian:<r>".
    static FieldSpec parse(const std::string& text);
    std::string name() const;
};

std::vector<Grid1D> make_grids(std::span<const std::size_t> dims, std::span<const double> scales);

/// |x|^2 at every tensor node.
NdArray radius_squared(std::span<const Grid1D> grids);

NdArray make_field(const FieldSpec& spec, std::span<const Grid1D> grids);

/// Closed-form (-Delta)^s of the field at every node.
NdArray exact_fraclap_field(const FieldSpec& spec, double s, std::span<const Grid1D> grids);

/// max |a - b| over all entries.
double max_abs_diff(const NdArray& a, const NdArray& b);

}  // namespace fraclap
