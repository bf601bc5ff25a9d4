#include "fraclap/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fraclap/errors.hpp"
#include "fraclap/reference_oracles.hpp"

namespace fraclap {

FieldSpec FieldSpec::parse(const std::string& text) {
    FieldSpec spec;
    if (text == "gaussian") return spec;
    const std::string prefix = "lorentzian:";
    if (text.rfind(prefix, 0) == 0) {
        spec.kind = Kind::Lorentzian;
        const std::string rest = text.substr(prefix.size());
        std::size_t used = 0;
        try {
            spec.r = std::stod(rest, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != rest.size() || !(spec.r > 0.0)) {
            throw ParameterError("lorentzian exponent must be a positive number, got '" + rest + "'");
        }
        return spec;
    }
    throw ParameterError("unknown field '" + text + "' (expected gaussian or lorentzian:r)");
}

std::string FieldSpec::name() const {
    if (kind == Kind::Gaussian) return "gaussian";
    char buf[64];
    std::snprintf(buf, sizeof buf, "lorentzian:%.17g", r);
    return buf;
}

std::vector<Grid1D> make_grids(std::span<const std::size_t> dims, std::span<const double> scales) {
    if (dims.empty() || dims.size() != scales.size()) {
        throw ParameterError("dims and scales must be non-empty and of equal length");
    }
    std::vector<Grid1D> grids;
    for (std::size_t j = 0; j < dims.size(); ++j) grids.push_back(make_grid(dims[j], scales[j]));
    return grids;
}

NdArray radius_squared(std::span<const Grid1D> grids) {
    Shape shape;
    for (const auto& g : grids) shape.push_back(g.N);
    NdArray r2(shape);
    std::size_t stride = 1;
    for (std::size_t j = 0; j < grids.size(); ++j) {
        const std::size_t n = shape[j];
        for (std::size_t f = 0; f < r2.size(); ++f) {
            const double x = grids[j].x(static_cast<Eigen::Index>((f / stride) % n));
            r2[f] += x * x;
        }
        stride *= n;
    }
    return r2;
}

NdArray make_field(const FieldSpec& spec, std::span<const Grid1D> grids) {
    NdArray u = radius_squared(grids);
    for (std::size_t f = 0; f < u.size(); ++f) {
        u[f] = spec.kind == FieldSpec::Kind::Gaussian ? std::exp(-u[f]) : std::pow(1.0 + u[f], -spec.r);
    }
    return u;
}

NdArray exact_fraclap_field(const FieldSpec& spec, double s, std::span<const Grid1D> grids) {
    NdArray out = radius_squared(grids);
    const int n = static_cast<int>(grids.size());
    for (std::size_t f = 0; f < out.size(); ++f) {
        out[f] = spec.kind == FieldSpec::Kind::Gaussian ? exact_fraclap_gaussian(s, n, out[f])
                                                        : exact_fraclap_algebraic(s, spec.r, n, out[f]);
    }
    return out;
}

double max_abs_diff(const NdArray& a, const NdArray& b) {
    if (a.shape() != b.shape()) throw ParameterError("shape mismatch");
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

}  // namespace fraclap
