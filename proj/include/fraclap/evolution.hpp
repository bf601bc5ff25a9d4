#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fraclap/frac_p_laplacian.hpp"
#include "fraclap/grid_diff.hpp"
#include "fraclap/ndarray.hpp"

namespace fraclap {

/// u_t + (-Delta)^s_p u = 0 on an n-dimensional grid with N nodes and map
/// scale L in every dimension, advanced by fixed-step RK4.
struct EvolutionConfig {
    int n = 1;
    double s = 0.5;
    double p = 2.0;
    std::size_t N = 0;
    double L = 1.0;
    double dt = 0.0;
    double t_end = 0.0;
    std::vector<double> snapshot_times;
    std::size_t byte_budget = kDefaultByteBudget;

    void validate() const;
};

/// Exponents of the self-similar profile u_M = M^(sp beta) t^-alpha F(r).
struct SelfSimilarParams {
    double alpha = 0.0;
    double beta = 0.0;
    double p_c = 0.0;
    double p_1 = 0.0;
    /// p <= p_c: the rescaling is outside the mass-conserving regime.
    bool below_critical = false;
};

SelfSimilarParams self_similar_params(int n, double s, double p);

/// One axis-1 section of a field: nodes, values and their self-similar images.
struct Section {
    std::vector<double> x;
    std::vector<double> u;
    std::vector<double> r;
    std::vector<double> v;
};

struct Snapshot {
    double t = 0.0;
    std::size_t step = 0;
    NdArray U;
    double mass = 0.0;
    Section section;
};

struct EvolutionRun {
    std::vector<Snapshot> snapshots;
    double initial_mass = 0.0;
    double final_mass = 0.0;
    /// Largest |M(t) - M(0)| / |M(0)| over all steps (absolute when M(0) = 0).
    double max_mass_drift = 0.0;
    std::size_t steps = 0;
    bool batched = false;
};

/// Midpoint rule in the angle variables:
/// prod_j (pi L_j / N_j) * sum U / prod_j sin^2(xi_j).
double quad_mass(const NdArray& U, std::span<const Grid1D> grids);

using Rhs = std::function<NdArray(const NdArray&)>;

/// Classical RK4 step for dU/dt = rhs(U).
NdArray rk4_step(const NdArray& U, double dt, const Rhs& rhs);

/// 0-based index of the node closest to the origin (the lower index on ties).
std::size_t mid_index(const Grid1D& grid);

/// Section along the first axis with every other index at its mid node.
Section extract_section(const NdArray& U, std::span<const Grid1D> grids);

/// r = M^((2-p) beta) t^-beta x and v = u M^(-sp beta) t^alpha.
void rescale_section(Section& sec, double mass, double t, double s, double p, const SelfSimilarParams& ss);

/// Inverse of rescale_section, recovering (x, u) from (r, v).
void unrescale_section(Section& sec, double mass, double t, double s, double p, const SelfSimilarParams& ss);

/// Largest pairwise sup-distance between the (r, v) profiles after linear
/// interpolation onto a uniform grid spanning the intersection of supports.
double profile_sup_distance(std::span<const Section> sections, std::size_t grid_points = 100001);

EvolutionRun run_evolution(const EvolutionConfig& config, const NdArray& u0);

}  // namespace fraclap
