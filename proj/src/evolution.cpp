#include "fraclap/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fraclap/errors.hpp"
#include "fraclap/frac_laplacian.hpp"

namespace fraclap {

namespace {

void axpy_into(NdArray& out, const NdArray& base, double a, const NdArray& k) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = base[i] + a * k[i];
}

std::size_t nearest_step(double t, double dt) { return static_cast<std::size_t>(std::llround(t / dt)); }

double relative_drift(double m, double m0) {
    const double d = std::abs(m - m0);
    return m0 != 0.0 ? d / std::abs(m0) : d;
}

// Linear interpolation of a profile given with ascending abscissae.
double interp(const std::vector<double>& r, const std::vector<double>& v, double q) {
    auto it = std::upper_bound(r.begin(), r.end(), q);
    if (it == r.begin()) return v.front();
    if (it == r.end()) return v.back();
    const auto hi = static_cast<std::size_t>(it - r.begin());
    const std::size_t lo = hi - 1;
    const double w = (q - r[lo]) / (r[hi] - r[lo]);
    return v[lo] + w * (v[hi] - v[lo]);
}

}  // namespace

void EvolutionConfig::validate() const {
    if (n < 1) throw ParameterError("dimension n must be positive");
    if (N < 2) throw ParameterError("N must be at least 2");
    if (!(L > 0.0)) throw ParameterError("L must be positive");
    if (!(s > 0.0 && s < 1.0)) throw ParameterError("s must lie in (0,1)");
    if (!(p >= 1.0)) throw ParameterError("p must be >= 1");
    if (!(dt > 0.0)) throw ParameterError("dt must be positive");
    if (!(t_end > 0.0)) throw ParameterError("t_end must be positive");
    if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end())) {
        throw ParameterError("snapshot times must be sorted");
    }
    for (double t : snapshot_times) {
        if (!(t > 0.0 && t <= t_end)) throw ParameterError("snapshot time " + std::to_string(t) + " outside (0, t_end]");
    }
}

SelfSimilarParams self_similar_params(int n, double s, double p) {
    if (n < 1) throw ParameterError("dimension n must be positive");
    if (!(s > 0.0 && s < 1.0)) throw ParameterError("s must lie in (0,1)");
    if (!(p >= 1.0)) throw ParameterError("p must be >= 1");
    const double nd = static_cast<double>(n);
    const double denom = s * p - nd * (2.0 - p);
    if (std::abs(denom) <= 1e-14) {
        throw NumericalError(NumericalError::Kind::DegenerateExponent, "sp - n(2-p) vanishes");
    }
    SelfSimilarParams ss;
    ss.beta = 1.0 / denom;
    ss.alpha = nd * ss.beta;
    ss.p_c = 2.0 * nd / (nd + s);
    ss.p_1 = (s - nd + std::sqrt(nd * nd + 6.0 * nd * s + s * s)) / (2.0 * s);
    ss.below_critical = p <= ss.p_c;
    return ss;
}

double quad_mass(const NdArray& U, std::span<const Grid1D> grids) {
    if (grids.size() != U.rank()) throw ParameterError("one grid per dimension is required");
    double factor = 1.0;
    std::vector<Vector> weights;
    for (std::size_t j = 0; j < grids.size(); ++j) {
        if (grids[j].N != U.extent(j)) throw ParameterError("grid size does not match field extent");
        factor *= std::numbers::pi * grids[j].L / static_cast<double>(grids[j].N);
        weights.push_back(grids[j].xi.array().sin().square().inverse().matrix());
    }
    double sum = 0.0;
    std::vector<std::size_t> idx(U.rank(), 0);
    for (std::size_t f = 0; f < U.size(); ++f) {
        double w = 1.0;
        for (std::size_t j = 0; j < idx.size(); ++j) w *= weights[j](static_cast<Eigen::Index>(idx[j]));
        sum += U[f] * w;
        for (std::size_t j = 0; j < idx.size(); ++j) {
            if (++idx[j] < U.extent(j)) break;
            idx[j] = 0;
        }
    }
    return factor * sum;
}

NdArray rk4_step(const NdArray& U, double dt, const Rhs& rhs) {
    if (!(dt > 0.0)) throw ParameterError("dt must be positive");
    const NdArray k1 = rhs(U);
    NdArray stage(U.shape());
    axpy_into(stage, U, 0.5 * dt, k1);
    const NdArray k2 = rhs(stage);
    axpy_into(stage, U, 0.5 * dt, k2);
    const NdArray k3 = rhs(stage);
    axpy_into(stage, U, dt, k3);
    const NdArray k4 = rhs(stage);
    NdArray out(U.shape());
    const double h = dt / 6.0;
    for (std::size_t i = 0; i < U.size(); ++i) out[i] = U[i] + h * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

std::size_t mid_index(const Grid1D& grid) {
    Eigen::Index best = 0;
    grid.x.cwiseAbs().minCoeff(&best);
    return static_cast<std::size_t>(best);
}

Section extract_section(const NdArray& U, std::span<const Grid1D> grids) {
    if (grids.size() != U.rank()) throw ParameterError("one grid per dimension is required");
    std::size_t offset = 0;
    std::size_t stride = U.extent(0);
    for (std::size_t j = 1; j < grids.size(); ++j) {
        offset += mid_index(grids[j]) * stride;
        stride *= U.extent(j);
    }
    Section sec;
    const std::size_t n0 = U.extent(0);
    sec.x.resize(n0);
    sec.u.resize(n0);
    for (std::size_t i = 0; i < n0; ++i) {
        sec.x[i] = grids[0].x(static_cast<Eigen::Index>(i));
        sec.u[i] = U[offset + i];
    }
    return sec;
}

void rescale_section(Section& sec, double mass, double t, double s, double p, const SelfSimilarParams& ss) {
    const double rx = std::pow(mass, (2.0 - p) * ss.beta) * std::pow(t, -ss.beta);
    const double vu = std::pow(mass, -s * p * ss.beta) * std::pow(t, ss.alpha);
    sec.r.resize(sec.x.size());
    sec.v.resize(sec.u.size());
    for (std::size_t i = 0; i < sec.x.size(); ++i) {
        sec.r[i] = rx * sec.x[i];
        sec.v[i] = vu * sec.u[i];
    }
}

void unrescale_section(Section& sec, double mass, double t, double s, double p, const SelfSimilarParams& ss) {
    const double rx = std::pow(mass, (2.0 - p) * ss.beta) * std::pow(t, -ss.beta);
    const double vu = std::pow(mass, -s * p * ss.beta) * std::pow(t, ss.alpha);
    sec.x.resize(sec.r.size());
    sec.u.resize(sec.v.size());
    for (std::size_t i = 0; i < sec.r.size(); ++i) {
        sec.x[i] = sec.r[i] / rx;
        sec.u[i] = sec.v[i] / vu;
    }
}

double profile_sup_distance(std::span<const Section> sections, std::size_t grid_points) {
    if (sections.size() < 2) return 0.0;
    if (grid_points < 2) throw ParameterError("need at least two interpolation points");
    std::vector<std::vector<double>> rs;
    std::vector<std::vector<double>> vs;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const Section& sec : sections) {
        if (sec.r.size() != sec.v.size() || sec.r.size() < 2) throw ParameterError("malformed section");
        std::vector<double> r = sec.r;
        std::vector<double> v = sec.v;
        if (r.front() > r.back()) {
            std::reverse(r.begin(), r.end());
            std::reverse(v.begin(), v.end());
        }
        lo = std::max(lo, r.front());
        hi = std::min(hi, r.back());
        rs.push_back(std::move(r));
        vs.push_back(std::move(v));
    }
    if (!(hi > lo)) throw ParameterError("section supports do not overlap");
    const double h = (hi - lo) / static_cast<double>(grid_points - 1);
    std::vector<std::vector<double>> sampled(sections.size(), std::vector<double>(grid_points));
    for (std::size_t k = 0; k < sections.size(); ++k) {
        for (std::size_t i = 0; i < grid_points; ++i) {
            const double q = i + 1 == grid_points ? hi : lo + h * static_cast<double>(i);
            sampled[k][i] = interp(rs[k], vs[k], q);
        }
    }
    double worst = 0.0;
    for (std::size_t a = 0; a < sections.size(); ++a) {
        for (std::size_t b = a + 1; b < sections.size(); ++b) {
            for (std::size_t i = 0; i < grid_points; ++i) {
                worst = std::max(worst, std::abs(sampled[a][i] - sampled[b][i]));
            }
        }
    }
    return worst;
}

EvolutionRun run_evolution(const EvolutionConfig& config, const NdArray& u0) {
    config.validate();
    const auto n = static_cast<std::size_t>(config.n);
    if (u0.shape() != Shape(n, config.N)) throw ParameterError("initial field shape does not match the config");

    const Grid1D grid = make_grid(config.N, config.L);
    const std::vector<Grid1D> grids(n, grid);
    const FactorPtr factor = make_factor(config.N);
    const FracPOperator op =
        build_fracplap(std::vector<FactorPtr>(n, factor), std::vector<double>(n, config.L), config.s, config.p);
    const SelfSimilarParams ss = self_similar_params(config.n, config.s, config.p);

    EvolutionRun run;
    run.batched = batched_table_bytes(op) <= config.byte_budget;
    const Rhs rhs = [&](const NdArray& U) {
        NdArray out = run.batched ? apply_plap_batched(op, U, config.byte_budget) : apply_plap_pointwise(op, U);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = -out[i];
        return out;
    };

    run.steps = nearest_step(config.t_end, config.dt);
    std::vector<std::size_t> snap_steps;
    for (double t : config.snapshot_times) snap_steps.push_back(std::max<std::size_t>(1, nearest_step(t, config.dt)));

    run.initial_mass = quad_mass(u0, grids);
    run.final_mass = run.initial_mass;
    NdArray U = u0;
    std::size_t next_snap = 0;
    for (std::size_t step = 1; step <= run.steps; ++step) {
        U = rk4_step(U, config.dt, rhs);
        for (std::size_t i = 0; i < U.size(); ++i) {
            if (!std::isfinite(U[i])) {
                throw NumericalError(NumericalError::Kind::NonFiniteState,
                                     "non-finite value at step " + std::to_string(step));
            }
        }
        const double mass = quad_mass(U, grids);
        run.final_mass = mass;
        run.max_mass_drift = std::max(run.max_mass_drift, relative_drift(mass, run.initial_mass));
        while (next_snap < snap_steps.size() && snap_steps[next_snap] == step) {
            Snapshot snap;
            snap.t = static_cast<double>(step) * config.dt;
            snap.step = step;
            snap.U = U;
            snap.mass = mass;
            snap.section = extract_section(U, grids);
            rescale_section(snap.section, mass, snap.t, config.s, config.p, ss);
            run.snapshots.push_back(std::move(snap));
            ++next_snap;
        }
    }
    return run;
}

}  // namespace fraclap
