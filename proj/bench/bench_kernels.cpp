// Times the OpenMP kernels against their serial reference versions and
// reports the max discrepancy of each pair.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "fraclap/fields.hpp"
#include "fraclap/frac_p_laplacian.hpp"
#include "fraclap/ndarray.hpp"

using namespace fraclap;

namespace {

double best_of(int reps, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

NdArray random_field(const Shape& shape, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    NdArray a(shape);
    for (std::size_t k = 0; k < a.size(); ++k) a[k] = dist(rng);
    return a;
}

void row(const std::string& name, double fast, double serial, double diff) {
    std::printf("%-34s %11.4f %11.4f %8.2fx %11.3e\n", name.c_str(), fast, serial, serial / fast, diff);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Serial reference vs parallel kernels"};
    int reps = 3;
    int threads = 0;
    app.add_option("--reps", reps, "Repetitions per timing (best is reported)")->check(CLI::PositiveNumber);
    app.add_option("--threads", threads, "OpenMP threads (0 = default)");
    CLI11_PARSE(app, argc, argv);
    if (threads > 0) omp_set_num_threads(threads);

    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-34s %11s %11s %9s %11s\n", "case", "kernel[s]", "serial[s]", "speedup", "max|diff|");

    std::mt19937 rng(1);
    for (const Shape& shape : {Shape{64, 64, 64}, Shape{40, 40, 40, 40}, Shape{400, 400}}) {
        const NdArray U = random_field(shape, rng);
        for (std::size_t axis = 0; axis < shape.size(); ++axis) {
            const auto n = static_cast<Eigen::Index>(shape[axis]);
            const Matrix A = Matrix::Random(n, n);
            NdArray fast;
            NdArray slow;
            const double tf = best_of(reps, [&] { fast = mode_product(A, U, axis); });
            const double ts = best_of(reps, [&] { slow = reference::mode_product(A, U, axis); });
            std::string name = "mode_product ";
            for (std::size_t j = 0; j < shape.size(); ++j) name += (j ? "x" : "") + std::to_string(shape[j]);
            row(name + " axis " + std::to_string(axis), tf, ts, max_abs_diff(fast, slow));
        }
    }

    for (const Shape& dims : {Shape{400}, Shape{30, 31}}) {
        std::vector<FactorPtr> factors;
        std::vector<double> scales;
        for (std::size_t N : dims) {
            factors.push_back(make_factor(N));
            scales.push_back(3.0);
        }
        const FracPOperator op = build_fracplap(factors, scales, 0.6, 1.7);
        const auto grids = make_grids(dims, scales);
        const NdArray U = make_field(FieldSpec{}, grids);
        NdArray loop;
        NdArray batch;
        NdArray serial;
        const double tl = best_of(reps, [&] { loop = apply_plap_pointwise(op, U); });
        const double tb = best_of(reps, [&] { batch = apply_plap_batched(op, U); });
        const double ts = best_of(reps, [&] { serial = reference::apply_plap_pointwise(op, U); });
        std::string name;
        for (std::size_t j = 0; j < dims.size(); ++j) name += (j ? "x" : "") + std::to_string(dims[j]);
        row("p-Laplacian loop  " + name, tl, ts, max_abs_diff(loop, serial));
        row("p-Laplacian batch " + name, tb, ts, max_abs_diff(batch, serial));
    }
    return 0;
}
