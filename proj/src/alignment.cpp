#include "mfvdm/alignment.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "mfvdm/error.hpp"

namespace mfvdm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// FFTW planning is not thread-safe; execution on fresh arrays is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

void check_grid(std::size_t grid, std::size_t k_max) {
    if (!is_power_of_two(grid) || grid < 4 * k_max)
        throw ParameterError("FFT grid length T=" + std::to_string(grid) + " must be a power of two >= 4*k_max (" +
                             std::to_string(4 * k_max) + ")");
}

}  // namespace

struct AngleEstimator::Impl {
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan plan = nullptr;
};

AngleEstimator::AngleEstimator(std::size_t grid) : grid_(grid), impl_(std::make_unique<Impl>()) {
    check_grid(grid, 1);
    impl_->in = fftw_alloc_complex(grid);
    impl_->out = fftw_alloc_complex(grid);
    std::lock_guard<std::mutex> lock(planner_mutex());
    // FFTW_ESTIMATE keeps the chosen algorithm, and therefore the output bits, fixed across runs.
    impl_->plan = fftw_plan_dft_1d(static_cast<int>(grid), impl_->in, impl_->out, FFTW_FORWARD, FFTW_ESTIMATE);
}

AngleEstimator::~AngleEstimator() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(impl_->plan);
    fftw_free(impl_->in);
    fftw_free(impl_->out);
}

AngleEstimate AngleEstimator::estimate(const std::vector<Complex>& z) {
    check_grid(grid_, z.size());
    bool any = false;
    for (const Complex& v : z) any = any || v != Complex(0.0, 0.0);
    if (!any) throw NumericalError("estimate_angle: all-zero sequence, alignment undefined");

    for (std::size_t m = 0; m < grid_; ++m) impl_->in[m][0] = impl_->in[m][1] = 0.0;
    for (std::size_t k = 1; k <= z.size(); ++k) {
        impl_->in[k][0] = z[k - 1].real();
        impl_->in[k][1] = z[k - 1].imag();
    }
    fftw_execute_dft(impl_->plan, impl_->in, impl_->out);

    std::size_t best = 0;
    for (std::size_t m = 1; m < grid_; ++m)
        if (impl_->out[m][0] > impl_->out[best][0]) best = m;
    const double f0 = impl_->out[best][0];
    const double fm = impl_->out[(best + grid_ - 1) % grid_][0];
    const double fp = impl_->out[(best + 1) % grid_][0];
    const double curvature = fm - 2.0 * f0 + fp;
    double delta = 0.0;
    if (curvature < 0.0) delta = std::clamp(0.5 * (fm - fp) / curvature, -0.5, 0.5);

    AngleEstimate est;
    est.grid = grid_;
    est.alpha = wrap_2pi((static_cast<double>(best) + delta) * kTwoPi / static_cast<double>(grid_));
    est.objective = f0 - 0.25 * (fm - fp) * delta;
    return est;
}

std::vector<double> AngleEstimator::last_objective() const {
    std::vector<double> f(grid_);
    for (std::size_t m = 0; m < grid_; ++m) f[m] = impl_->out[m][0];
    return f;
}

AlignmentSequence alignment_sequence(const EmbeddingSet& emb, std::size_t i, std::size_t j) {
    if (emb.kind() != EmbeddingKind::MultiFrequency)
        throw ParameterError("alignment_sequence: requires a multi-frequency embedding");
    if (i >= emb.size() || j >= emb.size()) throw ParameterError("alignment_sequence: index out of range");
    AlignmentSequence seq;
    seq.i = i;
    seq.j = j;
    seq.z.assign(static_cast<std::size_t>(emb.k_max()), Complex(0.0, 0.0));
    for (const auto& f : emb.features()) seq.z[static_cast<std::size_t>(f.k - 1)] = f.inner(i, j);
    return seq;
}

AngleEstimate estimate_angle(const AlignmentSequence& z, std::size_t grid) {
    check_grid(grid, z.z.size());
    AngleEstimator est(grid);
    return est.estimate(z.z);
}

std::vector<PairAlignment> align_neighbors(const EmbeddingSet& emb, const NeighborList& neighbors, std::size_t grid,
                                           Execution exec) {
    if (emb.kind() != EmbeddingKind::MultiFrequency)
        throw ParameterError("align_neighbors: requires a multi-frequency embedding");
    if (neighbors.n != emb.size()) throw ParameterError("align_neighbors: neighbor list does not match embedding");
    check_grid(grid, static_cast<std::size_t>(emb.k_max()));

    const std::size_t total = neighbors.n * neighbors.kappa;
    std::vector<PairAlignment> out(total);
    const bool parallel = exec == Execution::Parallel;
    ParallelErrors errors;
#pragma omp parallel if (parallel)
    {
        AngleEstimator estimator(grid);
#pragma omp for schedule(dynamic, 64)
        for (std::ptrdiff_t e = 0; e < static_cast<std::ptrdiff_t>(total); ++e) {
            errors.capture([&] {
                const std::size_t slot = static_cast<std::size_t>(e);
                const Index i = static_cast<Index>(slot / neighbors.kappa);
                const Index j = neighbors.ids[slot];
                const Index lo = std::min(i, j);
                const Index hi = std::max(i, j);
                AngleEstimate est = estimator.estimate(alignment_sequence(emb, lo, hi).z);
                if (i > j) est.alpha = wrap_2pi(-est.alpha);
                out[slot] = PairAlignment{i, j, est};
            });
        }
    }
    errors.rethrow();
    return out;
}

}  // namespace mfvdm
