#include "mfvdm/kernels.hpp"

#include <omp.h>

#include "mfvdm/error.hpp"
#include "mfvdm/graph_core.hpp"

namespace mfvdm {

namespace {

int g_workers = 0;

inline Complex spmv_row(const SparseHermitian& a, std::span<const Complex> x, std::size_t r) {
    const auto& ptr = a.row_ptr();
    const auto& cols = a.cols();
    const auto& vals = a.values();
    double re = 0.0;
    double im = 0.0;
    for (std::size_t s = ptr[r]; s < ptr[r + 1]; ++s) {
        const Complex v = vals[s];
        const Complex xv = x[cols[s]];
        re += v.real() * xv.real() - v.imag() * xv.imag();
        im += v.real() * xv.imag() + v.imag() * xv.real();
    }
    return {re, im};
}

void check_shapes(const SparseHermitian& a, std::size_t x, std::size_t y) {
    if (x != a.size() || y != a.size()) throw ParameterError("spmv: vector length does not match matrix size");
}

}  // namespace

void set_worker_count(int workers) {
    g_workers = workers > 0 ? workers : 0;
    if (g_workers > 0) omp_set_num_threads(g_workers);
}

int worker_count() { return g_workers > 0 ? g_workers : omp_get_max_threads(); }

void spmv_serial(const SparseHermitian& a, std::span<const Complex> x, std::span<Complex> y) {
    check_shapes(a, x.size(), y.size());
    for (std::size_t r = 0; r < a.size(); ++r) y[r] = spmv_row(a, x, r);
}

void spmv_parallel(const SparseHermitian& a, std::span<const Complex> x, std::span<Complex> y) {
    check_shapes(a, x.size(), y.size());
    const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < n; ++r) y[static_cast<std::size_t>(r)] = spmv_row(a, x, static_cast<std::size_t>(r));
}

void spmv(const SparseHermitian& a, std::span<const Complex> x, std::span<Complex> y, Execution exec) {
    if (exec == Execution::Parallel)
        spmv_parallel(a, x, y);
    else
        spmv_serial(a, x, y);
}

}  // namespace mfvdm
