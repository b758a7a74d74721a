#pragma once

#include <complex>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>

namespace mfvdm {

/// Selects the serial reference loop or the OpenMP-parallel loop of a kernel.
/// Both paths evaluate every output element with the same arithmetic, so
/// their results are bitwise identical.
enum class Execution { Serial, Parallel };

/// Caps the OpenMP thread count used by Parallel kernels (0 = runtime default).
void set_worker_count(int workers);
int worker_count();

/// Exceptions must not escape an OpenMP region: loop bodies run through
/// capture(), and the first stored exception is rethrown after the region.
class ParallelErrors {
public:
    template <typename F>
    void capture(F&& body) noexcept {
        try {
            body();
        } catch (...) {
            std::lock_guard<std::mutex> lock(mutex_);
            if (!first_) first_ = std::current_exception();
        }
    }
    void rethrow() const {
        if (first_) std::rethrow_exception(first_);
    }

private:
    std::mutex mutex_;
    std::exception_ptr first_;
};

class SparseHermitian;

/// y = A x for a Hermitian CSR matrix.
void spmv_serial(const SparseHermitian& a, std::span<const std::complex<double>> x,
                 std::span<std::complex<double>> y);
void spmv_parallel(const SparseHermitian& a, std::span<const std::complex<double>> x,
                   std::span<std::complex<double>> y);
void spmv(const SparseHermitian& a, std::span<const std::complex<double>> x, std::span<std::complex<double>> y,
          Execution exec);

}  // namespace mfvdm
