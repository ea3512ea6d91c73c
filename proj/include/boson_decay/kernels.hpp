#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace boson_decay::kernels {

using cplx = std::complex<double>;

/// Data-parallel inner loops used by the propagator, the thermal sums and
/// the Monte Carlo label map. `scalar_kernels()` is the reference; every other
/// table must agree with it up to summation-order rounding.
struct KernelTable
{
    std::string_view name;

    /// sum_k row[k] * x[k], real row times complex vector
    cplx (*real_complex_dot)(const double* row, const cplx* x, std::size_t n);
    /// sum_k a[k] * b[k] (no conjugation)
    cplx (*complex_dot)(const cplx* a, const cplx* b, std::size_t n);
    /// sum_k w[k] * |z[k]|^2
    double (*weighted_norm_sq)(const double* w, const cplx* z, std::size_t n);
    /// y[k] += s * row[k]
    void (*real_complex_axpy)(cplx s, const double* row, cplx* y, std::size_t n);
    /// sum_k num[k] / (tau - delta[k])
    double (*secular_sum)(const double* num, const double* delta, double tau,
                          std::size_t n);
};

const KernelTable& scalar_kernels();

/// nullptr when the AVX2/FMA variant was not compiled in or the CPU lacks it.
const KernelTable* avx2_kernels();

/// Table chosen once per process: AVX2 when available, unless the
/// environment variable BOSON_DECAY_SIMD is set to "scalar".
const KernelTable& active_kernels();

// Span conveniences over the active table.
inline cplx real_complex_dot(std::span<const double> row, std::span<const cplx> x)
{
    return active_kernels().real_complex_dot(row.data(), x.data(), row.size());
}
inline cplx complex_dot(std::span<const cplx> a, std::span<const cplx> b)
{
    return active_kernels().complex_dot(a.data(), b.data(), a.size());
}
inline double weighted_norm_sq(std::span<const double> w, std::span<const cplx> z)
{
    return active_kernels().weighted_norm_sq(w.data(), z.data(), w.size());
}
inline void real_complex_axpy(cplx s, std::span<const double> row, std::span<cplx> y)
{
    active_kernels().real_complex_axpy(s, row.data(), y.data(), row.size());
}
inline double secular_sum(std::span<const double> num, std::span<const double> delta,
                          double tau)
{
    return active_kernels().secular_sum(num.data(), delta.data(), tau, num.size());
}

/// sum_k |z[k]|^2
double norm_sq(std::span<const cplx> z);

}  // namespace boson_decay::kernels
