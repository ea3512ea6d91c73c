// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "boson_decay/kernels.hpp"

namespace boson_decay::kernels {
namespace {

// [r0, r0, r1, r1] from two consecutive reals
inline __m256d duplicate_pairs(const double* p)
{
    __m128d two = _mm_loadu_pd(p);
    return _mm256_permute4x64_pd(_mm256_castpd128_pd256(two), 0x50);
}

inline double hsum(__m256d v)
{
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// Sum of even lanes and sum of odd lanes: (re, im) of an interleaved accumulator.
inline cplx interleaved_sum(__m256d v)
{
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d s = _mm_add_pd(lo, hi);
    alignas(16) double out[2];
    _mm_store_pd(out, s);
    return {out[0], out[1]};
}

cplx real_complex_dot(const double* row, const cplx* x, std::size_t n)
{
    const auto* xd = reinterpret_cast<const double*>(x);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4)
    {
        acc0 = _mm256_fmadd_pd(duplicate_pairs(row + k), _mm256_loadu_pd(xd + 2 * k), acc0);
        acc1 = _mm256_fmadd_pd(duplicate_pairs(row + k + 2),
                               _mm256_loadu_pd(xd + 2 * k + 4), acc1);
    }
    cplx result = interleaved_sum(_mm256_add_pd(acc0, acc1));
    for (; k < n; ++k)
        result += row[k] * x[k];
    return result;
}

cplx complex_dot(const cplx* a, const cplx* b, std::size_t n)
{
    const auto* ad = reinterpret_cast<const double*>(a);
    const auto* bd = reinterpret_cast<const double*>(b);
    __m256d same = _mm256_setzero_pd();   // [ar*br, ai*bi, ...]
    __m256d cross = _mm256_setzero_pd();  // [ar*bi, ai*br, ...]
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2)
    {
        __m256d va = _mm256_loadu_pd(ad + 2 * k);
        __m256d vb = _mm256_loadu_pd(bd + 2 * k);
        same = _mm256_fmadd_pd(va, vb, same);
        cross = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0b0101), cross);
    }
    cplx s = interleaved_sum(same);
    double re = s.real() - s.imag();
    double im = hsum(cross);
    for (; k < n; ++k)
    {
        re += a[k].real() * b[k].real() - a[k].imag() * b[k].imag();
        im += a[k].real() * b[k].imag() + a[k].imag() * b[k].real();
    }
    return {re, im};
}

double weighted_norm_sq(const double* w, const cplx* z, std::size_t n)
{
    const auto* zd = reinterpret_cast<const double*>(z);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4)
    {
        __m256d z0 = _mm256_loadu_pd(zd + 2 * k);
        __m256d z1 = _mm256_loadu_pd(zd + 2 * k + 4);
        acc0 = _mm256_fmadd_pd(duplicate_pairs(w + k), _mm256_mul_pd(z0, z0), acc0);
        acc1 = _mm256_fmadd_pd(duplicate_pairs(w + k + 2), _mm256_mul_pd(z1, z1), acc1);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; k < n; ++k)
        acc += w[k] * std::norm(z[k]);
    return acc;
}

void real_complex_axpy(cplx s, const double* row, cplx* y, std::size_t n)
{
    auto* yd = reinterpret_cast<double*>(y);
    const __m256d vs = _mm256_setr_pd(s.real(), s.imag(), s.real(), s.imag());
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2)
    {
        __m256d vy = _mm256_loadu_pd(yd + 2 * k);
        _mm256_storeu_pd(yd + 2 * k, _mm256_fmadd_pd(duplicate_pairs(row + k), vs, vy));
    }
    for (; k < n; ++k)
        y[k] += s * row[k];
}

double secular_sum(const double* num, const double* delta, double tau, std::size_t n)
{
    const __m256d vt = _mm256_set1_pd(tau);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 8 <= n; k += 8)
    {
        acc0 = _mm256_add_pd(acc0, _mm256_div_pd(_mm256_loadu_pd(num + k),
                                                 _mm256_sub_pd(vt, _mm256_loadu_pd(delta + k))));
        acc1 = _mm256_add_pd(acc1, _mm256_div_pd(_mm256_loadu_pd(num + k + 4),
                                                 _mm256_sub_pd(vt, _mm256_loadu_pd(delta + k + 4))));
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; k < n; ++k)
        acc += num[k] / (tau - delta[k]);
    return acc;
}

}  // namespace

const KernelTable& avx2_kernel_table()
{
    static const KernelTable table{
        "avx2",        &real_complex_dot,  &complex_dot,
        &weighted_norm_sq, &real_complex_axpy, &secular_sum,
    };
    return table;
}

}  // namespace boson_decay::kernels
