#include "boson_decay/kernels.hpp"

namespace boson_decay::kernels {
namespace {

cplx real_complex_dot(const double* row, const cplx* x, std::size_t n)
{
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = 0; k < n; ++k)
    {
        re += row[k] * x[k].real();
        im += row[k] * x[k].imag();
    }
    return {re, im};
}

cplx complex_dot(const cplx* a, const cplx* b, std::size_t n)
{
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = 0; k < n; ++k)
    {
        re += a[k].real() * b[k].real() - a[k].imag() * b[k].imag();
        im += a[k].real() * b[k].imag() + a[k].imag() * b[k].real();
    }
    return {re, im};
}

double weighted_norm_sq(const double* w, const cplx* z, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        acc += w[k] * (z[k].real() * z[k].real() + z[k].imag() * z[k].imag());
    return acc;
}

void real_complex_axpy(cplx s, const double* row, cplx* y, std::size_t n)
{
    for (std::size_t k = 0; k < n; ++k)
        y[k] += s * row[k];
}

double secular_sum(const double* num, const double* delta, double tau, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        acc += num[k] / (tau - delta[k]);
    return acc;
}

}  // namespace

const KernelTable& scalar_kernels()
{
    static const KernelTable table{
        "scalar",      &real_complex_dot,  &complex_dot,
        &weighted_norm_sq, &real_complex_axpy, &secular_sum,
    };
    return table;
}

}  // namespace boson_decay::kernels
