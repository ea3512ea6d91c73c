#pragma once

#include <complex>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace boson_decay {

using cplx = std::complex<double>;

struct FockState
{
    unsigned n = 0;
};

struct CoherentState
{
    cplx alpha;
};

/// Finite superposition sum_k C_k |alpha_k> of coherent states.
struct CoherentSuperposition
{
    struct Term
    {
        cplx weight;
        cplx alpha;
    };
    std::vector<Term> terms;
};

using OpenSystemState = std::variant<FockState, CoherentState, CoherentSuperposition>;

/// <a|b> = exp(-|a|^2/2 - |b|^2/2 + conj(a) b)
cplx coherent_overlap(cplx a, cplx b);

/// <psi|psi> for psi = sum_k C_k |alpha_k>, from coherent overlaps.
double superposition_norm_sq(const CoherentSuperposition& state);

/// Fock amplitudes <m|alpha>, m = 0..n_max.
Eigen::VectorXcd coherent_amplitudes(cplx alpha, unsigned n_max);

/// Fock amplitudes of a (normalized) initial state truncated at n_max, with
/// the norm lost to truncation.
struct TruncatedState
{
    Eigen::VectorXcd amplitudes;
    double truncation_defect = 0.0;
};

/// Throws std::invalid_argument for an empty or zero-norm superposition, and
/// for a Fock state above n_max.
TruncatedState truncate_state(const OpenSystemState& state, unsigned n_max);

/// Truncation n_max >= |alpha|^2 + 6|alpha| + 10 (Poisson tail bound) using
/// the largest coherent amplitude in the state; n for Fock(n).
unsigned suggested_truncation(const OpenSystemState& state);

}  // namespace boson_decay
