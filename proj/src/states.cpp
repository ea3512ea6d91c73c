#include "boson_decay/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace boson_decay {

cplx coherent_overlap(cplx a, cplx b)
{
    return std::exp(-0.5 * std::norm(a) - 0.5 * std::norm(b) + std::conj(a) * b);
}

double superposition_norm_sq(const CoherentSuperposition& state)
{
    cplx acc{};
    for (const auto& k : state.terms)
        for (const auto& l : state.terms)
            acc += std::conj(l.weight) * k.weight * coherent_overlap(l.alpha, k.alpha);
    return acc.real();
}

Eigen::VectorXcd coherent_amplitudes(cplx alpha, unsigned n_max)
{
    Eigen::VectorXcd c(n_max + 1);
    c(0) = std::exp(-0.5 * std::norm(alpha));
    for (unsigned m = 1; m <= n_max; ++m)
        c(m) = c(m - 1) * alpha / std::sqrt(static_cast<double>(m));
    return c;
}

TruncatedState truncate_state(const OpenSystemState& state, unsigned n_max)
{
    TruncatedState out;
    if (const auto* fock = std::get_if<FockState>(&state))
    {
        if (fock->n > n_max)
            throw std::invalid_argument("Fock state lies above the truncation n_max");
        out.amplitudes = Eigen::VectorXcd::Zero(n_max + 1);
        out.amplitudes(fock->n) = 1.0;
        return out;
    }
    if (const auto* coh = std::get_if<CoherentState>(&state))
    {
        out.amplitudes = coherent_amplitudes(coh->alpha, n_max);
        out.truncation_defect = std::max(0.0, 1.0 - out.amplitudes.squaredNorm());
        return out;
    }
    const auto& sup = std::get<CoherentSuperposition>(state);
    if (sup.terms.empty())
        throw std::invalid_argument("coherent superposition has no terms");
    const double norm_sq = superposition_norm_sq(sup);
    if (!(norm_sq > 0.0))
        throw std::invalid_argument("coherent superposition has zero norm");
    out.amplitudes = Eigen::VectorXcd::Zero(n_max + 1);
    for (const auto& term : sup.terms)
        out.amplitudes += term.weight * coherent_amplitudes(term.alpha, n_max);
    out.amplitudes /= std::sqrt(norm_sq);
    out.truncation_defect = std::max(0.0, 1.0 - out.amplitudes.squaredNorm());
    return out;
}

unsigned suggested_truncation(const OpenSystemState& state)
{
    if (const auto* fock = std::get_if<FockState>(&state))
        return fock->n;
    double amp = 0.0;
    if (const auto* coh = std::get_if<CoherentState>(&state))
        amp = std::abs(coh->alpha);
    else
        for (const auto& term : std::get<CoherentSuperposition>(state).terms)
            amp = std::max(amp, std::abs(term.alpha));
    return static_cast<unsigned>(std::ceil(amp * amp + 6.0 * amp + 10.0));
}

}  // namespace boson_decay
