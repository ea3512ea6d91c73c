#include "boson_decay/decay.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "boson_decay/errors.hpp"
#include "boson_decay/kernels.hpp"

namespace boson_decay {

double PopulationDistribution::mean() const
{
    double acc = 0.0;
    for (std::size_t m = 0; m < probs.size(); ++m)
        acc += static_cast<double>(m) * probs[m];
    return acc;
}

double PopulationDistribution::variance() const
{
    const double mu = mean();
    double acc = 0.0;
    for (std::size_t m = 0; m < probs.size(); ++m)
    {
        const double d = static_cast<double>(m) - mu;
        acc += d * d * probs[m];
    }
    return acc;
}

PopulationDistribution fock_populations(unsigned n, double survival, double t)
{
    if (!(survival >= 0.0 && survival <= 1.0))
        throw std::invalid_argument("fock_populations: survival must lie in [0, 1]");
    PopulationDistribution dist;
    dist.t = t;
    dist.probs.resize(n + 1);
    const double loss = 1.0 - survival;
    double binom = 1.0;  // C(n, m)
    for (unsigned m = 0; m <= n; ++m)
    {
        if (m > 0)
            binom = binom * static_cast<double>(n - m + 1) / static_cast<double>(m);
        dist.probs[m] = binom * std::pow(survival, m) * std::pow(loss, n - m);
    }
    return dist;
}

DecayLaw fock_survival(unsigned n, double gamma, double t)
{
    if (!(t >= 0.0))
        throw std::invalid_argument("fock_survival: t must be >= 0");
    if (n == 0)
        return DecayLaw{1.0, std::numeric_limits<double>::infinity()};
    return DecayLaw{std::exp(-static_cast<double>(n) * gamma * t),
                    1.0 / (static_cast<double>(n) * gamma)};
}

CoherentDecay coherent_decay(cplx alpha, cplx u)
{
    if (std::abs(u) > 1.0 + 1e-12)
        throw std::invalid_argument("coherent_decay: |u| must not exceed 1");
    const cplx label = alpha * u;
    return CoherentDecay{label, std::norm(label)};
}

double coherent_decay_time(double gamma)
{
    return 1.0 / gamma;
}

double JointCoherentLabels::norm_sq() const
{
    return std::norm(mu) + kernels::norm_sq(mu_bath);
}

cplx system_label(cplx alpha, std::span<const cplx> lambdas, const PropagatorCoefficients& coeffs)
{
    if (lambdas.size() != coeffs.v.size())
        throw std::invalid_argument("bath label count does not match the coefficients");
    return alpha * coeffs.u + kernels::complex_dot(coeffs.v, lambdas);
}

JointCoherentLabels excited_bath_evolution(cplx alpha, std::span<const cplx> lambdas,
                                           const PropagatorCoefficients& coeffs,
                                           const DiscreteBath& bath)
{
    const std::size_t n = coeffs.v.size();
    if (lambdas.size() != n || bath.size() != n || coeffs.u_bath.size() != n)
        throw std::invalid_argument("excited_bath_evolution: mode counts differ");

    bool excited = false;
    for (const cplx& l : lambdas)
        excited = excited || l != cplx{};
    if (excited && !coeffs.v_cross)
        throw CrossBlockRequired("excited_bath_evolution: cross-block required for an excited bath");

    JointCoherentLabels out;
    out.mu = system_label(alpha, lambdas, coeffs);
    out.mu_bath.resize(n);
    for (std::size_t j = 0; j < n; ++j)
    {
        cplx mu_j = alpha * coeffs.u_bath[j];
        if (excited)
        {
            mu_j += lambdas[j] * std::exp(cplx(0.0, -bath.mode(j).omega * coeffs.t));
            const auto& cross = *coeffs.v_cross;
            for (std::size_t s = 0; s < n; ++s)
                mu_j += cross(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(s)) * lambdas[s];
        }
        out.mu_bath[j] = mu_j;
    }
    return out;
}

}  // namespace boson_decay
