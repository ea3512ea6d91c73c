#include "boson_decay/thermal.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "boson_decay/errors.hpp"
#include "boson_decay/kernels.hpp"
#include "boson_decay/parallel.hpp"

namespace boson_decay {

PhiFactor phi_discrete(const DiscreteBath& bath, const ThermalSpec& thermal,
                       const PropagatorCoefficients& coeffs)
{
    if (coeffs.u_bath.size() != bath.size())
        throw std::invalid_argument("phi_discrete: coefficient and bath mode counts differ");
    const auto occ = bath_occupations(bath, thermal);
    return PhiFactor{1.0 + kernels::weighted_norm_sq(occ, coeffs.u_bath), coeffs.t,
                     PhiMethod::discrete_sum};
}

PhiFactor phi_closed(double n_th, double gamma, double t)
{
    if (!(t >= 0.0) || !(n_th >= 0.0))
        throw std::invalid_argument("phi_closed: need t >= 0 and n_th >= 0");
    return PhiFactor{1.0 + n_th * broadband_dissipation(gamma, t), t, PhiMethod::closed_form};
}

ConditionalWavefunction conditional_wavefunction(cplx alpha, cplx u, const PhiFactor& phi)
{
    if (!(phi.value >= 1.0))
        throw std::invalid_argument("conditional_wavefunction: Phi must be >= 1");
    const double root = 1.0 / std::sqrt(phi.value);
    return ConditionalWavefunction{root, alpha * ((u - 1.0) * root + 1.0)};
}

double paper_mean_number_T(cplx alpha, cplx u, const PhiFactor& phi)
{
    if (!(phi.value >= 1.0))
        throw std::invalid_argument("paper_mean_number_T: Phi must be >= 1");
    return std::norm(alpha) * std::norm((u - 1.0) / phi.value + 1.0 / std::sqrt(phi.value));
}

double paper_mean_number_low_T(cplx alpha, double gamma, double t)
{
    return std::norm(alpha) * std::exp(-gamma * t);
}

double paper_mean_number_high_T(cplx alpha, double beta_omega_b, double gamma, double t,
                                const PhiFactor& phi)
{
    if (phi.value < 10.0)
        throw OutsideAsymptoticRegime("high-temperature asymptote needs Phi >= 10");
    return std::norm(alpha) * beta_omega_b / broadband_dissipation(gamma, t);
}

EffectiveHamiltonian EffectiveHamiltonian::make(double omega_b, double gamma, double n_th)
{
    if (!(gamma > 0.0))
        throw std::invalid_argument("effective Hamiltonian: gamma must be > 0");
    if (!(n_th >= 0.0))
        throw std::invalid_argument("effective Hamiltonian: n_th must be >= 0");
    return EffectiveHamiltonian{omega_b, gamma, n_th};
}

FockEvolution heff_evolve_fock(const EffectiveHamiltonian& h, unsigned n, double t)
{
    if (!(t >= 0.0))
        throw std::invalid_argument("heff_evolve_fock: t must be >= 0");
    const double rate = (h.n_th + static_cast<double>(n)) * h.gamma;
    const cplx amplitude = std::exp(cplx(-0.5 * rate * t, -static_cast<double>(n) * h.omega_b * t));
    const double decay_time = rate > 0.0 ? 1.0 / rate : std::numeric_limits<double>::infinity();
    return FockEvolution{amplitude, static_cast<double>(n) * std::exp(-rate * t), decay_time};
}

CoherentEvolution heff_evolve_coherent(const EffectiveHamiltonian& h, cplx alpha, double t)
{
    if (!(t >= 0.0))
        throw std::invalid_argument("heff_evolve_coherent: t must be >= 0");
    const double weight = std::exp(-0.5 * h.n_th * h.gamma * t);
    const cplx label = alpha * std::exp(cplx(-0.5 * h.gamma * t, -h.omega_b * t));
    const double rate = (h.n_th + 1.0) * h.gamma;
    return CoherentEvolution{weight, label, std::norm(alpha) * std::exp(-rate * t), 1.0 / rate};
}

SuperpositionEvolution heff_evolve_superposition(const EffectiveHamiltonian& h,
                                                 const CoherentSuperposition& state, double t,
                                                 unsigned n_max)
{
    if (state.terms.empty())
        throw std::invalid_argument("heff_evolve_superposition: empty superposition");
    const double initial_norm = superposition_norm_sq(state);
    if (!(initial_norm > 0.0))
        throw std::invalid_argument("heff_evolve_superposition: zero-norm superposition");

    CoherentSuperposition evolved;
    double weight = 1.0;
    for (const auto& term : state.terms)
    {
        const CoherentEvolution branch = heff_evolve_coherent(h, term.alpha, t);
        weight = branch.weight;
        evolved.terms.push_back({term.weight, branch.label});
    }
    if (n_max == 0)
        n_max = suggested_truncation(OpenSystemState{evolved});

    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n_max + 1);
    for (const auto& term : evolved.terms)
        psi += term.weight * coherent_amplitudes(term.alpha, n_max);
    const double exact_norm = superposition_norm_sq(evolved);
    const double truncated_norm = psi.squaredNorm();
    const double defect = (exact_norm - truncated_norm) / exact_norm;
    if (defect > 1e-6)
    {
        std::ostringstream msg;
        msg << "superposition loses " << defect << " of its norm at n_max = " << n_max;
        throw TruncationError(msg.str(), defect);
    }

    SuperpositionEvolution out;
    out.pre_normalization_trace = weight * weight * exact_norm / initial_norm;
    out.outside_short_time = h.gamma * t > short_time_limit;
    out.state.t = t;
    out.state.trace_defect = std::max(0.0, defect);
    out.state.rho = psi * psi.adjoint() / truncated_norm;

    double diag = 0.0;
    double off = 0.0;
    for (Eigen::Index i = 0; i < out.state.rho.rows(); ++i)
        for (Eigen::Index j = 0; j < out.state.rho.cols(); ++j)
            (i == j ? diag : off) += std::abs(out.state.rho(i, j));
    out.interference_ratio = off / diag;
    return out;
}

ThermalSampleSet::ThermalSampleSet(std::vector<double> occupations, double beta,
                                   std::size_t count, std::uint64_t seed)
    : occupations_(std::move(occupations)), beta_(beta), count_(count), seed_(seed)
{
    if (count_ == 0)
        throw std::invalid_argument("thermal samples: count must be >= 1");
    sigma_.resize(occupations_.size());
    for (std::size_t j = 0; j < occupations_.size(); ++j)
    {
        if (!(occupations_[j] >= 0.0) || !std::isfinite(occupations_[j]))
            throw std::domain_error("thermal samples: occupations must be finite and >= 0");
        sigma_[j] = std::sqrt(0.5 * occupations_[j]);
    }
}

void ThermalSampleSet::fill(std::size_t k, std::span<cplx> out) const
{
    if (out.size() != sigma_.size())
        throw std::invalid_argument("thermal samples: output span has wrong size");
    // One independent stream per sample index.
    std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                      static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    std::mt19937_64 engine(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t j = 0; j < sigma_.size(); ++j)
    {
        const double re = normal(engine);
        const double im = normal(engine);
        out[j] = cplx(sigma_[j] * re, sigma_[j] * im);
    }
}

std::vector<cplx> ThermalSampleSet::sample(std::size_t k) const
{
    std::vector<cplx> out(modes());
    fill(k, out);
    return out;
}

std::vector<std::vector<cplx>> ThermalSampleSet::materialize() const
{
    std::vector<std::vector<cplx>> out(count_);
    for (std::size_t k = 0; k < count_; ++k)
        out[k] = sample(k);
    return out;
}

ThermalSampleSet::SecondMoments ThermalSampleSet::second_moments() const
{
    const std::size_t n = modes();
    // per mode, per sample |lambda|^2; stored sample-major then reduced in order
    std::vector<double> values(count_ * n);
    parallel_for(count_, [&](std::size_t k) {
        std::vector<cplx> lam(n);
        fill(k, lam);
        for (std::size_t j = 0; j < n; ++j)
            values[j * count_ + k] = std::norm(lam[j]);
    });
    SecondMoments out;
    out.mean.resize(n);
    out.standard_error.resize(n);
    const double m = static_cast<double>(count_);
    std::vector<double> dev(count_);
    for (std::size_t j = 0; j < n; ++j)
    {
        std::span<const double> col(values.data() + j * count_, count_);
        const double mean = pairwise_sum(col) / m;
        for (std::size_t k = 0; k < count_; ++k)
            dev[k] = (col[k] - mean) * (col[k] - mean);
        const double var = count_ > 1 ? pairwise_sum(dev) / (m - 1.0) : 0.0;
        out.mean[j] = mean;
        out.standard_error[j] = std::sqrt(var / m);
    }
    return out;
}

bool ThermalSampleSet::passes_sanity_gate(double n_sigma) const
{
    const auto moments = second_moments();
    for (std::size_t j = 0; j < modes(); ++j)
    {
        const double tol = n_sigma * moments.standard_error[j];
        if (std::abs(moments.mean[j] - occupations_[j]) > tol + 1e-300)
        {
            if (occupations_[j] == 0.0 && moments.mean[j] == 0.0)
                continue;
            return false;
        }
    }
    return true;
}

ThermalSampleSet sample_thermal_bath(const DiscreteBath& bath, const ThermalSpec& thermal,
                                     std::size_t count, std::uint64_t seed)
{
    if (thermal.beta == 0.0)
        throw std::domain_error("sample_thermal_bath: beta = 0 gives infinite variance");
    ThermalSampleSet samples(bath_occupations(bath, thermal), thermal.beta, count, seed);
    if (count > 1 && !samples.passes_sanity_gate())
        throw std::runtime_error("thermal samples failed the 5-sigma second-moment gate");
    return samples;
}

GaussianMoments gaussian_moment_oracle(cplx alpha, const DiscreteBath& bath,
                                       const ThermalSpec& thermal,
                                       const PropagatorCoefficients& coeffs)
{
    if (coeffs.v.size() != bath.size())
        throw std::invalid_argument("gaussian_moment_oracle: mode counts differ");
    const auto occ = bath_occupations(bath, thermal);
    const cplx mean = alpha * coeffs.u;
    return GaussianMoments{mean, std::norm(mean) + kernels::weighted_norm_sq(occ, coeffs.v)};
}

std::vector<MonteCarloMoments> mc_reduced_moments_series(
    cplx alpha, const DiscreteBath& bath, const ThermalSpec& thermal,
    std::span<const PropagatorCoefficients> coeffs, const ThermalSampleSet& samples)
{
    if (samples.modes() != bath.size())
        throw std::invalid_argument("mc_reduced_moments: samples and bath mode counts differ");
    if (samples.beta() != thermal.beta)
        throw std::invalid_argument("mc_reduced_moments: samples drawn at a different beta");
    for (const auto& c : coeffs)
        if (c.v.size() != bath.size())
            throw std::invalid_argument("mc_reduced_moments: coefficient mode count differs");

    const std::size_t n_t = coeffs.size();
    const std::size_t m = samples.count();
    std::vector<cplx> labels(n_t * m);
    parallel_for(m, [&](std::size_t k) {
        std::vector<cplx> lam(samples.modes());
        samples.fill(k, lam);
        for (std::size_t i = 0; i < n_t; ++i)
            labels[i * m + k] = system_label(alpha, lam, coeffs[i]);
    });

    std::vector<MonteCarloMoments> out(n_t);
    const double count = static_cast<double>(m);
    std::vector<double> re(m), im(m), occ(m), scratch(m);
    for (std::size_t i = 0; i < n_t; ++i)
    {
        const cplx* mu = labels.data() + i * m;
        for (std::size_t k = 0; k < m; ++k)
        {
            re[k] = mu[k].real();
            im[k] = mu[k].imag();
            occ[k] = std::norm(mu[k]);
        }
        const cplx mean(pairwise_sum(re) / count, pairwise_sum(im) / count);
        const double occupation = pairwise_sum(occ) / count;

        double mean_var = 0.0;
        double occ_var = 0.0;
        if (m > 1)
        {
            for (std::size_t k = 0; k < m; ++k)
                scratch[k] = std::norm(mu[k] - mean);
            mean_var = pairwise_sum(scratch) / (count - 1.0);
            for (std::size_t k = 0; k < m; ++k)
                scratch[k] = (occ[k] - occupation) * (occ[k] - occupation);
            occ_var = pairwise_sum(scratch) / (count - 1.0);
        }
        out[i].moments = GaussianMoments{mean, occupation};
        out[i].mean_standard_error = std::sqrt(mean_var / count);
        out[i].occupation_standard_error = std::sqrt(occ_var / count);
    }
    return out;
}

MonteCarloMoments mc_reduced_moments(cplx alpha, const DiscreteBath& bath,
                                     const ThermalSpec& thermal,
                                     const PropagatorCoefficients& coeffs,
                                     const ThermalSampleSet& samples)
{
    return mc_reduced_moments_series(alpha, bath, thermal, std::span(&coeffs, 1), samples)
        .front();
}

}  // namespace boson_decay
