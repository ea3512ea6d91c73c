#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "boson_decay/decay.hpp"
#include "boson_decay/fock_oracle.hpp"
#include "boson_decay/propagator.hpp"
#include "boson_decay/spectral_bath.hpp"
#include "boson_decay/states.hpp"

namespace boson_decay {

enum class PhiMethod
{
    discrete_sum,
    closed_form
};

/// Temperature factor Phi(T, t) >= 1.
struct PhiFactor
{
    double value = 1.0;
    double t = 0.0;
    PhiMethod method = PhiMethod::closed_form;
};

/// 1 + sum_j n_j |u_j(t)|^2 over the discrete bath.
PhiFactor phi_discrete(const DiscreteBath& bath, const ThermalSpec& thermal,
                       const PropagatorCoefficients& coeffs);

/// 1 + n_th (1 - e^{-gamma t}): the occupation taken out of the frequency
/// integral at omega_b.
PhiFactor phi_closed(double n_th, double gamma, double t);

/// Conditional system state Phi^{-1/2} |alpha((u - 1) Phi^{-1/2} + 1)>.
/// The weight is kept apart from the (normalized) coherent label.
struct ConditionalWavefunction
{
    double weight;
    cplx label;
};

ConditionalWavefunction conditional_wavefunction(cplx alpha, cplx u, const PhiFactor& phi);

/// |alpha|^2 |(u - 1)/Phi + Phi^{-1/2}|^2
double paper_mean_number_T(cplx alpha, cplx u, const PhiFactor& phi);

/// Low-temperature asymptote |alpha|^2 e^{-gamma t}.
double paper_mean_number_low_T(cplx alpha, double gamma, double t);

/// High-temperature asymptote |alpha|^2 beta omega_b / (1 - e^{-gamma t}).
/// Only meaningful for Phi >> 1: throws OutsideAsymptoticRegime when Phi < 10.
double paper_mean_number_high_T(cplx alpha, double beta_omega_b, double gamma, double t,
                                const PhiFactor& phi);

/// H_eff = (omega_b - i gamma/2) b^dagger b - (i/2) n_th gamma
struct EffectiveHamiltonian
{
    double omega_b;
    double gamma;
    double n_th;

    static EffectiveHamiltonian make(double omega_b, double gamma, double n_th);
};

struct FockEvolution
{
    cplx amplitude;
    double mean_number;
    double decay_time;  // +inf when n = 0 and n_th = 0
};

FockEvolution heff_evolve_fock(const EffectiveHamiltonian& h, unsigned n, double t);

struct CoherentEvolution
{
    double weight;
    cplx label;
    double mean_number;
    double decay_time;
};

CoherentEvolution heff_evolve_coherent(const EffectiveHamiltonian& h, cplx alpha, double t);

/// Largest gamma t for which the short-time effective Hamiltonian is used
/// without a warning.
inline constexpr double short_time_limit = 0.1;

struct SuperpositionEvolution
{
    /// Renormalized to unit trace.
    DensityMatrixFock state;
    /// Trace before renormalization: the norm leaked through H_eff.
    double pre_normalization_trace = 1.0;
    /// gamma t beyond short_time_limit
    bool outside_short_time = false;
    /// sum_{m != n} |rho_mn| / sum_m rho_mm of the renormalized state
    double interference_ratio = 0.0;
};

/// Branch-wise H_eff evolution of sum_k C_k |alpha_k> assembled in a Fock
/// basis truncated at n_max (0 picks suggested_truncation). Throws
/// TruncationError when the basis misses more than 1e-6 of the norm.
SuperpositionEvolution heff_evolve_superposition(const EffectiveHamiltonian& h,
                                                 const CoherentSuperposition& state, double t,
                                                 unsigned n_max = 0);

/// Glauber-P samples of a thermal bath: lambda_j is a circular complex
/// Gaussian with E|lambda_j|^2 = n_j. Sample k is a pure function of
/// (seed, k), so any subset can be regenerated on any worker.
class ThermalSampleSet
{
  public:
    ThermalSampleSet(std::vector<double> occupations, double beta, std::size_t count,
                     std::uint64_t seed);

    std::size_t count() const { return count_; }
    std::size_t modes() const { return sigma_.size(); }
    std::uint64_t seed() const { return seed_; }
    double beta() const { return beta_; }
    std::span<const double> occupations() const { return occupations_; }

    void fill(std::size_t k, std::span<cplx> out) const;
    std::vector<cplx> sample(std::size_t k) const;
    std::vector<std::vector<cplx>> materialize() const;

    /// Per-mode sample mean of |lambda_j|^2 and its standard error.
    struct SecondMoments
    {
        std::vector<double> mean;
        std::vector<double> standard_error;
    };
    SecondMoments second_moments() const;

    /// Every mode's sample mean within n_sigma standard errors of n_j.
    bool passes_sanity_gate(double n_sigma = 5.0) const;

  private:
    std::vector<double> occupations_;
    std::vector<double> sigma_;  // sqrt(n_j / 2) per quadrature
    double beta_;
    std::size_t count_;
    std::uint64_t seed_;
};

/// Draws `count` label vectors at the bath's occupations. Throws
/// std::domain_error for beta = 0, std::runtime_error if the sanity gate fails.
ThermalSampleSet sample_thermal_bath(const DiscreteBath& bath, const ThermalSpec& thermal,
                                     std::size_t count, std::uint64_t seed);

struct GaussianMoments
{
    cplx mean_b;
    double occupation;
};

/// Exact thermal averages of b(t) = u b + sum_j v_j a_j:
/// <b> = alpha u, <b^dagger b> = |alpha u|^2 + sum_j n_j |v_j|^2.
GaussianMoments gaussian_moment_oracle(cplx alpha, const DiscreteBath& bath,
                                       const ThermalSpec& thermal,
                                       const PropagatorCoefficients& coeffs);

struct MonteCarloMoments
{
    GaussianMoments moments;
    double mean_standard_error = 0.0;
    double occupation_standard_error = 0.0;
};

/// Sample average over branch labels mu = alpha u + sum_j v_j lambda_j.
/// Each branch is a coherent state, so <b^dagger b> is the mean of |mu|^2.
MonteCarloMoments mc_reduced_moments(cplx alpha, const DiscreteBath& bath,
                                     const ThermalSpec& thermal,
                                     const PropagatorCoefficients& coeffs,
                                     const ThermalSampleSet& samples);

/// Same estimator over several time points, drawing each sample once.
std::vector<MonteCarloMoments> mc_reduced_moments_series(
    cplx alpha, const DiscreteBath& bath, const ThermalSpec& thermal,
    std::span<const PropagatorCoefficients> coeffs, const ThermalSampleSet& samples);

}  // namespace boson_decay
