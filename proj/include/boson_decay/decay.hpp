#pragma once

#include <complex>
#include <span>
#include <vector>

#include "boson_decay/propagator.hpp"
#include "boson_decay/spectral_bath.hpp"

namespace boson_decay {

/// Binomial number distribution P_m, m = 0..n, of a decayed Fock state.
struct PopulationDistribution
{
    double t = 0.0;
    std::vector<double> probs;

    double mean() const;
    double variance() const;
};

/// P_m = C(n, m) p^m (1 - p)^(n - m) with survival p; p = e^{-gamma t} gives
/// the broadband law, p = |u(t)|^2 from the exact propagator the discrete one.
PopulationDistribution fock_populations(unsigned n, double survival, double t = 0.0);

struct DecayLaw
{
    double survival;
    double decay_time;  // +inf when nothing decays
};

/// P_n(t) = e^{-n gamma t}, tau = 1 / (n gamma).
DecayLaw fock_survival(unsigned n, double gamma, double t);

struct CoherentDecay
{
    cplx label;
    double mean_number;
};

/// |alpha> -> |alpha u>, mean number |alpha u|^2. Requires |u| <= 1.
CoherentDecay coherent_decay(cplx alpha, cplx u);

/// Decay time of the coherent-state mean number, 1 / gamma.
double coherent_decay_time(double gamma);

/// Coherent labels of system and bath after the joint evolution of
/// |alpha> (x) prod_j |lambda_j>.
struct JointCoherentLabels
{
    cplx mu;
    std::vector<cplx> mu_bath;

    double norm_sq() const;
};

/// mu   = alpha u + sum_j v_j lambda_j
/// mu_j = alpha u_j + lambda_j e^{-i w_j t} + sum_s v_{j,s} lambda_s
/// Needs coeffs.v_cross whenever some lambda_j is nonzero; throws
/// CrossBlockRequired otherwise.
JointCoherentLabels excited_bath_evolution(cplx alpha, std::span<const cplx> lambdas,
                                           const PropagatorCoefficients& coeffs,
                                           const DiscreteBath& bath);

/// System label mu alone; only the system row of the coefficients is used.
cplx system_label(cplx alpha, std::span<const cplx> lambdas,
                  const PropagatorCoefficients& coeffs);

}  // namespace boson_decay
