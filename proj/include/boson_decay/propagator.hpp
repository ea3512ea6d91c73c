#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "boson_decay/arrowhead.hpp"
#include "boson_decay/spectral_bath.hpp"

namespace boson_decay {

using cplx = std::complex<double>;

struct SystemMode
{
    double omega_b = 1.0;

    static SystemMode make(double omega_b);
};

enum class Provenance
{
    analytic,
    oracle
};

/// Heisenberg-picture coefficients at one time:
///   b(t)   = u b + sum_j v_j a_j
///   a_j(t) = e^{-i w_j t} a_j + u_j b + sum_s v_{j,s} a_s
/// v_cross, when present, holds v_{j,s} with the free phase e^{-i w_j t}
/// removed from its diagonal, so the full bath block of the propagator is
/// v_cross + diag(e^{-i w_j t}).
struct PropagatorCoefficients
{
    double t = 0.0;
    cplx u{1.0, 0.0};
    std::vector<cplx> v;
    std::vector<cplx> u_bath;
    std::optional<Eigen::MatrixXcd> v_cross;
    Provenance provenance = Provenance::analytic;
};

// Closed forms valid in the broadband (Wigner-Weisskopf) limit.
cplx analytic_u(SystemMode system, double gamma, double t);
cplx analytic_v(SystemMode system, double gamma, const BathMode& mode, double t);
cplx analytic_uj(SystemMode system, double gamma, const BathMode& mode, double t);

/// Closed forms for every mode of a discrete bath (no cross block).
PropagatorCoefficients analytic_propagator(SystemMode system, const DiscreteBath& bath, double t);

/// Single-excitation Hamiltonian: arrowhead with omega_b in the corner,
/// bath frequencies on the diagonal and couplings on the border.
Eigen::MatrixXd single_particle_hamiltonian(SystemMode system, const DiscreteBath& bath);

enum class EigenBackend
{
    arrowhead,
    dense
};

/// Exact propagator e^{-iht} of the discretized model. The eigendecomposition
/// is done once at construction; every time evaluation reuses it and is safe
/// to call concurrently.
class ExactPropagator
{
  public:
    ExactPropagator(SystemMode system, const DiscreteBath& bath,
                    EigenBackend backend = EigenBackend::arrowhead);

    std::size_t dimension() const { return bath_freqs_.size() + 1; }
    SystemMode system() const { return system_; }
    const SymmetricEigensystem& eigensystem() const { return eig_; }

    /// Row 0 of e^{-iht}: (u, v_1, ..., v_N). O(N^2).
    std::vector<cplx> system_row(double t) const;

    /// Full (N+1) x (N+1) propagator. O(N^3).
    Eigen::MatrixXcd full_matrix(double t) const;

    /// e^{-iht} z for a label vector z = (alpha, lambda_1, ..., lambda_N). O(N^2).
    std::vector<cplx> evolve_labels(std::span<const cplx> labels, double t) const;

    PropagatorCoefficients coefficients(double t, bool with_cross = false) const;

  private:
    SystemMode system_;
    std::vector<double> bath_freqs_;
    SymmetricEigensystem eig_;
};

/// One-shot convenience; prefer ExactPropagator for many time points.
PropagatorCoefficients exact_propagator(SystemMode system, const DiscreteBath& bath, double t,
                                        bool with_cross = false);

/// sum_j |v_j|^2
double dissipation_sum(const PropagatorCoefficients& coeffs);

/// | |u|^2 + sum_j |v_j|^2 - 1 |
double unitarity_defect(const PropagatorCoefficients& coeffs);

/// Broadband value of sum_j |v_j|^2: 1 - e^{-gamma t}.
double broadband_dissipation(double gamma, double t);

/// max_{ij} |(U U^dagger - I)_{ij}|
double matrix_unitarity_defect(const Eigen::MatrixXcd& u);

}  // namespace boson_decay
