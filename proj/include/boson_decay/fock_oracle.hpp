#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "boson_decay/arrowhead.hpp"
#include "boson_decay/propagator.hpp"
#include "boson_decay/spectral_bath.hpp"
#include "boson_decay/states.hpp"

namespace boson_decay {

/// Reduced system density matrix in the Fock basis |0>..|n_max>.
struct DensityMatrixFock
{
    double t = 0.0;
    Eigen::MatrixXcd rho;
    /// Norm of the initial state lost to truncation.
    double trace_defect = 0.0;

    std::size_t dim() const { return static_cast<std::size_t>(rho.rows()); }
    double trace() const { return rho.trace().real(); }
    double purity() const;
    /// tr(rho b^dagger b)
    double mean_number() const;
    /// tr(rho b)
    cplx mean_annihilation() const;
    std::vector<double> populations() const;
    /// <beta| rho |beta> with |beta> truncated to the same basis
    double coherent_fidelity(cplx label) const;
    /// max_{ij} |rho_ij - conj(rho_ji)|
    double hermiticity_defect() const;
    double min_eigenvalue() const;
    double max_offdiagonal() const;
};

/// Dense evolution of the full Hamiltonian in the truncated product Fock
/// basis, followed by a partial trace over the bath.
///
/// The Hamiltonian conserves the total excitation number K, and a system state
/// with bath vacuum has K = m <= n_max, so only the sectors K <= n_max are
/// built. Inside those sectors the truncated and untruncated Hamiltonians
/// coincide, hence for Fock(n) with n_max >= n the evolution is exact.
class FullFockOracle
{
  public:
    static constexpr std::size_t max_bath_modes = 4;
    static constexpr std::size_t max_dimension = 200000;

    /// Throws ResourceError when the bath has more than 4 modes or
    /// (n_max + 1)^(N + 1) exceeds 2e5.
    FullFockOracle(SystemMode system, const DiscreteBath& bath, unsigned n_max);

    unsigned n_max() const { return n_max_; }
    std::size_t product_dimension() const { return product_dim_; }

    /// Throws TruncationError when the initial state loses more than
    /// `max_trace_defect` of its norm to truncation.
    DensityMatrixFock evolve(const OpenSystemState& initial, double t,
                             double max_trace_defect = 1e-6) const;

    /// |<0, {0_j}| U(t) |0, {0_j}>|^2
    double ground_state_fidelity(double t) const;

  private:
    struct Sector
    {
        std::vector<unsigned> system_occupation;
        std::vector<std::size_t> bath_index;
        std::size_t vacuum_bath_state = 0;  // local index of |K> (x) |{0_j}>
        SymmetricEigensystem eig;
    };

    Eigen::VectorXcd evolve_sector(const Sector& sector, std::size_t local, double t) const;

    unsigned n_max_;
    std::size_t n_bath_;
    std::size_t product_dim_;
    std::size_t bath_dim_;
    std::vector<Sector> sectors_;
};

DensityMatrixFock full_fock_oracle(SystemMode system, const DiscreteBath& bath,
                                   const OpenSystemState& initial, double t, unsigned n_max);

/// True when the joint ground state |0> (x) |{0_j}> is returned to itself
/// with fidelity 1 to 1e-10.
bool ground_state_invariance_check(SystemMode system, const DiscreteBath& bath, double t);

/// Full truncated Hamiltonian on the product basis (mode 0 = system, least
/// significant digit). For cross-checks on tiny systems only.
Eigen::MatrixXd truncated_product_hamiltonian(SystemMode system, const DiscreteBath& bath,
                                              unsigned n_max);

}  // namespace boson_decay
