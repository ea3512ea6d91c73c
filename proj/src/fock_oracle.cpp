#include "boson_decay/fock_oracle.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "boson_decay/errors.hpp"

namespace boson_decay {

double DensityMatrixFock::purity() const
{
    return (rho * rho).trace().real();
}

double DensityMatrixFock::mean_number() const
{
    double acc = 0.0;
    for (Eigen::Index m = 0; m < rho.rows(); ++m)
        acc += static_cast<double>(m) * rho(m, m).real();
    return acc;
}

cplx DensityMatrixFock::mean_annihilation() const
{
    cplx acc{};
    for (Eigen::Index m = 1; m < rho.rows(); ++m)
        acc += std::sqrt(static_cast<double>(m)) * rho(m, m - 1);
    return acc;
}

std::vector<double> DensityMatrixFock::populations() const
{
    std::vector<double> out(dim());
    for (std::size_t m = 0; m < out.size(); ++m)
        out[m] = rho(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)).real();
    return out;
}

double DensityMatrixFock::coherent_fidelity(cplx label) const
{
    const Eigen::VectorXcd c = coherent_amplitudes(label, static_cast<unsigned>(dim() - 1));
    return (c.adjoint() * rho * c)(0, 0).real();
}

double DensityMatrixFock::hermiticity_defect() const
{
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrixFock::min_eigenvalue() const
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

double DensityMatrixFock::max_offdiagonal() const
{
    double worst = 0.0;
    for (Eigen::Index i = 0; i < rho.rows(); ++i)
        for (Eigen::Index j = 0; j < rho.cols(); ++j)
            if (i != j)
                worst = std::max(worst, std::abs(rho(i, j)));
    return worst;
}

namespace {

std::size_t checked_power(std::size_t base, std::size_t exponent, std::size_t cap)
{
    std::size_t out = 1;
    for (std::size_t i = 0; i < exponent; ++i)
    {
        if (out > cap / base)
            return cap + 1;
        out *= base;
    }
    return out;
}

void decode(std::size_t index, std::size_t base, std::vector<unsigned>& occ)
{
    for (auto& o : occ)
    {
        o = static_cast<unsigned>(index % base);
        index /= base;
    }
}

}  // namespace

FullFockOracle::FullFockOracle(SystemMode system, const DiscreteBath& bath, unsigned n_max)
    : n_max_(n_max), n_bath_(bath.size())
{
    if (n_bath_ > max_bath_modes)
    {
        std::ostringstream msg;
        msg << "full Fock oracle supports at most " << max_bath_modes << " bath modes, got "
            << n_bath_;
        throw ResourceError(msg.str());
    }
    const std::size_t base = n_max_ + 1;
    product_dim_ = checked_power(base, n_bath_ + 1, max_dimension);
    if (product_dim_ > max_dimension)
    {
        std::ostringstream msg;
        msg << "full Fock oracle dimension (n_max+1)^(N+1) = " << base << "^" << (n_bath_ + 1)
            << " exceeds " << max_dimension;
        throw ResourceError(msg.str());
    }
    bath_dim_ = product_dim_ / base;

    // local position of each product state inside its excitation sector
    std::vector<std::size_t> local(product_dim_, std::numeric_limits<std::size_t>::max());
    std::vector<std::vector<std::size_t>> members(n_max_ + 1);
    std::vector<unsigned> occ(n_bath_ + 1);
    for (std::size_t idx = 0; idx < product_dim_; ++idx)
    {
        decode(idx, base, occ);
        unsigned total = 0;
        for (unsigned o : occ)
            total += o;
        if (total > n_max_)
            continue;
        local[idx] = members[total].size();
        members[total].push_back(idx);
    }

    std::vector<std::size_t> stride(n_bath_ + 1);
    stride[0] = 1;
    for (std::size_t k = 1; k <= n_bath_; ++k)
        stride[k] = stride[k - 1] * base;

    sectors_.resize(n_max_ + 1);
    for (unsigned K = 0; K <= n_max_; ++K)
    {
        const auto& states = members[K];
        const auto dim = static_cast<Eigen::Index>(states.size());
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
        Sector& sector = sectors_[K];
        sector.system_occupation.resize(states.size());
        sector.bath_index.resize(states.size());
        for (Eigen::Index s = 0; s < dim; ++s)
        {
            const std::size_t idx = states[s];
            decode(idx, base, occ);
            sector.system_occupation[s] = occ[0];
            sector.bath_index[s] = idx / base;
            if (occ[0] == K)
                sector.vacuum_bath_state = static_cast<std::size_t>(s);

            double energy = system.omega_b * occ[0];
            for (std::size_t j = 0; j < n_bath_; ++j)
                energy += bath.mode(j).omega * occ[j + 1];
            h(s, s) = energy;

            // xi_j b^dagger a_j moves one quantum from bath mode j to the system
            for (std::size_t j = 0; j < n_bath_; ++j)
            {
                if (occ[j + 1] == 0)
                    continue;
                const std::size_t target = idx + stride[0] - stride[j + 1];
                const auto t = static_cast<Eigen::Index>(local[target]);
                const double amp = bath.mode(j).xi
                                   * std::sqrt(static_cast<double>(occ[0] + 1)
                                               * static_cast<double>(occ[j + 1]));
                h(t, s) += amp;
                h(s, t) += amp;
            }
        }
        sector.eig = dense_eigensystem(h);
    }
}

Eigen::VectorXcd FullFockOracle::evolve_sector(const Sector& sector, std::size_t local, double t) const
{
    const auto& v = sector.eig.vectors;
    const auto row = static_cast<Eigen::Index>(local);
    Eigen::VectorXcd coeff(v.cols());
    for (Eigen::Index k = 0; k < v.cols(); ++k)
        coeff(k) = v(row, k) * std::exp(cplx(0.0, -sector.eig.values(k) * t));
    return v.cast<cplx>() * coeff;
}

DensityMatrixFock FullFockOracle::evolve(const OpenSystemState& initial, double t,
                                         double max_trace_defect) const
{
    const TruncatedState start = truncate_state(initial, n_max_);
    if (start.truncation_defect > max_trace_defect)
    {
        std::ostringstream msg;
        msg << "initial state loses " << start.truncation_defect
            << " of its norm at n_max = " << n_max_;
        throw TruncationError(msg.str(), start.truncation_defect);
    }

    // amplitude[m][bath configuration]
    Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(n_max_ + 1, static_cast<Eigen::Index>(bath_dim_));
    for (unsigned m = 0; m <= n_max_; ++m)
    {
        const cplx c = start.amplitudes(m);
        if (c == cplx{})
            continue;
        const Sector& sector = sectors_[m];
        const Eigen::VectorXcd evolved = evolve_sector(sector, sector.vacuum_bath_state, t);
        for (Eigen::Index s = 0; s < evolved.size(); ++s)
            psi(sector.system_occupation[s], static_cast<Eigen::Index>(sector.bath_index[s]))
                += c * evolved(s);
    }

    DensityMatrixFock out;
    out.t = t;
    out.rho = psi * psi.adjoint();
    out.trace_defect = start.truncation_defect;
    return out;
}

double FullFockOracle::ground_state_fidelity(double t) const
{
    const Sector& vacuum = sectors_[0];
    const Eigen::VectorXcd evolved = evolve_sector(vacuum, vacuum.vacuum_bath_state, t);
    return std::norm(evolved(static_cast<Eigen::Index>(vacuum.vacuum_bath_state)));
}

DensityMatrixFock full_fock_oracle(SystemMode system, const DiscreteBath& bath,
                                   const OpenSystemState& initial, double t, unsigned n_max)
{
    return FullFockOracle(system, bath, n_max).evolve(initial, t);
}

bool ground_state_invariance_check(SystemMode system, const DiscreteBath& bath, double t)
{
    const FullFockOracle oracle(system, bath, 1);
    return std::abs(oracle.ground_state_fidelity(t) - 1.0) <= 1e-10;
}

Eigen::MatrixXd truncated_product_hamiltonian(SystemMode system, const DiscreteBath& bath,
                                              unsigned n_max)
{
    const std::size_t modes = bath.size() + 1;
    const std::size_t base = n_max + 1;
    const std::size_t dim = checked_power(base, modes, 4096);
    if (dim > 4096)
        throw ResourceError("truncated_product_hamiltonian is limited to 4096 states");
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    std::vector<unsigned> occ(modes);
    std::vector<std::size_t> stride(modes, 1);
    for (std::size_t k = 1; k < modes; ++k)
        stride[k] = stride[k - 1] * base;
    for (std::size_t idx = 0; idx < dim; ++idx)
    {
        decode(idx, base, occ);
        double energy = system.omega_b * occ[0];
        for (std::size_t j = 0; j + 1 < modes; ++j)
            energy += bath.mode(j).omega * occ[j + 1];
        h(idx, idx) = energy;
        for (std::size_t j = 0; j + 1 < modes; ++j)
        {
            if (occ[j + 1] == 0 || occ[0] == n_max)
                continue;
            const std::size_t target = idx + stride[0] - stride[j + 1];
            const double amp = bath.mode(j).xi
                               * std::sqrt(static_cast<double>(occ[0] + 1)
                                           * static_cast<double>(occ[j + 1]));
            h(target, idx) += amp;
            h(idx, target) += amp;
        }
    }
    return h;
}

}  // namespace boson_decay
