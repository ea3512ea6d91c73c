#include "boson_decay/propagator.hpp"

#include <cmath>
#include <stdexcept>

#include "boson_decay/kernels.hpp"
#include "boson_decay/parallel.hpp"

namespace boson_decay {

SystemMode SystemMode::make(double omega_b)
{
    if (!(omega_b > 0.0) || !std::isfinite(omega_b))
        throw std::invalid_argument("system mode: omega_b must be > 0");
    return SystemMode{omega_b};
}

cplx analytic_u(SystemMode system, double gamma, double t)
{
    return std::exp(cplx(-0.5 * gamma * t, -system.omega_b * t));
}

namespace {

// e^{-i w_j t} (e^{-gamma t/2} e^{-i(w_b - w_j)t} - 1) / (w_b - w_j - i gamma/2)
cplx lorentz_factor(SystemMode system, double gamma, double omega, double t)
{
    const double detuning = system.omega_b - omega;
    const cplx numerator = std::exp(cplx(-0.5 * gamma * t, -detuning * t)) - 1.0;
    return std::exp(cplx(0.0, -omega * t)) * numerator / cplx(detuning, -0.5 * gamma);
}

}  // namespace

cplx analytic_v(SystemMode system, double gamma, const BathMode& mode, double t)
{
    return mode.xi * lorentz_factor(system, gamma, mode.omega, t);
}

cplx analytic_uj(SystemMode system, double gamma, const BathMode& mode, double t)
{
    // conj(xi) == xi for the real couplings used here
    return mode.xi * lorentz_factor(system, gamma, mode.omega, t);
}

PropagatorCoefficients analytic_propagator(SystemMode system, const DiscreteBath& bath, double t)
{
    const double gamma = bath.spec().gamma;
    PropagatorCoefficients c;
    c.t = t;
    c.u = analytic_u(system, gamma, t);
    c.v.resize(bath.size());
    c.u_bath.resize(bath.size());
    for (std::size_t j = 0; j < bath.size(); ++j)
    {
        c.v[j] = analytic_v(system, gamma, bath.mode(j), t);
        c.u_bath[j] = analytic_uj(system, gamma, bath.mode(j), t);
    }
    c.provenance = Provenance::analytic;
    return c;
}

Eigen::MatrixXd single_particle_hamiltonian(SystemMode system, const DiscreteBath& bath)
{
    const auto freqs = bath.frequencies();
    const auto xi = bath.couplings();
    return arrowhead_matrix(system.omega_b, freqs, xi);
}

ExactPropagator::ExactPropagator(SystemMode system, const DiscreteBath& bath, EigenBackend backend)
    : system_(system), bath_freqs_(bath.frequencies())
{
    const auto xi = bath.couplings();
    if (backend == EigenBackend::arrowhead)
        eig_ = arrowhead_eigensystem(system.omega_b, bath_freqs_, xi);
    else
        eig_ = dense_eigensystem(arrowhead_matrix(system.omega_b, bath_freqs_, xi));
}

std::vector<cplx> ExactPropagator::system_row(double t) const
{
    const Eigen::Index dim = eig_.values.size();
    const auto& vecs = eig_.vectors;
    std::vector<cplx> weighted(static_cast<std::size_t>(dim));
    for (Eigen::Index k = 0; k < dim; ++k)
        weighted[k] = vecs(0, k) * std::exp(cplx(0.0, -eig_.values(k) * t));

    const auto& table = kernels::active_kernels();
    std::vector<cplx> row(static_cast<std::size_t>(dim));
    for (Eigen::Index j = 0; j < dim; ++j)
        row[j] = table.real_complex_dot(vecs.row(j).data(), weighted.data(), weighted.size());
    return row;
}

Eigen::MatrixXcd ExactPropagator::full_matrix(double t) const
{
    const Eigen::Index dim = eig_.values.size();
    Eigen::VectorXd c(dim);
    Eigen::VectorXd s(dim);
    for (Eigen::Index k = 0; k < dim; ++k)
    {
        c(k) = std::cos(eig_.values(k) * t);
        s(k) = -std::sin(eig_.values(k) * t);
    }
    const Eigen::MatrixXd v = eig_.vectors;
    Eigen::MatrixXcd g(dim, dim);
    g.real() = v * c.asDiagonal() * v.transpose();
    g.imag() = v * s.asDiagonal() * v.transpose();
    return g;
}

std::vector<cplx> ExactPropagator::evolve_labels(std::span<const cplx> labels, double t) const
{
    const Eigen::Index dim = eig_.values.size();
    if (labels.size() != static_cast<std::size_t>(dim))
        throw std::invalid_argument("evolve_labels: label vector has wrong size");
    const auto& vecs = eig_.vectors;
    const auto& table = kernels::active_kernels();

    // eigen-basis coordinates: w = V^T z, accumulated row by row
    std::vector<cplx> w(static_cast<std::size_t>(dim), cplx{});
    for (Eigen::Index j = 0; j < dim; ++j)
        if (labels[j] != cplx{})
            table.real_complex_axpy(labels[j], vecs.row(j).data(), w.data(), w.size());
    for (Eigen::Index k = 0; k < dim; ++k)
        w[k] *= std::exp(cplx(0.0, -eig_.values(k) * t));

    std::vector<cplx> out(static_cast<std::size_t>(dim));
    for (Eigen::Index j = 0; j < dim; ++j)
        out[j] = table.real_complex_dot(vecs.row(j).data(), w.data(), w.size());
    return out;
}

PropagatorCoefficients ExactPropagator::coefficients(double t, bool with_cross) const
{
    PropagatorCoefficients c;
    c.t = t;
    c.provenance = Provenance::oracle;
    const std::size_t n = bath_freqs_.size();
    if (with_cross)
    {
        const Eigen::MatrixXcd g = full_matrix(t);
        c.u = g(0, 0);
        c.v.resize(n);
        c.u_bath.resize(n);
        for (std::size_t j = 0; j < n; ++j)
        {
            c.v[j] = g(0, static_cast<Eigen::Index>(j + 1));
            c.u_bath[j] = g(static_cast<Eigen::Index>(j + 1), 0);
        }
        Eigen::MatrixXcd cross = g.bottomRightCorner(n, n);
        for (std::size_t j = 0; j < n; ++j)
            cross(j, j) -= std::exp(cplx(0.0, -bath_freqs_[j] * t));
        c.v_cross = std::move(cross);
        return c;
    }
    const auto row = system_row(t);
    c.u = row[0];
    c.v.assign(row.begin() + 1, row.end());
    // h is real symmetric, so e^{-iht} is symmetric and column 0 equals row 0
    c.u_bath = c.v;
    return c;
}

PropagatorCoefficients exact_propagator(SystemMode system, const DiscreteBath& bath, double t,
                                        bool with_cross)
{
    return ExactPropagator(system, bath).coefficients(t, with_cross);
}

double dissipation_sum(const PropagatorCoefficients& coeffs)
{
    return kernels::norm_sq(coeffs.v);
}

double unitarity_defect(const PropagatorCoefficients& coeffs)
{
    return std::abs(std::norm(coeffs.u) + dissipation_sum(coeffs) - 1.0);
}

double broadband_dissipation(double gamma, double t)
{
    return -std::expm1(-gamma * t);
}

double matrix_unitarity_defect(const Eigen::MatrixXcd& u)
{
    // real and imaginary blocks separately; real GEMM is markedly faster than complex here
    const Eigen::MatrixXd a = u.real();
    const Eigen::MatrixXd b = u.imag();
    Eigen::MatrixXd re = a * a.transpose();
    re.noalias() += b * b.transpose();
    re -= Eigen::MatrixXd::Identity(u.rows(), u.cols());
    Eigen::MatrixXd im = b * a.transpose();
    im.noalias() -= a * b.transpose();
    return (re.array().square() + im.array().square()).sqrt().maxCoeff();
}

}  // namespace boson_decay
